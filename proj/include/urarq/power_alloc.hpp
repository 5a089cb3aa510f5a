#ifndef URARQ_POWER_ALLOC_HPP
#define URARQ_POWER_ALLOC_HPP

#include <optional>
#include <vector>

#include "urarq/channel.hpp"
#include "urarq/fbl_outage.hpp"

namespace urarq {

// Per-round transmit SNRs for an M-round ARQ scheme, plus the rate constant
// phi = e^R - 1 they were designed against. Round m lives at rho[m-1].
struct PowerPolicy {
    std::vector<double> rho;
    double phi = 0.0;
    std::optional<double> lambda; // multiplier, present when solver-produced
};

// Per-round outages eps_m and their running products E_m = eps_1*...*eps_m.
// E_0 = 1 is implicit; E_M is the packet drop probability.
struct OutageChain {
    std::vector<double> per_round;
    std::vector<double> cumulative;
    double drop_probability() const { return cumulative.back(); }
};

struct Allocation {
    PowerPolicy policy;
    OutageChain chain;
    double lambda = 0.0;
    double average_power = 0.0;
};

// Lagrange multiplier for the minimum-average-power allocation meeting drop
// probability eps_target. Computed twice, by a closed form in log domain and
// by bisection on the drop-probability constraint; the two must agree to
// 1e-9 relative or NumericalError is thrown.
double solve_lambda(int rounds, double phi, double eps_target);

// Optimal SNR of round m (1-based) given the multiplier, in closed form.
double rho_closed_form(int m, int rounds, double lambda, double phi);

// Full optimal allocation for the target drop probability under the
// high-SNR outage model. Throws InfeasibleError when the stationary point
// puts some round's outage at or above one.
Allocation allocate(int rounds, double rate, double eps_target);

// Two-round special case evaluated from its explicit algebraic solution.
Allocation allocate_two_round(double rate, double eps_target);

// Outage chain of a policy under the high-SNR model eps_m = phi/rho_m, or
// under an arbitrary outage model at per-round SNR. Any per-round outage
// reaching one makes the chain degenerate and raises InfeasibleError.
OutageChain outage_chain(const PowerPolicy& policy);
OutageChain outage_chain(const PowerPolicy& policy, const ChannelCode& code,
                         const OutageModel& model);

// Expected per-frame SNR cost (1/M) * sum_m rho_m * E_{m-1}, with round-m
// occupancy taken from the chain.
double average_power(const PowerPolicy& policy, const OutageChain& chain);
double average_power(const PowerPolicy& policy); // high-SNR chain

// Uniform baseline: the budget split evenly, rho_m = budget/M every round.
PowerPolicy equal_power_policy(double budget, int rounds, double rate);

// Per-round stationarity gradient of the average-power Lagrangian,
// d/d rho_m of (avg power + lambda * E_M), zero at the optimum.
std::vector<double> kkt_residual(const PowerPolicy& policy, double lambda);

// Infinity norm of the gradient with each component scaled by its largest
// constituent term; the solver drives this below 1e-6.
double kkt_residual_relative(const PowerPolicy& policy, double lambda);

} // namespace urarq

#endif
