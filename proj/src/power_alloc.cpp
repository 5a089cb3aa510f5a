#include "urarq/power_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "urarq/errors.hpp"

namespace urarq {

namespace {

constexpr int kMaxRounds = 40;

void check_rounds(int rounds) {
    if (rounds < 1 || rounds > kMaxRounds) {
        throw UsageError("round count must be between 1 and " +
                         std::to_string(kMaxRounds));
    }
}

void check_target(double eps_target) {
    if (!(eps_target > 0.0) || !(eps_target < 1.0)) {
        throw UsageError("target drop probability must lie in (0,1)");
    }
}

// log E_M(lambda) via the stationarity recursion rho_M = sqrt(M lambda phi),
// rho_m = sqrt(2 phi rho_{m+1}), all in log domain.
double log_drop_given_lambda(int rounds, double log_phi, double log_lambda) {
    double log_rho = 0.5 * (std::log(static_cast<double>(rounds)) +
                            log_lambda + log_phi);
    double sum_log_rho = log_rho;
    for (int m = rounds - 1; m >= 1; --m) {
        log_rho = 0.5 * (std::log(2.0) + log_phi + log_rho);
        sum_log_rho += log_rho;
    }
    return rounds * log_phi - sum_log_rho;
}

} // namespace

double solve_lambda(int rounds, double phi, double eps_target) {
    check_rounds(rounds);
    check_target(eps_target);
    if (!(phi > 0.0)) throw UsageError("rate constant must be positive");

    const double log_phi = std::log(phi);
    const double log_eps = std::log(eps_target);

    // Closed form: summing the per-round exponents of the stationary SNRs
    // gives log(prod rho_m) = (A log2 + B log phi + S log(M lambda)) / 2
    // with S = 2(1 - 2^-M), B = 2M - S, A = 2M - 2S, and the drop target
    // fixes log(M lambda).
    const double s = 2.0 * (1.0 - std::exp2(-rounds));
    const double a = 2.0 * rounds - 2.0 * s;
    const double b = 2.0 * rounds - s;
    const double log_m_lambda =
        (-a * std::log(2.0) + (2.0 * rounds - b) * log_phi - 2.0 * log_eps) /
        s;
    const double closed =
        std::exp(log_m_lambda - std::log(static_cast<double>(rounds)));

    // Independent route: bisection on the same drop constraint.
    double lo = log_phi - 2.0 * log_eps -
                std::log(static_cast<double>(rounds)); // single-round answer
    double hi = lo;
    int guard = 0;
    while (log_drop_given_lambda(rounds, log_phi, lo) < log_eps) {
        lo -= 2.0;
        if (++guard > 2000) {
            throw NumericalError("multiplier bracket search failed", 0.0);
        }
    }
    guard = 0;
    while (log_drop_given_lambda(rounds, log_phi, hi) > log_eps) {
        hi += 2.0;
        if (++guard > 2000) {
            throw NumericalError("multiplier bracket search failed", 0.0);
        }
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (log_drop_given_lambda(rounds, log_phi, mid) > log_eps) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double bisected = std::exp(0.5 * (lo + hi));

    const double mismatch = std::fabs(bisected - closed) / closed;
    if (!(mismatch <= 1e-9)) {
        throw NumericalError(
            "multiplier routes disagree beyond 1e-9 relative", mismatch);
    }
    return closed;
}

double rho_closed_form(int m, int rounds, double lambda, double phi) {
    check_rounds(rounds);
    if (m < 1 || m > rounds) throw UsageError("round index out of range");
    if (!(lambda > 0.0) || !(phi > 0.0)) {
        throw UsageError("multiplier and rate constant must be positive");
    }
    const double c = std::exp2(-(rounds - m));
    const double b = 2.0 - c;
    const double a = 2.0 - 2.0 * c;
    const double log_m_lambda =
        std::log(static_cast<double>(rounds)) + std::log(lambda);
    return std::exp(0.5 * (a * std::log(2.0) + b * std::log(phi) +
                           c * log_m_lambda));
}

namespace {

Allocation finish_allocation(int rounds, double phi, double eps_target,
                             double lambda, std::vector<double> rho) {
    // Raw per-round outages; any at or above one means the stationary
    // point asks a round for more reliability than any SNR can refuse.
    std::vector<double> eps(rho.size());
    int bad_round = 0;
    for (int m = 1; m <= rounds; ++m) {
        eps[m - 1] = phi / rho[m - 1];
        if (eps[m - 1] >= 1.0 &&
            (bad_round == 0 || eps[m - 1] > eps[bad_round - 1])) {
            bad_round = m;
        }
    }
    if (bad_round != 0) {
        throw InfeasibleError("target drop probability is infeasible: round " +
                                  std::to_string(bad_round) +
                                  " would need outage >= 1",
                              bad_round);
    }

    Allocation out;
    out.policy.rho = std::move(rho);
    out.policy.phi = phi;
    out.policy.lambda = lambda;
    out.lambda = lambda;
    out.chain.per_round = std::move(eps);
    out.chain.cumulative.resize(static_cast<std::size_t>(rounds));
    double prod = 1.0;
    for (int m = 0; m < rounds; ++m) {
        prod *= out.chain.per_round[m];
        out.chain.cumulative[m] = prod;
    }

    const double drop = out.chain.drop_probability();
    const double residual = std::fabs(drop - eps_target) / eps_target;
    if (!(residual <= 1e-9)) {
        throw NumericalError("allocation missed the drop target", residual);
    }
    out.average_power = average_power(out.policy, out.chain);
    return out;
}

} // namespace

Allocation allocate(int rounds, double rate, double eps_target) {
    check_rounds(rounds);
    check_target(eps_target);
    if (!(rate > 0.0)) throw UsageError("rate must be positive");

    const double phi = rate_constant(rate);
    const double lambda = solve_lambda(rounds, phi, eps_target);
    std::vector<double> rho(static_cast<std::size_t>(rounds));
    for (int m = 1; m <= rounds; ++m) {
        rho[m - 1] = rho_closed_form(m, rounds, lambda, phi);
    }
    return finish_allocation(rounds, phi, eps_target, lambda, std::move(rho));
}

Allocation allocate_two_round(double rate, double eps_target) {
    check_target(eps_target);
    if (!(rate > 0.0)) throw UsageError("rate must be positive");

    const double phi = rate_constant(rate);
    const double eps = eps_target;
    const double lambda =
        (phi / (2.0 * eps)) * std::cbrt(1.0 / (4.0 * eps));
    std::vector<double> rho{phi * std::cbrt(2.0 / eps),
                            (phi / eps) * std::cbrt(eps / 2.0)};
    return finish_allocation(2, phi, eps_target, lambda, std::move(rho));
}

namespace {

OutageChain build_chain(const std::vector<double>& eps) {
    for (std::size_t m = 0; m < eps.size(); ++m) {
        if (eps[m] >= 1.0) {
            throw InfeasibleError("round " + std::to_string(m + 1) +
                                      " has outage >= 1; the chain cannot "
                                      "deliver",
                                  static_cast<int>(m + 1));
        }
    }
    OutageChain chain;
    chain.per_round = eps;
    chain.cumulative.reserve(eps.size());
    double prod = 1.0;
    for (double e : eps) {
        prod *= e;
        chain.cumulative.push_back(prod);
    }
    return chain;
}

} // namespace

OutageChain outage_chain(const PowerPolicy& policy) {
    if (policy.rho.empty()) throw UsageError("policy has no rounds");
    std::vector<double> eps;
    eps.reserve(policy.rho.size());
    for (double r : policy.rho) {
        if (!(r > 0.0)) throw UsageError("per-round SNR must be positive");
        eps.push_back(policy.phi / r);
    }
    return build_chain(eps);
}

OutageChain outage_chain(const PowerPolicy& policy, const ChannelCode& code,
                         const OutageModel& model) {
    if (policy.rho.empty()) throw UsageError("policy has no rounds");
    std::vector<double> eps;
    eps.reserve(policy.rho.size());
    for (double r : policy.rho) {
        eps.push_back(outage(code, SnrPoint::from_linear(r), model));
    }
    return build_chain(eps);
}

double average_power(const PowerPolicy& policy, const OutageChain& chain) {
    if (chain.per_round.size() != policy.rho.size()) {
        throw UsageError("chain and policy round counts differ");
    }
    const std::size_t rounds = policy.rho.size();
    double sum = 0.0;
    double occupancy = 1.0; // E_{m-1}
    for (std::size_t m = 0; m < rounds; ++m) {
        sum += policy.rho[m] * occupancy;
        occupancy = chain.cumulative[m];
    }
    return sum / static_cast<double>(rounds);
}

double average_power(const PowerPolicy& policy) {
    return average_power(policy, outage_chain(policy));
}

PowerPolicy equal_power_policy(double budget, int rounds, double rate) {
    check_rounds(rounds);
    if (!(budget > 0.0)) throw UsageError("power budget must be positive");
    if (!(rate > 0.0)) throw UsageError("rate must be positive");
    PowerPolicy policy;
    policy.rho.assign(static_cast<std::size_t>(rounds),
                      budget / static_cast<double>(rounds));
    policy.phi = rate_constant(rate);
    return policy;
}

namespace {

// Gradient components with the magnitudes of their constituent terms, so
// callers can judge "zero" relative to the arithmetic that produced it.
void kkt_terms(const PowerPolicy& policy, double lambda,
               std::vector<double>& grad, std::vector<double>& scale) {
    const int rounds = static_cast<int>(policy.rho.size());
    if (rounds == 0) throw UsageError("policy has no rounds");
    const double phi = policy.phi;
    if (!(phi > 0.0)) throw UsageError("rate constant must be positive");

    std::vector<double> occupancy(static_cast<std::size_t>(rounds) + 1);
    occupancy[0] = 1.0;
    for (int m = 1; m <= rounds; ++m) {
        occupancy[m] = occupancy[m - 1] * (phi / policy.rho[m - 1]);
    }

    grad.assign(rounds, 0.0);
    scale.assign(rounds, 0.0);
    // d/d rho_m of (avg power + lambda * E_M): the own-round occupancy term
    // minus the knock-on effect of eps_m on every later round and on E_M.
    for (int m = 1; m <= rounds; ++m) {
        const double rho_m = policy.rho[m - 1];
        double tail = 0.0;
        for (int k = m + 1; k <= rounds; ++k) {
            tail += policy.rho[k - 1] * occupancy[k - 1];
        }
        const double t1 = occupancy[m - 1] / rounds;
        const double t2 = tail / (rounds * rho_m);
        const double t3 = lambda * occupancy[rounds] / rho_m;
        grad[m - 1] = t1 - t2 - t3;
        scale[m - 1] = std::max({std::fabs(t1), std::fabs(t2), std::fabs(t3)});
    }
}

} // namespace

std::vector<double> kkt_residual(const PowerPolicy& policy, double lambda) {
    std::vector<double> grad, scale;
    kkt_terms(policy, lambda, grad, scale);
    return grad;
}

double kkt_residual_relative(const PowerPolicy& policy, double lambda) {
    std::vector<double> grad, scale;
    kkt_terms(policy, lambda, grad, scale);
    double worst = 0.0;
    for (std::size_t m = 0; m < grad.size(); ++m) {
        worst = std::max(worst, std::fabs(grad[m]) / scale[m]);
    }
    return worst;
}

} // namespace urarq
