#ifndef URARQ_MC_SIM_HPP
#define URARQ_MC_SIM_HPP

#include <cstdint>
#include <vector>

#include "urarq/channel.hpp"
#include "urarq/power_alloc.hpp"
#include "urarq/throughput.hpp"

namespace urarq {

// Counter-based generator: every (trial, draw) pair maps to one uniform via
// integer hashing only, so a trial's randomness is independent of which
// worker runs it and of how many trials ran before it.
class TrialRng {
  public:
    TrialRng(std::uint64_t seed, std::uint64_t trial);

    // Uniform on (0,1), exclusive at both ends. Streams must be distinct
    // per draw within a trial.
    double uniform(std::uint64_t stream) const;

    // Unit-mean exponential fading gain for the given round (1-based).
    double gain(int round) const;

    // Secondary uniform consumed by the finite-blocklength decode rule.
    double decode_uniform(int round) const;

    static std::uint64_t mix(std::uint64_t x);

  private:
    std::uint64_t base_;
};

enum class DecodeRule {
    Threshold,          // success iff log(1+rho*z) >= R
    FiniteBlocklength,  // random decode at the normal-approximation level
};

struct SimConfig {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    int workers = 1;
    DecodeRule rule = DecodeRule::Threshold;
};

struct SimReport {
    std::uint64_t trials = 0;
    // Integer tallies, index m-1 for round m. attempts[m-1] counts trials
    // that transmitted in round m; failures[m-1] those that failed there.
    std::vector<std::uint64_t> attempts;
    std::vector<std::uint64_t> failures;

    std::vector<double> per_round_outage;
    std::vector<double> per_round_outage_se;
    double drop_probability = 0.0;
    double drop_probability_se = 0.0;
    double average_power = 0.0;
    double average_power_se = 0.0;
    double channel_uses = 0.0;
    double channel_uses_se = 0.0;
    double efficiency = 0.0;
    double efficiency_se = 0.0;
};

// Simulate the M-round ARQ protocol under the policy's per-round SNRs.
// Every estimate (and its standard error) is derived from the integer
// tallies alone, so the report is bitwise identical for any worker count.
SimReport simulate_arq(const PowerPolicy& policy, const ChannelCode& code,
                       const ArqConfig& arq, const SimConfig& sim);

} // namespace urarq

#endif
