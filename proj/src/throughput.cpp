#include "urarq/throughput.hpp"

#include "urarq/errors.hpp"

namespace urarq {

double open_loop_throughput(const ChannelCode& code, double outage) {
    if (!(outage >= 0.0) || !(outage <= 1.0)) {
        throw UsageError("outage must lie in [0,1]");
    }
    // same operation order as arq_throughput so the single-round ARQ case
    // reproduces this value bit for bit
    return code.K * (1.0 - outage) / static_cast<double>(code.n);
}

double expected_channel_uses(const ChannelCode& code, const OutageChain& chain,
                             const ArqConfig& config) {
    const std::size_t rounds = chain.per_round.size();
    if (rounds == 0) throw UsageError("chain has no rounds");
    if (config.feedback_delay < 0.0) {
        throw UsageError("feedback delay must be nonnegative");
    }

    const double n = static_cast<double>(code.n);
    const double d = config.feedback_delay;
    double uses = 0.0;
    double occupancy = 1.0; // E_{m-1}
    for (std::size_t m = 1; m <= rounds; ++m) {
        const double weight =
            config.accounting == AccountingMode::RoundWeighted
                ? static_cast<double>(m)
                : 1.0;
        uses += weight * n * occupancy;
        if (m < rounds) uses += weight * d * occupancy;
        occupancy = chain.cumulative[m - 1];
    }
    return uses;
}

double expected_delivered_nats(const ChannelCode& code,
                               const OutageChain& chain) {
    if (chain.per_round.empty()) throw UsageError("chain has no rounds");
    return code.K * (1.0 - chain.drop_probability());
}

ThroughputReport arq_throughput(const ChannelCode& code,
                                const OutageChain& chain,
                                const ArqConfig& config) {
    ThroughputReport rep;
    rep.channel_uses = expected_channel_uses(code, chain, config);
    rep.delivered_payload = expected_delivered_nats(code, chain);
    rep.drop_probability = chain.drop_probability();
    rep.efficiency = rep.delivered_payload / rep.channel_uses;
    double occupancy = 1.0;
    for (std::size_t m = 0; m < chain.per_round.size(); ++m) {
        rep.expected_rounds += occupancy;
        occupancy = chain.cumulative[m];
    }
    return rep;
}

} // namespace urarq
