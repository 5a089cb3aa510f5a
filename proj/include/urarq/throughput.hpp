#ifndef URARQ_THROUGHPUT_HPP
#define URARQ_THROUGHPUT_HPP

#include "urarq/channel.hpp"
#include "urarq/power_alloc.hpp"

namespace urarq {

// How expected channel occupation is accounted.
// RoundWeighted: sum_m m*n*E_{m-1} + D*sum_{m<M} m*E_{m-1}.
// Expectation:   n*sum_m E_{m-1}   + D*sum_{m<M} E_{m-1}.
// RoundWeighted is the default reference formula; Expectation is the plain
// expected use count of a stop-at-success protocol.
enum class AccountingMode { RoundWeighted, Expectation };

struct ArqConfig {
    double feedback_delay = 0.0; // channel uses consumed per feedback round
    AccountingMode accounting = AccountingMode::RoundWeighted;
};

struct ThroughputReport {
    double expected_rounds = 0.0;      // sum_m E_{m-1}
    double channel_uses = 0.0;         // accounted occupation, channel uses
    double delivered_payload = 0.0;    // K * (1 - E_M), nats
    double efficiency = 0.0;           // delivered_payload / channel_uses
    double drop_probability = 0.0;     // E_M
};

// Single-shot throughput R*(1 - outage), nats per channel use.
double open_loop_throughput(const ChannelCode& code, double outage);

// Accounted channel occupation of the ARQ exchange (see AccountingMode).
double expected_channel_uses(const ChannelCode& code, const OutageChain& chain,
                             const ArqConfig& config);

// Payload carried out per frame, K * (1 - E_M), nats.
double expected_delivered_nats(const ChannelCode& code,
                               const OutageChain& chain);

// Ratio of the two: the full report. M=1 reduces exactly to the open loop.
ThroughputReport arq_throughput(const ChannelCode& code,
                                const OutageChain& chain,
                                const ArqConfig& config = {});

} // namespace urarq

#endif
