#include "urarq/mc_sim.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "urarq/errors.hpp"
#include "urarq/fbl_outage.hpp"

namespace urarq {

std::uint64_t TrialRng::mix(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
}

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial)
    : base_(mix(seed ^ (0x9e3779b97f4a7c15ULL * (trial + 1)))) {}

double TrialRng::uniform(std::uint64_t stream) const {
    const std::uint64_t x = mix(base_ + 0xbf58476d1ce4e5b9ULL * (stream + 1));
    // 53 high bits, centered on the lattice: stays strictly inside (0,1).
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

double TrialRng::gain(int round) const {
    return -std::log(uniform(2 * static_cast<std::uint64_t>(round - 1)));
}

double TrialRng::decode_uniform(int round) const {
    return uniform(2 * static_cast<std::uint64_t>(round - 1) + 1);
}

namespace {

struct Tally {
    std::vector<std::uint64_t> attempts;
    std::vector<std::uint64_t> failures;
};

void run_range(const PowerPolicy& policy, const ChannelCode& code,
               const SimConfig& sim, std::uint64_t first, std::uint64_t last,
               Tally& tally) {
    const int rounds = static_cast<int>(policy.rho.size());
    const double rate = code.rate;
    const double sqrt_n = std::sqrt(static_cast<double>(code.n));

    for (std::uint64_t t = first; t < last; ++t) {
        const TrialRng rng(sim.seed, t);
        for (int m = 1; m <= rounds; ++m) {
            ++tally.attempts[m - 1];
            const double x = policy.rho[m - 1] * rng.gain(m);
            bool ok;
            if (sim.rule == DecodeRule::Threshold) {
                ok = shannon_capacity(x) >= rate;
            } else {
                const double v = channel_dispersion(x);
                double p_fail;
                if (v <= 0.0) {
                    p_fail = shannon_capacity(x) < rate ? 1.0 : 0.0;
                } else {
                    p_fail = gaussian_q(
                        sqrt_n * (shannon_capacity(x) - rate) / std::sqrt(v));
                }
                ok = !(rng.decode_uniform(m) < p_fail);
            }
            if (ok) break;
            ++tally.failures[m - 1];
        }
    }
}

} // namespace

SimReport simulate_arq(const PowerPolicy& policy, const ChannelCode& code,
                       const ArqConfig& arq, const SimConfig& sim) {
    const int rounds = static_cast<int>(policy.rho.size());
    if (rounds == 0) throw UsageError("policy has no rounds");
    if (sim.trials == 0) throw UsageError("trial count must be positive");
    if (sim.workers < 1 || sim.workers > 256) {
        throw UsageError("worker count must be between 1 and 256");
    }
    if (arq.feedback_delay < 0.0) {
        throw UsageError("feedback delay must be nonnegative");
    }
    for (double r : policy.rho) {
        if (!(r > 0.0)) throw UsageError("per-round SNR must be positive");
    }

    const std::uint64_t workers =
        std::min<std::uint64_t>(sim.workers, sim.trials);
    std::vector<Tally> tallies(workers);
    for (auto& t : tallies) {
        t.attempts.assign(rounds, 0);
        t.failures.assign(rounds, 0);
    }

    // Contiguous trial ranges per worker. The split never changes results:
    // a trial's draws depend only on (seed, trial index).
    std::vector<std::thread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) {
        const std::uint64_t first = sim.trials * w / workers;
        const std::uint64_t last = sim.trials * (w + 1) / workers;
        pool.emplace_back(run_range, std::cref(policy), std::cref(code),
                          std::cref(sim), first, last, std::ref(tallies[w]));
    }
    for (auto& th : pool) th.join();

    SimReport rep;
    rep.trials = sim.trials;
    rep.attempts.assign(rounds, 0);
    rep.failures.assign(rounds, 0);
    for (const auto& t : tallies) {
        for (int m = 0; m < rounds; ++m) {
            rep.attempts[m] += t.attempts[m];
            rep.failures[m] += t.failures[m];
        }
    }

    const double trials = static_cast<double>(sim.trials);
    rep.per_round_outage.assign(rounds, 0.0);
    rep.per_round_outage_se.assign(rounds, 0.0);
    for (int m = 0; m < rounds; ++m) {
        if (rep.attempts[m] == 0) continue;
        const double n_m = static_cast<double>(rep.attempts[m]);
        const double p = static_cast<double>(rep.failures[m]) / n_m;
        rep.per_round_outage[m] = p;
        rep.per_round_outage_se[m] = std::sqrt(p * (1.0 - p) / n_m);
    }

    const double p_drop =
        static_cast<double>(rep.failures[rounds - 1]) / trials;
    rep.drop_probability = p_drop;
    rep.drop_probability_se = std::sqrt(p_drop * (1.0 - p_drop) / trials);

    // Every trial that stopped after round r shares the same channel-use
    // weight and power cost, so the exact sample moments follow from the
    // stop histogram; that keeps them independent of worker count too.
    const double n = static_cast<double>(code.n);
    const double d = arq.feedback_delay;
    std::vector<double> use_weight(rounds), power_cost(rounds);
    {
        double w_acc = 0.0, p_acc = 0.0;
        for (int r = 1; r <= rounds; ++r) {
            const double mult =
                arq.accounting == AccountingMode::RoundWeighted
                    ? static_cast<double>(r)
                    : 1.0;
            w_acc += mult * n;
            if (r < rounds) w_acc += mult * d;
            p_acc += policy.rho[r - 1];
            use_weight[r - 1] = w_acc;
            power_cost[r - 1] = p_acc / static_cast<double>(rounds);
        }
    }

    double mean_w = 0.0, mean_w2 = 0.0;
    double mean_p = 0.0, mean_p2 = 0.0;
    double mean_y = 0.0, mean_yw = 0.0;
    for (int r = 1; r <= rounds; ++r) {
        const double stopped =
            static_cast<double>(rep.attempts[r - 1] - rep.failures[r - 1]) +
            (r == rounds ? static_cast<double>(rep.failures[r - 1]) : 0.0);
        const double frac = stopped / trials;
        const double w = use_weight[r - 1];
        const double p = power_cost[r - 1];
        mean_w += frac * w;
        mean_w2 += frac * w * w;
        mean_p += frac * p;
        mean_p2 += frac * p * p;
        const double delivered_frac =
            static_cast<double>(rep.attempts[r - 1] - rep.failures[r - 1]) /
            trials;
        mean_y += delivered_frac * code.K;
        mean_yw += delivered_frac * code.K * w;
    }

    auto variance = [](double m2, double m1) {
        return std::max(0.0, m2 - m1 * m1);
    };

    rep.channel_uses = mean_w;
    rep.channel_uses_se = std::sqrt(variance(mean_w2, mean_w) / trials);
    rep.average_power = mean_p;
    rep.average_power_se = std::sqrt(variance(mean_p2, mean_p) / trials);

    rep.efficiency = mean_y / mean_w;
    // Delta method for the ratio of means; Y in {0, K} makes E[Y^2] = K*E[Y].
    const double var_y = std::max(0.0, code.K * mean_y - mean_y * mean_y);
    const double cov_yw = mean_yw - mean_y * mean_w;
    const double var_w = variance(mean_w2, mean_w);
    const double ratio_num =
        std::max(0.0, var_y - 2.0 * rep.efficiency * cov_yw +
                          rep.efficiency * rep.efficiency * var_w);
    rep.efficiency_se = std::sqrt(ratio_num / trials) / mean_w;
    return rep;
}

} // namespace urarq
