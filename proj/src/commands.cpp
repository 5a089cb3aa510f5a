#include "urarq/commands.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "urarq/errors.hpp"
#include "urarq/power_alloc.hpp"
#include "urarq/sweep.hpp"

namespace urarq {

double to_nats(double value, Unit unit) {
    return unit == Unit::Bits ? value * M_LN2 : value;
}

double from_nats(double value, Unit unit) {
    return unit == Unit::Bits ? value / M_LN2 : value;
}

void write_table(const Table& table, OutputFormat format, std::ostream& os) {
    if (format == OutputFormat::Csv) {
        write_csv(table, os);
    } else {
        write_structured(table, os);
    }
}

namespace {

std::string method_name(OutageMethod m) {
    switch (m) {
        case OutageMethod::Integral: return "integral";
        case OutageMethod::ClosedForm: return "closed";
        case OutageMethod::Asymptotic: return "asymptotic";
    }
    return "?";
}

std::vector<int> parse_round_list(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_value_list(text)) {
        const int m = static_cast<int>(std::lround(v));
        if (std::fabs(v - m) > 1e-9 || m < 1) {
            throw UsageError("round counts must be positive integers");
        }
        out.push_back(m);
    }
    return out;
}

} // namespace

Table run_outage_curve(const OutageCurveOptions& opt) {
    std::vector<double> rates;
    if (opt.payload) {
        rates.push_back(to_nats(*opt.payload, opt.unit) /
                        static_cast<double>(opt.n));
    } else {
        for (double r : parse_value_list(opt.rate_list)) {
            rates.push_back(to_nats(r, opt.unit));
        }
    }
    const std::vector<double> grid = parse_value_list(opt.snr_db_list);

    Table t;
    if (opt.method) {
        t.columns = {"snr_db", "rate", "model", "eps", "clamped"};
    } else {
        t.columns = {"snr_db", "rate", "eps_integral", "eps_closed",
                     "eps_asymptotic"};
    }

    for (double rate : rates) {
        const ChannelCode code = ChannelCode::from_rate(opt.n, rate);
        for (double db : grid) {
            const SnrPoint snr = SnrPoint::from_db(db);
            const double rate_out = from_nats(rate, opt.unit);
            if (opt.method) {
                double value;
                std::int64_t clamped = 0;
                switch (*opt.method) {
                    case OutageMethod::Integral:
                        value = outage_fbl_integral(code, snr, opt.quadrature);
                        break;
                    case OutageMethod::ClosedForm: {
                        const OutageValue v = outage_fbl_closed(code, snr);
                        value = v.probability;
                        clamped = v.clamped ? 1 : 0;
                        break;
                    }
                    default:
                        value = outage_asymptotic(code.rate, snr, true);
                }
                t.add_row({db, rate_out, method_name(*opt.method), value,
                           clamped});
            } else {
                t.add_row({db, rate_out,
                           outage_fbl_integral(code, snr, opt.quadrature),
                           outage_fbl_closed(code, snr).probability,
                           outage_asymptotic(code.rate, snr, true)});
            }
        }
    }
    return t;
}

Table run_allocate(const AllocateOptions& opt) {
    Table t;
    t.columns = {"eps_target", "n",      "rate",   "m",
                 "rho_linear", "rho_db", "eps_m",  "E_m",
                 "lambda",     "avg_power", "cap_exceeded"};

    for (double eps : parse_value_list(opt.eps_list)) {
        for (double n_val : parse_value_list(opt.n_list)) {
            const auto n = static_cast<std::int64_t>(std::llround(n_val));
            if (n < 1 || std::fabs(n_val - static_cast<double>(n)) > 1e-9) {
                throw UsageError("blocklengths must be positive integers");
            }
            const double rate = opt.payload
                                    ? to_nats(*opt.payload, opt.unit) /
                                          static_cast<double>(n)
                                    : to_nats(opt.rate, opt.unit);
            const Allocation alloc = allocate(opt.rounds, rate, eps);
            for (int m = 1; m <= opt.rounds; ++m) {
                const double rho = alloc.policy.rho[m - 1];
                const std::int64_t over =
                    opt.power_cap && rho > *opt.power_cap ? 1 : 0;
                t.add_row({eps, n, from_nats(rate, opt.unit),
                           static_cast<std::int64_t>(m), rho,
                           SnrPoint{rho}.db(), alloc.chain.per_round[m - 1],
                           alloc.chain.cumulative[m - 1], alloc.lambda,
                           alloc.average_power, over});
            }
        }
    }
    return t;
}

Table run_throughput_curve(const ThroughputCurveOptions& opt) {
    const double rate = to_nats(opt.rate, opt.unit);
    const ChannelCode code = ChannelCode::from_rate(opt.n, rate);

    Table t;
    t.columns = {"m",         "rate",            "n",
                 "eps",       "delay",           "lambda",
                 "avg_power", "expected_rounds", "channel_uses",
                 "eta",       "eta_ol",          "drop"};
    for (int rounds : parse_round_list(opt.m_list)) {
        for (double eps : parse_value_list(opt.eps_list)) {
            const Allocation alloc = allocate(rounds, rate, eps);
            for (double delay : parse_value_list(opt.delay_list)) {
                ArqConfig cfg;
                cfg.feedback_delay = delay;
                cfg.accounting = opt.accounting;
                const ThroughputReport rep =
                    arq_throughput(code, alloc.chain, cfg);
                t.add_row({static_cast<std::int64_t>(rounds),
                           from_nats(rate, opt.unit),
                           static_cast<std::int64_t>(opt.n), eps, delay,
                           alloc.lambda, alloc.average_power,
                           rep.expected_rounds, rep.channel_uses,
                           from_nats(rep.efficiency, opt.unit),
                           from_nats(open_loop_throughput(code, eps),
                                     opt.unit),
                           rep.drop_probability});
            }
        }
    }
    return t;
}

Table run_simulate(const SimulateOptions& opt) {
    const double rate = to_nats(opt.rate, opt.unit);
    const ChannelCode code = ChannelCode::from_rate(opt.n, rate);

    PowerPolicy policy;
    std::optional<double> lambda;
    if (!opt.rho_list.empty()) {
        policy.rho = parse_value_list(opt.rho_list);
        if (policy.rho.size() != static_cast<std::size_t>(opt.rounds)) {
            throw UsageError("--rho needs exactly one SNR per round");
        }
        policy.phi = rate_constant(rate);
    } else {
        Allocation alloc = allocate(opt.rounds, rate, opt.eps_target);
        policy = std::move(alloc.policy);
        lambda = alloc.lambda;
    }
    const int rounds = static_cast<int>(policy.rho.size());

    ArqConfig arq;
    arq.feedback_delay = opt.feedback_delay;
    arq.accounting = opt.accounting;

    SimConfig sim;
    sim.trials = opt.trials;
    sim.seed = opt.seed;
    sim.workers = opt.workers;
    sim.rule = opt.rule;

    const SimReport rep = simulate_arq(policy, code, arq, sim);

    // Analytic counterparts under the model the decode rule realises.
    OutageModel ref_model;
    if (opt.rule == DecodeRule::Threshold) {
        ref_model.method = OutageMethod::Asymptotic;
        ref_model.linearized = false;
    } else {
        ref_model.method = OutageMethod::Integral;
    }
    const OutageChain ref = outage_chain(policy, code, ref_model);
    const ThroughputReport ref_rep = arq_throughput(code, ref, arq);
    const double ref_power = average_power(policy, ref);

    auto zscore = [](double mc, double analytic, double se) {
        if (se > 0.0) return (mc - analytic) / se;
        return mc == analytic ? 0.0 : std::numeric_limits<double>::infinity();
    };

    Table t;
    t.columns = {"round",           "rho",
                 "attempts",        "failures",
                 "outage_mc",       "outage_se",
                 "outage_ref",      "outage_z",
                 "drop_mc",         "drop_se",
                 "drop_ref",        "drop_z",
                 "avg_power_mc",    "avg_power_se",
                 "avg_power_ref",   "avg_power_z",
                 "channel_uses_mc", "channel_uses_se",
                 "channel_uses_ref", "channel_uses_z",
                 "efficiency_mc",   "efficiency_se",
                 "efficiency_ref",  "efficiency_z",
                 "trials",          "seed"};
    for (int m = 1; m <= rounds; ++m) {
        t.add_row({static_cast<std::int64_t>(m), policy.rho[m - 1],
                   static_cast<std::int64_t>(rep.attempts[m - 1]),
                   static_cast<std::int64_t>(rep.failures[m - 1]),
                   rep.per_round_outage[m - 1],
                   rep.per_round_outage_se[m - 1], ref.per_round[m - 1],
                   zscore(rep.per_round_outage[m - 1], ref.per_round[m - 1],
                          rep.per_round_outage_se[m - 1]),
                   rep.drop_probability, rep.drop_probability_se,
                   ref.drop_probability(),
                   zscore(rep.drop_probability, ref.drop_probability(),
                          rep.drop_probability_se),
                   rep.average_power, rep.average_power_se, ref_power,
                   zscore(rep.average_power, ref_power,
                          rep.average_power_se),
                   rep.channel_uses, rep.channel_uses_se,
                   ref_rep.channel_uses,
                   zscore(rep.channel_uses, ref_rep.channel_uses,
                          rep.channel_uses_se),
                   from_nats(rep.efficiency, opt.unit),
                   from_nats(rep.efficiency_se, opt.unit),
                   from_nats(ref_rep.efficiency, opt.unit),
                   zscore(rep.efficiency, ref_rep.efficiency,
                          rep.efficiency_se),
                   static_cast<std::int64_t>(opt.trials),
                   static_cast<std::int64_t>(opt.seed)});
    }
    return t;
}

} // namespace urarq
