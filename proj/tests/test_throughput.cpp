#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "urarq/power_alloc.hpp"
#include "urarq/throughput.hpp"

using namespace urarq;

namespace {

ThroughputReport optimal_report(int rounds, double eps, double delay,
                                AccountingMode mode) {
    const Allocation a = allocate(rounds, 1.0, eps);
    ArqConfig cfg;
    cfg.feedback_delay = delay;
    cfg.accounting = mode;
    return arq_throughput(ChannelCode::from_rate(200, 1.0), a.chain, cfg);
}

} // namespace

TEST_CASE("frozen two-round throughput values") {
    const ThroughputReport r0 =
        optimal_report(2, 1e-3, 0.0, AccountingMode::RoundWeighted);
    CHECK(r0.channel_uses == doctest::Approx(231.74802103936398).epsilon(1e-12));
    CHECK(r0.efficiency == doctest::Approx(0.862143284347885).epsilon(1e-12));
    CHECK(r0.expected_rounds == doctest::Approx(1.07937005259840997).epsilon(1e-12));
    CHECK(r0.delivered_payload == doctest::Approx(199.8).epsilon(1e-12));
    CHECK(r0.drop_probability == doctest::Approx(1e-3).epsilon(1e-9));

    const ThroughputReport r100 =
        optimal_report(2, 1e-3, 100.0, AccountingMode::RoundWeighted);
    CHECK(r100.channel_uses == doctest::Approx(331.74802103936395).epsilon(1e-12));
    CHECK(r100.efficiency == doctest::Approx(0.602264331145151).epsilon(1e-12));
}

TEST_CASE("expectation accounting charges plain expected uses") {
    const ThroughputReport r0 =
        optimal_report(2, 1e-3, 0.0, AccountingMode::Expectation);
    CHECK(r0.channel_uses == doctest::Approx(215.874010519682).epsilon(1e-12));
    CHECK(r0.efficiency == doctest::Approx(0.9255398531718274).epsilon(1e-12));

    const ThroughputReport r100 =
        optimal_report(2, 1e-3, 100.0, AccountingMode::Expectation);
    CHECK(r100.channel_uses == doctest::Approx(315.874010519682).epsilon(1e-12));
    CHECK(r100.efficiency == doctest::Approx(0.6325306715525131).epsilon(1e-12));
}

TEST_CASE("single-round arq equals the open loop at any delay") {
    const Allocation a = allocate(1, 1.0, 1e-3);
    const ChannelCode code = ChannelCode::from_rate(200, 1.0);
    for (double delay : {0.0, 50.0, 500.0}) {
        for (AccountingMode mode :
             {AccountingMode::RoundWeighted, AccountingMode::Expectation}) {
            ArqConfig cfg;
            cfg.feedback_delay = delay;
            cfg.accounting = mode;
            const ThroughputReport r = arq_throughput(code, a.chain, cfg);
            CHECK(r.channel_uses == 200.0);
            CHECK(r.expected_rounds == 1.0);
            CHECK(r.efficiency ==
                  open_loop_throughput(code, a.chain.drop_probability()));
        }
    }
}

TEST_CASE("open loop throughput basics") {
    const ChannelCode code = ChannelCode::from_rate(200, 1.0);
    CHECK(open_loop_throughput(code, 1e-3) == doctest::Approx(0.999).epsilon(1e-15));
    CHECK(open_loop_throughput(code, 0.0) == 1.0);
    const ChannelCode half = ChannelCode::from_rate(400, 0.5);
    CHECK(open_loop_throughput(half, 0.1) == doctest::Approx(0.45).epsilon(1e-15));
}

TEST_CASE("efficiency falls strictly as feedback delay grows") {
    for (int rounds : {2, 3}) {
        for (AccountingMode mode :
             {AccountingMode::RoundWeighted, AccountingMode::Expectation}) {
            double prev = 10.0;
            for (double delay = 0.0; delay <= 200.0; delay += 20.0) {
                const double eta =
                    optimal_report(rounds, 1e-3, delay, mode).efficiency;
                CHECK(eta < prev);
                prev = eta;
            }
        }
    }
}

TEST_CASE("efficiency never exceeds the code rate") {
    for (int rounds : {1, 2, 3, 4}) {
        for (double eps : {1e-5, 1e-3, 1e-2}) {
            for (double delay : {0.0, 100.0}) {
                const ThroughputReport r = optimal_report(
                    rounds, eps, delay, AccountingMode::RoundWeighted);
                CHECK(r.efficiency <= 1.0);
                CHECK(r.efficiency > 0.0);
            }
        }
    }
}

TEST_CASE("efficiency approaches the rate as outages vanish") {
    // chain with per-round outage ~1e-8: throughput within a hair of R
    PowerPolicy strong;
    strong.phi = rate_constant(1.0);
    strong.rho = {strong.phi * 1e8, strong.phi * 1e8};
    const OutageChain ch = outage_chain(strong);
    const ThroughputReport r =
        arq_throughput(ChannelCode::from_rate(200, 1.0), ch, {});
    CHECK(r.efficiency == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("throughput declines as rounds increase at fixed target") {
    for (double eps : {1e-5, 1e-4, 1e-3}) {
        double prev = 10.0;
        for (int rounds : {2, 3, 4}) {
            const double eta =
                optimal_report(rounds, eps, 0.0, AccountingMode::RoundWeighted)
                    .efficiency;
            CHECK(eta < prev);
            prev = eta;
        }
    }
    // frozen spot value for the three-round optimum
    CHECK(optimal_report(3, 1e-3, 0.0, AccountingMode::RoundWeighted).efficiency ==
          doctest::Approx(0.6257811827437963).epsilon(1e-12));
    CHECK(optimal_report(3, 1e-3, 0.0, AccountingMode::RoundWeighted).channel_uses ==
          doctest::Approx(319.2809331913084).epsilon(1e-12));
}

TEST_CASE("report composes from the three accounting pieces") {
    const Allocation a = allocate(3, 2.0, 1e-4);
    const ChannelCode code = ChannelCode::from_rate(150, 2.0);
    ArqConfig cfg;
    cfg.feedback_delay = 37.5;
    const ThroughputReport r = arq_throughput(code, a.chain, cfg);
    CHECK(r.channel_uses == expected_channel_uses(code, a.chain, cfg));
    CHECK(r.delivered_payload == expected_delivered_nats(code, a.chain));
    CHECK(r.efficiency == r.delivered_payload / r.channel_uses);
    CHECK(r.drop_probability == a.chain.drop_probability());
    const double expect_rounds =
        1.0 + a.chain.cumulative[0] + a.chain.cumulative[1];
    CHECK(r.expected_rounds == doctest::Approx(expect_rounds).epsilon(1e-13));
}

TEST_CASE("round weighting exceeds plain expectation for multi-round chains") {
    const Allocation a = allocate(3, 1.0, 1e-3);
    const ChannelCode code = ChannelCode::from_rate(200, 1.0);
    ArqConfig rw, ex;
    ex.accounting = AccountingMode::Expectation;
    rw.feedback_delay = ex.feedback_delay = 80.0;
    CHECK(expected_channel_uses(code, a.chain, rw) >
          expected_channel_uses(code, a.chain, ex));
}
