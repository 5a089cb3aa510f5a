#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "urarq/errors.hpp"
#include "urarq/power_alloc.hpp"

using namespace urarq;

namespace {

double rel_diff(double a, double b) {
    return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b));
}

OutageChain chain_for_lambda(int rounds, double lambda, double phi) {
    PowerPolicy p;
    p.phi = phi;
    for (int m = 1; m <= rounds; ++m) {
        p.rho.push_back(rho_closed_form(m, rounds, lambda, phi));
    }
    return outage_chain(p);
}

} // namespace

TEST_CASE("two-round solution matches its algebraic form") {
    const double eps = 1e-3;
    const double phi = rate_constant(1.0);
    const Allocation a = allocate_two_round(1.0, eps);
    const double rho1_alg = phi * std::cbrt(2.0 / eps);
    const double rho2_alg = (phi / eps) * std::cbrt(eps / 2.0);
    CHECK(rel_diff(a.policy.rho[0], rho1_alg) < 1e-12);
    CHECK(rel_diff(a.policy.rho[1], rho2_alg) < 1e-12);

    const Allocation g = allocate(2, 1.0, eps);
    CHECK(rel_diff(g.policy.rho[0], a.policy.rho[0]) < 1e-12);
    CHECK(rel_diff(g.policy.rho[1], a.policy.rho[1]) < 1e-12);
}

TEST_CASE("frozen two-round allocation at eps 1e-3") {
    const Allocation a = allocate(2, 1.0, 1e-3);
    CHECK(a.lambda == doctest::Approx(5412.248613318507).epsilon(1e-11));
    CHECK(a.policy.rho[0] == doctest::Approx(21.648994453274025).epsilon(1e-12));
    CHECK(a.policy.rho[1] == doctest::Approx(136.38011910368647).epsilon(1e-12));
    CHECK(a.chain.per_round[0] == doctest::Approx(0.07937005259840997).epsilon(1e-12));
    CHECK(a.chain.per_round[1] == doctest::Approx(0.012599210498948733).epsilon(1e-12));
    CHECK(a.chain.drop_probability() == doctest::Approx(1e-3).epsilon(1e-9));
    CHECK(a.average_power == doctest::Approx(16.236745839955518).epsilon(1e-12));
    REQUIRE(a.policy.lambda.has_value());
    CHECK(*a.policy.lambda == a.lambda);
}

TEST_CASE("frozen three-round and one-round allocations") {
    const Allocation a3 = allocate(3, 1.0, 1e-3);
    CHECK(a3.lambda == doctest::Approx(570.8233371174645).epsilon(1e-11));
    CHECK(a3.policy.rho[0] == doctest::Approx(6.8498800454095745).epsilon(1e-12));
    CHECK(a3.policy.rho[1] == doctest::Approx(13.653422814399105).epsilon(1e-12));
    CHECK(a3.policy.rho[2] == doctest::Approx(54.24487166809294).epsilon(1e-12));
    CHECK(a3.chain.per_round[0] == doctest::Approx(0.25084845531135197).epsilon(1e-12));
    CHECK(a3.chain.per_round[1] == doctest::Approx(0.12584989506418268).epsilon(1e-12));
    CHECK(a3.chain.per_round[2] == doctest::Approx(0.03167639217533158).epsilon(1e-12));

    const Allocation a1 = allocate(1, 1.0, 1e-3);
    const double phi = rate_constant(1.0);
    CHECK(a1.lambda == doctest::Approx(phi / 1e-6).epsilon(1e-12));
    CHECK(a1.policy.rho[0] == doctest::Approx(phi / 1e-3).epsilon(1e-12));
    CHECK(a1.chain.drop_probability() == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(a1.average_power == doctest::Approx(phi / 1e-3).epsilon(1e-12));

    const Allocation a2 = allocate(2, 1.0, 1e-4);
    CHECK(a2.policy.rho[0] == doctest::Approx(46.641344654441376).epsilon(1e-12));
}

TEST_CASE("constraint exactness, recursion identities, and kkt on the grid") {
    for (int rounds = 1; rounds <= 8; ++rounds) {
        for (double rate : {0.5, 1.0, 2.0, 3.0}) {
            for (double eps : {1e-2, 1e-4, 1e-6}) {
                const Allocation a = allocate(rounds, rate, eps);
                const double phi = a.policy.phi;

                CHECK(rel_diff(a.chain.drop_probability(), eps) <= 1e-9);
                CHECK(rel_diff(a.policy.rho[rounds - 1] * a.policy.rho[rounds - 1],
                               rounds * a.lambda * phi) <= 1e-9);
                for (int m = 1; m < rounds; ++m) {
                    CHECK(rel_diff(a.policy.rho[m - 1] * a.policy.rho[m - 1],
                                   2.0 * phi * a.policy.rho[m]) <= 1e-9);
                }
                for (int m = 1; m <= rounds; ++m) {
                    CHECK(rel_diff(rho_closed_form(m, rounds, a.lambda, phi),
                                   a.policy.rho[m - 1]) <= 1e-9);
                    CHECK(a.chain.per_round[m - 1] > 0.0);
                    CHECK(a.chain.per_round[m - 1] < 1.0);
                }
                CHECK(kkt_residual_relative(a.policy, a.lambda) <= 1e-6);
                CHECK(a.average_power > 0.0);
            }
        }
    }
}

TEST_CASE("power ordering follows the two-per-phi pivot") {
    const double phi = rate_constant(1.0);
    // ultra-reliable targets: strictly increasing round powers
    for (double eps : {1e-7, 1e-6, 1e-5, 1e-4, 1e-3}) {
        const Allocation a = allocate(2, 1.0, eps);
        CHECK(a.policy.rho[1] > 2.0 * phi);
        CHECK(a.policy.rho[0] < a.policy.rho[1]);
    }
    // the equivalence in both directions over a wide target range
    for (double eps : {0.5, 0.3, 0.2, 0.1, 1e-2, 1e-3, 1e-5}) {
        const Allocation a = allocate(2, 1.0, eps);
        CHECK((a.policy.rho[0] < a.policy.rho[1]) ==
              (a.policy.rho[1] > 2.0 * phi));
    }
    // lax target flips the order
    const Allocation lax = allocate(2, 1.0, 0.5);
    CHECK(lax.policy.rho[1] < 2.0 * phi);
    CHECK(lax.policy.rho[0] > lax.policy.rho[1]);
}

TEST_CASE("two-round optimum beats constrained perturbations") {
    const double eps = 1e-3;
    const double phi = rate_constant(1.0);
    const Allocation a = allocate(2, 1.0, eps);
    for (double t : {-0.5, -0.1, -0.01, 0.01, 0.1, 0.5}) {
        PowerPolicy p;
        p.phi = phi;
        const double r1 = a.policy.rho[0] * (1.0 + t);
        p.rho = {r1, phi * phi / (eps * r1)};
        const OutageChain ch = outage_chain(p);
        CHECK(ch.drop_probability() == doctest::Approx(eps).epsilon(1e-12));
        CHECK(average_power(p, ch) > a.average_power);
    }
    CHECK(kkt_residual_relative(a.policy, a.lambda) < 1e-9);
    PowerPolicy bumped = a.policy;
    bumped.rho[0] *= 1.05;
    CHECK(kkt_residual_relative(bumped, a.lambda) > 1e-3);
}

TEST_CASE("drop probability decreases strictly in the multiplier") {
    const double phi = rate_constant(1.0);
    for (int rounds : {2, 4, 8}) {
        const double lambda0 = solve_lambda(rounds, phi, 1e-4);
        double prev = 2.0;
        for (double f : {0.25, 0.5, 1.0, 2.0, 4.0}) {
            const double drop =
                chain_for_lambda(rounds, lambda0 * f, phi).drop_probability();
            CHECK(drop < prev);
            prev = drop;
        }
    }
}

TEST_CASE("equal split baseline") {
    const PowerPolicy p = equal_power_policy(108.67368480018628, 2, 1.0);
    CHECK(p.rho.size() == 2);
    CHECK(p.rho[0] == doctest::Approx(54.33684240009314).epsilon(1e-12));
    CHECK(p.rho[1] == p.rho[0]);
    CHECK_FALSE(p.lambda.has_value());
    const OutageChain ch = outage_chain(p);
    CHECK(ch.drop_probability() == doctest::Approx(1e-3).epsilon(1e-9));
    CHECK(average_power(p, ch) == doctest::Approx(28.027562114276094).epsilon(1e-12));
    // the optimized schedule needs far less average power for the same drop
    CHECK(allocate(2, 1.0, 1e-3).average_power < 0.6 * average_power(p, ch));
}

TEST_CASE("chain audit under the closed-form outage model") {
    const Allocation a = allocate(2, 1.0, 1e-3);
    OutageModel model;
    model.method = OutageMethod::ClosedForm;
    const OutageChain audit =
        outage_chain(a.policy, ChannelCode::from_rate(200, 1.0), model);
    CHECK(audit.per_round[0] == doctest::Approx(0.07628547282243492).epsilon(1e-9));
    CHECK(audit.per_round[1] == doctest::Approx(0.012519728713452638).epsilon(1e-9));
    CHECK(audit.drop_probability() ==
          doctest::Approx(0.0009550734245143493).epsilon(1e-9));
}

TEST_CASE("average_power overloads agree") {
    const Allocation a = allocate(3, 2.0, 1e-4);
    CHECK(average_power(a.policy) ==
          doctest::Approx(average_power(a.policy, a.chain)).epsilon(1e-15));
}

TEST_CASE("infeasible and invalid requests are rejected") {
    try {
        allocate(3, 1.0, 0.99);
        FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
        CHECK(e.round() == 3);
    }
    PowerPolicy weak;
    weak.phi = rate_constant(1.0);
    weak.rho = {1.0};
    CHECK_THROWS_AS(outage_chain(weak), InfeasibleError);

    CHECK_THROWS_AS(allocate(0, 1.0, 1e-3), UsageError);
    CHECK_THROWS_AS(allocate(41, 1.0, 1e-3), UsageError);
    CHECK_THROWS_AS(allocate(2, -1.0, 1e-3), UsageError);
    CHECK_THROWS_AS(allocate(2, 1.0, 0.0), UsageError);
    CHECK_THROWS_AS(allocate(2, 1.0, 1.0), UsageError);
    CHECK_THROWS_AS(equal_power_policy(0.0, 2, 1.0), UsageError);
    CHECK_THROWS_AS(rho_closed_form(3, 2, 1.0, 1.0), UsageError);
}

TEST_CASE("kkt gradient vector shape and scale") {
    const Allocation a = allocate(4, 1.0, 1e-4);
    const std::vector<double> g = kkt_residual(a.policy, a.lambda);
    REQUIRE(g.size() == 4);
    for (double v : g) CHECK(std::fabs(v) < 1e-9 * a.policy.rho[0]);
}
