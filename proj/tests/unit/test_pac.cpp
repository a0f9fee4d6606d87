#include "derived_values.hpp"
#include "support.hpp"

#include "sspac/confidence.hpp"
#include "sspac/error.hpp"
#include "sspac/pac.hpp"
#include "sspac/sampler.hpp"

#include <doctest.h>

#include <cmath>

using namespace sspac;
using namespace sspac::test;
namespace derived = sspac::derived;

namespace {

PacConfig calibrated(double eps, double delta = 0.1) {
    PacConfig cfg;
    cfg.epsilon = eps;
    cfg.delta = delta;
    cfg.alpha = kCalibratedAlpha;
    return cfg;
}

void check_search_log(const PacRunLog& log, double eps) {
    REQUIRE_FALSE(log.rounds.empty());
    for (std::size_t i = 0; i < log.rounds.size(); ++i) {
        CHECK(log.rounds[i].scale == std::ldexp(1.0, static_cast<int>(i)));
        if (i > 0) {
            CHECK(log.rounds[i].target_n > log.rounds[i - 1].target_n);
            CHECK(log.rounds[i].calls >= log.rounds[i - 1].calls);
        }
        CHECK(log.rounds[i].mu_vi == doctest::Approx(log.iota * eps / (6.0 * log.rounds[i].scale)));
    }
    const PacRound& last = log.rounds.back();
    CHECK(last.v_norm <= last.scale);
    CHECK(log.final_delta == last.scale);
    CHECK(log.policy == last.policy);
    for (std::size_t i = 0; i + 1 < log.rounds.size(); ++i)
        CHECK(log.rounds[i].v_norm > log.rounds[i].scale);
}

} // namespace

TEST_CASE("allocation") {
    PacConfig cfg;
    cfg.epsilon = 0.1;
    cfg.delta = 0.1;
    cfg.alpha = 1.0;
    SUBCASE("reference value") { CHECK(allocation(1.0, 1.0, cfg, 3, 2, 2) == derived::kAllocationExample); }
    SUBCASE("monotone in X, antitone in y") {
        for (double eps : {0.05, 0.2, 1.0})
            for (std::size_t G : {1, 2, 4}) {
                cfg.epsilon = eps;
                CHECK(allocation(2.0, 1.0, cfg, 3, 2, G) > allocation(1.0, 1.0, cfg, 3, 2, G));
                CHECK(allocation(1.0, 1.0, cfg, 3, 2, G) < allocation(1.0, 0.5, cfg, 3, 2, G));
            }
    }
    SUBCASE("antitone in epsilon") {
        PacConfig coarse = cfg, fine = cfg;
        coarse.epsilon = 0.4;
        fine.epsilon = 0.2;
        CHECK(allocation(1.0, 0.3, fine, 3, 2, 2) > allocation(1.0, 0.3, coarse, 3, 2, 2));
    }
    SUBCASE("empirical support of zero counts as one") {
        CHECK(allocation(1.0, 1.0, cfg, 3, 2, 0) == allocation(1.0, 1.0, cfg, 3, 2, 1));
    }
    SUBCASE("nonpositive arguments") {
        CHECK_THROWS_AS(allocation(0.0, 1.0, cfg, 3, 2, 2), InvalidArgs);
        CHECK_THROWS_AS(allocation(1.0, -1.0, cfg, 3, 2, 2), InvalidArgs);
    }
}

TEST_CASE("PacConfig validation") {
    PacConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.epsilon = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgs);
    cfg = {};
    cfg.delta = 1.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgs);
    cfg = {};
    cfg.theta = 0.5;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgs);
    cfg = {};
    cfg.alpha = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgs);
}

TEST_CASE("search") {
    SUBCASE("deterministic 2-chain") {
        const SspMdp chain = two_chain();
        GenerativeModel g(chain, 1);
        const PacResult r = search(g, chain.costs(), calibrated(0.1));
        CHECK(r.log.final_delta == 2.0);
        CHECK(r.policy == uniform_policy(2));
        check_within(policy_value(chain, r.policy), value_iteration(chain).value, 1e-9);
        check_search_log(r.log, 0.1);
    }
    SUBCASE("coin flip") {
        const SspMdp coin = coin_flip();
        GenerativeModel g(coin, 3);
        const PacResult r = search(g, coin.costs(), calibrated(0.1));
        CHECK(r.log.final_delta == 2.0);
        CHECK(r.log.rounds.back().v_norm <= 2.0);
        check_search_log(r.log, 0.1);
    }
    SUBCASE("rounds stay within log2(2 B*) + 1 whenever every round was optimistic") {
        const SspMdp a = fixture_a();
        const double bound = std::log2(2.0 * derived::kFixtureABStar) + 1.0;
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            GenerativeModel g(a, seed);
            const PacResult r = search(g, a.costs(), calibrated(0.2));
            check_search_log(r.log, 0.2);
            bool optimistic = true;
            for (const PacRound& round : r.log.rounds)
                optimistic = optimistic && all_le(round.v_tilde, derived::kFixtureAVStar);
            if (optimistic) {
                CHECK(static_cast<double>(r.log.rounds.size()) <= bound);
                CHECK(r.log.final_delta <= 2.0 * derived::kFixtureABStar);
            }
        }
    }
    SUBCASE("the doubling cap is loud") {
        const SspMdp chain = gen_chain(4, 0.1, 1.0);
        GenerativeModel g(chain, 1);
        PacConfig cfg = calibrated(0.2);
        cfg.max_doublings = 1;
        CHECK_THROWS_AS(search(g, chain.costs(), cfg), DoublingCapExceeded);
    }
    SUBCASE("zero cost is rejected") {
        const SspMdp b = fixture_b();
        GenerativeModel g(b, 1);
        CHECK_THROWS_AS(search(g, b.costs(), calibrated(0.2)), InvalidArgs);
    }
    SUBCASE("thread count does not change the result") {
        const SspMdp a = fixture_a();
        GenerativeModel g1(a, 8), g4(a, 8);
        PacConfig cfg = calibrated(0.2);
        const PacResult r1 = search(g1, a.costs(), cfg);
        cfg.threads = 4;
        const PacResult r4 = search(g4, a.costs(), cfg);
        CHECK(r1.policy == r4.policy);
        CHECK(run_log_to_json(r1.log) == run_log_to_json(r4.log));
    }
}

TEST_CASE("solve_positive") {
    SUBCASE("MinCostZero on fixture_B") {
        const SspMdp b = fixture_b();
        GenerativeModel g(b, 1);
        CHECK_THROWS_AS(solve_positive(g, b.costs(), calibrated(0.2)), MinCostZero);
    }
    SUBCASE("fixture_A, eps = 0.2, delta = 0.1, 100 seeds") {
        const SspMdp a = fixture_a();
        int good = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            GenerativeModel g(a, seed);
            const PacResult r = solve_positive(g, a.costs(), calibrated(0.2));
            if (policy_is_proper(a, r.policy) &&
                sup_distance(policy_value(a, r.policy), derived::kFixtureAVStar) <= 0.2)
                ++good;
        }
        CHECK(good >= 90);
    }
}

TEST_CASE("estimate_diameter") {
    SUBCASE("deterministic 2-chain") {
        GenerativeModel g(two_chain(), 1);
        PacConfig cfg;
        cfg.epsilon = 0.1;
        const DiameterEstimate d = estimate_diameter(g, cfg);
        CHECK(d.d_hat >= 2.0);
        CHECK(d.d_hat <= (1.0 + 2.0 * 0.1 * 1.1) * 1.1 * 2.0);
        CHECK(static_cast<double>(d.log.rounds.size()) <= std::log2(2.0 * 1.1) + 1.0);
        REQUIRE(d.log.d_hat);
        CHECK(*d.log.d_hat == d.d_hat);
    }
    SUBCASE("rounds follow the doubling schedule and certify the accuracy") {
        const SspMdp chain = gen_chain(3, 0.2, 1.0);
        GenerativeModel g(chain, 5);
        PacConfig cfg;
        cfg.epsilon = 0.1;
        const DiameterEstimate d = estimate_diameter(g, cfg);
        for (std::size_t i = 0; i < d.log.rounds.size(); ++i) {
            const PacRound& r = d.log.rounds[i];
            CHECK(r.scale == std::ldexp(1.0, static_cast<int>(i)));
            REQUIRE(r.eta);
            CHECK(*r.eta == doctest::Approx(0.1 / r.scale));
            CHECK(r.mu_vi == 0.05);
        }
        CHECK(certified_l1_bound(g.samples(), cfg.delta) <= *d.log.rounds.back().eta / 2.0);
        CHECK(d.log.rounds.back().v_norm <= d.log.rounds.back().scale);
    }
    SUBCASE("coin flip, 50 seeds: D^ >= 2 in at least 45") {
        int covered = 0;
        PacConfig cfg;
        cfg.epsilon = 0.1;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            GenerativeModel g(coin_flip(), seed);
            covered += estimate_diameter(g, cfg).d_hat >= 2.0 ? 1 : 0;
        }
        CHECK(covered >= 45);
    }
}

TEST_CASE("solve_restricted") {
    SUBCASE("costs above nu leave the problem unchanged") {
        const SspMdp a = fixture_a();
        GenerativeModel g(a, 4);
        PacConfig cfg = calibrated(0.2);
        cfg.theta = 4.0;
        const PacResult r = solve_restricted(g, a.costs(), cfg);
        REQUIRE(r.log.nu);
        CHECK(*r.log.nu <= a.costs().min());
        CHECK(r.log.iota == a.costs().min());
        PacConfig half = calibrated(0.1, 0.05);
        GenerativeModel h(a, 4);
        CHECK(r.policy == solve_positive(h, a.costs(), half).policy);
    }
    SUBCASE("log carries the diameter rounds and the perturbation") {
        const SspMdp b = fixture_b();
        GenerativeModel g(b, 2);
        PacConfig cfg = calibrated(0.25);
        cfg.alpha = 1.0;
        cfg.theta = 4.0;
        const PacResult r = solve_restricted(g, b.costs(), cfg);
        REQUIRE(r.log.d_hat);
        REQUIRE(r.log.nu);
        CHECK(*r.log.nu == doctest::Approx(0.25 / (2.0 * 4.0 * *r.log.d_hat)));
        CHECK(r.log.iota == *r.log.nu);
        CHECK_FALSE(r.log.diameter_rounds.empty());
        check_search_log(r.log, 0.125);
        // Perturbation can only raise a policy's cost.
        REQUIRE(policy_is_proper(b, r.policy));
        CHECK(all_le(policy_value(b, r.policy), policy_value(perturb_costs(b, *r.log.nu), r.policy), 1e-12));
        const json j = run_log_to_json(r.log);
        CHECK(j.contains("diameter_rounds"));
        CHECK(j["policy"].get<std::vector<std::size_t>>() == r.policy.action);
    }
    SUBCASE("infinite theta is rejected") {
        const SspMdp b = fixture_b();
        GenerativeModel g(b, 2);
        CHECK_THROWS_AS(solve_restricted(g, b.costs(), calibrated(0.25)), InvalidArgs);
    }
}
