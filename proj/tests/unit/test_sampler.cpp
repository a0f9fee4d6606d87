#include "support.hpp"

#include "sspac/confidence.hpp"
#include "sspac/error.hpp"
#include "sspac/sampler.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace sspac;
using namespace sspac::test;

namespace {

// Two states, two actions, rows with mixed supports.
SspMdp small_model() {
    TransitionTensor t(2, 2,
                       {
                           0.2, 0.3, 0.5, // (0,0)
                           0.0, 0.0, 1.0, // (0,1)
                           0.0, 0.6, 0.4, // (1,0)
                           0.5, 0.0, 0.5, // (1,1)
                       });
    return SspMdp(CostMatrix(2, 2, 0.5), t);
}

} // namespace

TEST_CASE("sample_transition") {
    SUBCASE("deterministic edge to the goal") {
        GenerativeModel g(two_chain(), 1);
        int other = 0;
        for (int i = 0; i < 1000; ++i)
            other += g.sample_transition(1, 0) == 2 ? 0 : 1;
        CHECK(other == 0);
    }
    SUBCASE("zero-mass successor is never drawn") {
        GenerativeModel g(small_model(), 5);
        int hits = 0;
        for (int i = 0; i < 100'000; ++i)
            hits += g.sample_transition(1, 0) == 0 ? 1 : 0;
        CHECK(hits == 0);
    }
    SUBCASE("coin flip frequency, seed 42") {
        GenerativeModel g(coin_flip(), 42);
        std::uint64_t goal = 0;
        for (int i = 0; i < 1'000'000; ++i)
            goal += g.sample_transition(0, 0) == 1 ? 1 : 0;
        const double freq = static_cast<double>(goal) / 1e6;
        CHECK(std::abs(freq - 0.5) <= 0.002);
        CHECK(g.total_calls() == 1'000'000);
        CHECK(g.calls(0, 0) == 1'000'000);
    }
    SUBCASE("draws depend on (seed, s, a, k) only") {
        GenerativeModel g1(small_model(), 9), g2(small_model(), 9);
        std::vector<std::size_t> a1, a2;
        for (int i = 0; i < 200; ++i) {
            a1.push_back(g1.sample_transition(0, 0));
            g1.sample_transition(1, 1);
        }
        for (int i = 0; i < 200; ++i)
            a2.push_back(g2.sample_transition(0, 0));
        CHECK(a1 == a2);
    }
    SUBCASE("different seeds give different streams") {
        GenerativeModel g1(coin_flip(), 1), g2(coin_flip(), 2);
        std::vector<std::size_t> a1, a2;
        for (int i = 0; i < 64; ++i) {
            a1.push_back(g1.sample_transition(0, 0));
            a2.push_back(g2.sample_transition(0, 0));
        }
        CHECK(a1 != a2);
    }
    SUBCASE("sampled pair is recorded") {
        GenerativeModel g(small_model(), 3);
        const std::size_t y = g.sample_transition(0, 0);
        CHECK(g.samples().n(0, 0) == 1);
        CHECK(g.samples().counts(0, 0)[y] == 1);
    }
}

TEST_CASE("collect_until") {
    SUBCASE("target 0 makes no calls") {
        GenerativeModel g(small_model(), 1);
        g.collect_until(0);
        CHECK(g.total_calls() == 0);
    }
    SUBCASE("target 10 from empty on a 2x2 model") {
        GenerativeModel g(small_model(), 1);
        const EmpiricalModel& e = g.collect_until(10);
        CHECK(g.total_calls() == 40);
        for (std::size_t s = 0; s < 2; ++s)
            for (std::size_t a = 0; a < 2; ++a)
                CHECK(e.n(s, a) == 10);
    }
    SUBCASE("samples are reused across calls") {
        GenerativeModel g(small_model(), 1);
        g.collect_until(10);
        g.collect_until(25);
        CHECK(g.total_calls() == 100);
        CHECK(g.samples().n(1, 1) == 25);
        g.collect_until(5);
        CHECK(g.total_calls() == 100);
    }
    SUBCASE("per-pair targets") {
        GenerativeModel g(small_model(), 1);
        const std::vector<std::uint64_t> targets{3, 0, 7, 1};
        g.collect_until(targets);
        CHECK(g.total_calls() == 11);
        CHECK(g.samples().n(0, 0) == 3);
        CHECK(g.samples().n(0, 1) == 0);
        CHECK(g.samples().n(1, 0) == 7);
        CHECK_THROWS_AS(g.collect_until(std::vector<std::uint64_t>{1, 2}), ShapeMismatch);
    }
    SUBCASE("counts do not depend on split or thread count") {
        GenerativeModel serial(small_model(), 17), stepwise(small_model(), 17), threaded(small_model(), 17);
        serial.collect_until(5000);
        for (std::uint64_t t : {1, 10, 333, 2000, 5000})
            stepwise.collect_until(t);
        threaded.collect_until(5000, 4);
        CHECK(serial.samples() == stepwise.samples());
        CHECK(serial.samples() == threaded.samples());
        CHECK(serial.total_calls() == threaded.total_calls());
    }
    SUBCASE("a new sample set starts empty and draws fresh samples") {
        GenerativeModel g(coin_flip(), 4), h(coin_flip(), 4);
        g.collect_until(100);
        g.start_new_sample_set();
        CHECK(g.samples().n(0, 0) == 0);
        g.collect_until(100);
        CHECK(g.total_calls() == 200);
        CHECK(g.calls(0, 0) == 200);
        // The second set holds draws 100..199 of the stream.
        GenerativeModel ref(coin_flip(), 4);
        const std::uint64_t first_goals = ref.collect_until(100).counts(0, 0)[1];
        const std::uint64_t all_goals = h.collect_until(200).counts(0, 0)[1];
        CHECK(g.samples().counts(0, 0)[1] == all_goals - first_goals);
    }
}

TEST_CASE("EmpiricalModel invariants") {
    GenerativeModel g(small_model(), 8);
    const EmpiricalModel& e = g.collect_until(997);
    for (std::size_t s = 0; s < 2; ++s) {
        for (std::size_t a = 0; a < 2; ++a) {
            const auto c = e.counts(s, a);
            const auto p = e.p_hat(s, a);
            CHECK(std::accumulate(c.begin(), c.end(), std::uint64_t{0}) == e.n(s, a));
            double sum = 0.0;
            for (std::size_t y = 0; y < 3; ++y) {
                CHECK(p[y] == static_cast<double>(c[y]) / static_cast<double>(e.n(s, a)));
                sum += p[y];
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
    SUBCASE("unsampled rows are all zero") {
        EmpiricalModel empty(2, 2);
        for (double x : empty.p_hat(1, 1))
            CHECK(x == 0.0);
        CHECK(empty.n_plus(1, 1) == 1);
    }
    SUBCASE("json round trip") {
        CHECK(empirical_from_json(empirical_to_json(e)) == e);
        CHECK(empirical_to_json(e).contains("counts"));
    }
}

TEST_CASE("empirical_gamma") {
    CHECK(empirical_gamma(EmpiricalModel(2, 2)) == 0);
    GenerativeModel chain(two_chain(), 1);
    CHECK(empirical_gamma(chain.collect_until(50)) == 1);
    GenerativeModel coin(coin_flip(), 42);
    CHECK(empirical_gamma(coin.collect_until(100)) == 2);

    SUBCASE("nondecreasing and bounded by the true support") {
        GenerativeModel g(fixture_a(), 3);
        const std::size_t truth = model_scalars(fixture_a()).gamma_support;
        std::size_t last = 0;
        for (std::uint64_t n : {1, 2, 4, 8, 16, 64, 256}) {
            const std::size_t gh = empirical_gamma(g.collect_until(n));
            CHECK(gh >= last);
            CHECK(gh <= truth);
            last = gh;
        }
    }
}

TEST_CASE("p_hat converges toward the truth") {
    const SspMdp m = fixture_a();
    std::vector<double> medians;
    for (std::uint64_t n : {100, 1000, 10000}) {
        std::vector<double> errs;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            GenerativeModel g(m, seed);
            errs.push_back(model_l1_distance(g.collect_until(n).p_hat_tensor(), m.transitions()));
        }
        std::ranges::nth_element(errs, errs.begin() + 10);
        medians.push_back(errs[10]);
    }
    CHECK(medians[0] > medians[1]);
    CHECK(medians[1] > medians[2]);
}
