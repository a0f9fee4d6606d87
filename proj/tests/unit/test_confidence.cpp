#include "derived_values.hpp"
#include "support.hpp"

#include "sspac/confidence.hpp"
#include "sspac/error.hpp"
#include "sspac/sampler.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sspac;
using namespace sspac::test;
namespace derived = sspac::derived;

TEST_CASE("bernstein_radius") {
    SUBCASE("zero p_hat leaves only the linear term") {
        for (std::uint64_t n : {1, 7, 1000}) {
            const double L = std::log(3.0 * 2.0 * static_cast<double>(n) / 0.05);
            CHECK(bernstein_radius(0.0, n, 3, 2, 0.05) == doctest::Approx(28.0 * L / static_cast<double>(n)));
        }
    }
    SUBCASE("p_hat = 0.5, n = 100, S = A = 2, delta = 0.1") {
        CHECK(bernstein_radius(0.5, 100, 2, 2, 0.1) == doctest::Approx(derived::kBernsteinHalf100).epsilon(1e-14));
    }
    SUBCASE("shrinks at large n") {
        CHECK(bernstein_radius(0.3, 1'000'000, 3, 2, 0.1) < bernstein_radius(0.3, 100, 3, 2, 0.1));
    }
    SUBCASE("delta outside (0,1)") {
        CHECK_THROWS_AS(bernstein_radius(0.5, 10, 2, 2, 0.0), InvalidDelta);
        CHECK_THROWS_AS(bernstein_radius(0.5, 10, 2, 2, 1.0), InvalidDelta);
        CHECK_THROWS_AS(bernstein_radius(0.5, 10, 2, 2, -0.5), InvalidDelta);
    }
    SUBCASE("matches the formula at random arguments") {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::uniform_int_distribution<std::uint64_t> count(1, 1'000'000);
        std::uniform_int_distribution<std::size_t> dim(1, 50);
        for (int i = 0; i < 20; ++i) {
            const double p = unit(rng);
            const std::uint64_t n = count(rng);
            const std::size_t S = dim(rng), A = dim(rng);
            const double delta = 0.001 + 0.998 * unit(rng);
            const long double L = std::log(static_cast<long double>(S) * A * n / delta);
            const long double want = 4.0L * std::sqrt(p * L / n) + 28.0L * L / n;
            CHECK(bernstein_radius(p, n, S, A, delta) == doctest::Approx(static_cast<double>(want)).epsilon(1e-13));
        }
    }
}

TEST_CASE("ConfidenceRadii uses n_plus = max(1, n)") {
    EmpiricalModel e(1, 1);
    const ConfidenceRadii r(e, 0.1);
    for (double b : r.row(0, 0))
        CHECK(b == bernstein_radius(0.0, 1, 1, 1, 0.1));
    CHECK(r.delta() == 0.1);
}

TEST_CASE("model_l1_distance") {
    const SspMdp a = fixture_a();
    CHECK(model_l1_distance(a.transitions(), a.transitions()) == 0.0);

    TransitionTensor p(1, 1, {1.0, 0.0}), q(1, 1, {0.0, 1.0});
    CHECK(model_l1_distance(p, q) == 2.0);

    CHECK(model_l1_distance(a.transitions(), fixture_b().transitions()) == derived::kFixtureAToBL1);
    CHECK_THROWS_AS(model_l1_distance(p, a.transitions()), ShapeMismatch);
}

TEST_CASE("certified_l1_bound") {
    SUBCASE("single deterministic observation") {
        EmpiricalModel e(1, 1);
        e.add_one(0, 0, 1);
        CHECK(certified_l1_bound(e, 0.1) == doctest::Approx(derived::kCertifiedSingleObservation).epsilon(1e-14));
    }
    SUBCASE("roughly halves when n quadruples") {
        // Exact halves so p_hat = (0.5, 0.5) in both models.
        EmpiricalModel e1(1, 1), e4(1, 1);
        e1.add(0, 0, std::vector<std::uint64_t>{5000, 5000});
        e4.add(0, 0, std::vector<std::uint64_t>{20000, 20000});
        const double ratio = certified_l1_bound(e4, 0.1) / certified_l1_bound(e1, 0.1);
        CHECK(ratio == doctest::Approx(derived::kCertifiedQuadrupleRatio).epsilon(1e-12));
        CHECK(ratio > 0.45);
        CHECK(ratio < 0.55);
    }
    SUBCASE("bounds the true L1 error in at least 90% of seeds") {
        const SspMdp m = fixture_a();
        int covered = 0;
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            GenerativeModel g(m, seed);
            const EmpiricalModel& e = g.collect_until(1000);
            covered += model_l1_distance(e.p_hat_tensor(), m.transitions()) <= certified_l1_bound(e, 0.1) ? 1 : 0;
        }
        CHECK(covered >= 180);
    }
    SUBCASE("row bound is the sum of the row's radii") {
        GenerativeModel g(fixture_a(), 5);
        const EmpiricalModel& e = g.collect_until(37);
        const ConfidenceRadii r(e, 0.2);
        double worst = 0.0;
        for (std::size_t s = 0; s < 3; ++s)
            for (std::size_t a = 0; a < 2; ++a) {
                double sum = 0.0;
                for (double b : r.row(s, a))
                    sum += b;
                CHECK(certified_row_bound(e, s, a, 0.2) == doctest::Approx(sum).epsilon(1e-15));
                worst = std::max(worst, sum);
            }
        CHECK(certified_l1_bound(e, 0.2) == doctest::Approx(worst).epsilon(1e-15));
    }
}

TEST_CASE("Bernstein event frequency on fixture_A") {
    const SspMdp m = fixture_a();
    int held = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        GenerativeModel g(m, seed);
        bool ok = true;
        for (std::uint64_t n : {10, 100, 500})
            ok = ok && within_radii(g.collect_until(n), m.transitions(), 0.1);
        held += ok ? 1 : 0;
    }
    INFO("event held in " << held << " of 200 seeds");
    CHECK(held >= 180);
}

TEST_CASE("within_radii flags a model outside the boxes") {
    EmpiricalModel e(1, 1);
    e.add(0, 0, std::vector<std::uint64_t>{1'000'000, 0});
    TransitionTensor far(1, 1, {0.0, 1.0});
    CHECK_FALSE(within_radii(e, far, 0.1));
    TransitionTensor same(1, 1, {1.0, 0.0});
    CHECK(within_radii(e, same, 0.1));
}
