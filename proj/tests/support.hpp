#pragma once

#include "sspac/generators.hpp"
#include "sspac/io.hpp"
#include "sspac/mdp.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <span>
#include <string>

namespace sspac::test {

/// Allocation constant used wherever a test needs the planners to sample enough to be accurate.
/// The library default (0.1) stops SEARCH at Delta = 1 on most desk-scale models because the
/// confidence boxes are still wide enough to route all mass to the goal.
inline constexpr double kCalibratedAlpha = 10.0;

inline SspMdp fixture(const std::string& name) { return load_mdp(std::string(SSPAC_FIXTURE_DIR) + "/" + name); }

inline SspMdp fixture_a() { return fixture("fixture_A.json"); }
inline SspMdp fixture_b() { return fixture("fixture_B.json"); }

/// s0 -> s1 -> goal, unit costs, one action.
inline SspMdp two_chain() { return gen_chain(2, 0.0, 1.0); }

/// One state that reaches the goal w.p. 1/2 per step at cost 1.
inline SspMdp coin_flip() { return gen_chain(1, 0.5, 1.0); }

/// One state whose only action loops on itself forever.
inline SspMdp self_loop(double cost = 1.0) {
    TransitionTensor t(1, 1, {1.0, 0.0});
    return SspMdp(CostMatrix(1, 1, cost), std::move(t));
}

inline Policy uniform_policy(std::size_t states, std::size_t action = 0) {
    return Policy{std::vector<std::size_t>(states, action)};
}

/// Policy number `index` in lexicographic order of the action vector (first state most significant).
inline Policy policy_at(std::size_t index, std::size_t states, std::size_t actions) {
    Policy pi = uniform_policy(states);
    for (std::size_t s = states; s-- > 0;) {
        pi.action[s] = index % actions;
        index /= actions;
    }
    return pi;
}

/// Componentwise |got - want| <= tol, reported per index.
template <class A, class B>
void check_within(const A& got, const B& want, double tol) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        INFO("index " << i << ": got " << got[i] << ", want " << want[i]);
        CHECK(std::abs(got[i] - want[i]) <= tol);
    }
}

inline bool all_le(std::span<const double> a, std::span<const double> b, double slack = 0.0) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i] + slack)
            return false;
    return true;
}

/// Random value vector with entries uniform in [lo, hi].
inline ValueVector random_values(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    ValueVector v(n);
    for (double& x : v)
        x = u(rng);
    return v;
}

} // namespace sspac::test
