#pragma once

#include "sspac/mdp.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace sspac::oracle {

inline constexpr std::uint64_t kMaxEnumeratedPolicies = 1'000'000;
inline constexpr std::uint64_t kDefaultHorizonCap = 1'000'000;

/// Calls visit(pi) for all A^S policies in lexicographic order of the action vector.
/// Throws TooLarge beyond kMaxEnumeratedPolicies.
void for_each_policy(std::size_t num_states, std::size_t num_actions, const std::function<void(const Policy&)>& visit);

/// Values and hitting times of one policy, solved with a full-pivot LU that shares
/// nothing with the library's own evaluation path.
struct PolicyProfile {
    bool proper = false;
    ValueVector value;
    ValueVector hitting_time;
};

PolicyProfile profile_policy(const SspMdp& mdp, const Policy& pi);

struct RestrictedOptimum {
    /// Componentwise minimum of V^pi over feasible policies.
    ValueVector v_theta_star;
    /// Feasible policy closest to v_theta_star in sup norm; lexicographically smallest on ties.
    Policy argmin_policy;
    std::size_t feasible_count = 0;
    /// D_s = min over proper policies of E[tau_pi(s)].
    ValueVector per_state_diameter;
};

/**
 * Optimum over the restricted set {pi proper : E[tau_pi(s)] <= theta * D_s for all s}
 * by exhaustive enumeration. theta = infinity keeps every proper policy.
 * Throws TooLarge when A^S exceeds the enumeration cap and NoFeasiblePolicy
 * when the restricted set is empty.
 */
RestrictedOptimum enumerate_restricted_optimum(const SspMdp& mdp,
                                               double theta = std::numeric_limits<double>::infinity());

/// Feasibility of pi in the restricted set, given per-state diameters.
bool in_restricted_set(const PolicyProfile& profile, std::span<const double> per_state_diameter, double theta);

struct MonteCarloEstimate {
    ValueVector mean;
    ValueVector std_error;
    /// Rollouts cut at the horizon cap. They are excluded from mean and std_error.
    std::uint64_t truncated = 0;
};

/// Mean cumulative cost over `trials` seeded rollouts from every start state.
MonteCarloEstimate monte_carlo_value(const SspMdp& mdp, const Policy& pi, std::uint64_t trials,
                                     std::uint64_t horizon_cap, std::uint64_t seed);

struct TailEstimate {
    /// frequency[k][s]: fraction of rollouts from s whose cumulative cost exceeds m_values[k].
    std::vector<ValueVector> frequency;
    std::vector<ValueVector> std_error;
};

/// Empirical P(cumulative cost > m) per start state. Truncated rollouts count as exceeding
/// every m. Throws ImproperPolicy.
TailEstimate goal_reach_tail(const SspMdp& mdp, const Policy& pi, std::span<const double> m_values,
                             std::uint64_t trials, std::uint64_t seed,
                             std::uint64_t horizon_cap = kDefaultHorizonCap);

/// Empirical P(s_t != g) per start state for each step count t. Throws ImproperPolicy.
TailEstimate goal_survival(const SspMdp& mdp, const Policy& pi, std::span<const std::uint64_t> steps,
                           std::uint64_t trials, std::uint64_t seed);

struct SimulationLemmaReport {
    double eta = 0.0;
    double c_min = 0.0;
    double v_prime_norm = 0.0;
    /// eta * ||V'||_inf <= 2 c_min. When false, no inequality is checked.
    bool condition_met = false;
    ValueVector v;
    ValueVector v_prime;
    bool proper_in_p = false;
    /// V <= (1 + 2 eta ||V'|| / c_min) V'
    bool upper_holds = false;
    double upper_slack = 0.0;
    /// V' <= (1 + eta ||V'|| / c_min) V
    bool lower_holds = false;
    double lower_slack = 0.0;
    /// ||V - V'||_inf <= 7 eta ||V'||^2 / c_min
    bool gap_holds = false;
    double gap = 0.0;
    double gap_bound = 0.0;

    bool all_pass() const { return condition_met && proper_in_p && upper_holds && lower_holds && gap_holds; }
};

/// Checks the SSP simulation lemma for pi between p and p_prime (same costs, c_min > 0).
/// Throws ImproperPolicy when pi is not proper in p_prime.
SimulationLemmaReport simulation_lemma_check(const SspMdp& p, const SspMdp& p_prime, const Policy& pi);

} // namespace sspac::oracle
