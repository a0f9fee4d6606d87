#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace sspac {

/// Values over the non-goal states. The goal value is implicitly 0.
using ValueVector = std::vector<double>;

/// Stationary deterministic policy: one action per non-goal state.
struct Policy {
    std::vector<std::size_t> action;

    std::size_t operator()(std::size_t s) const { return action[s]; }
    std::size_t size() const { return action.size(); }
    bool operator==(const Policy&) const = default;
};

/// Dense S x A cost table, row-major in the state index.
class CostMatrix {
public:
    CostMatrix() = default;
    CostMatrix(std::size_t num_states, std::size_t num_actions, double fill = 0.0);
    CostMatrix(std::size_t num_states, std::size_t num_actions, std::vector<double> values);

    std::size_t num_states() const { return num_states_; }
    std::size_t num_actions() const { return num_actions_; }

    double operator()(std::size_t s, std::size_t a) const { return values_[s * num_actions_ + a]; }
    double& operator()(std::size_t s, std::size_t a) { return values_[s * num_actions_ + a]; }

    std::span<const double> values() const { return values_; }
    double min() const;

    bool operator==(const CostMatrix&) const = default;

private:
    std::size_t num_states_ = 0;
    std::size_t num_actions_ = 0;
    std::vector<double> values_;
};

/// Dense S x A x (S+1) transition tensor. The last entry of every row is the goal.
class TransitionTensor {
public:
    TransitionTensor() = default;
    TransitionTensor(std::size_t num_states, std::size_t num_actions);
    TransitionTensor(std::size_t num_states, std::size_t num_actions, std::vector<double> values);

    std::size_t num_states() const { return num_states_; }
    std::size_t num_actions() const { return num_actions_; }
    std::size_t row_size() const { return num_states_ + 1; }

    std::span<const double> row(std::size_t s, std::size_t a) const {
        return {values_.data() + (s * num_actions_ + a) * row_size(), row_size()};
    }
    std::span<double> row(std::size_t s, std::size_t a) {
        return {values_.data() + (s * num_actions_ + a) * row_size(), row_size()};
    }
    double operator()(std::size_t s, std::size_t a, std::size_t next) const {
        return values_[(s * num_actions_ + a) * row_size() + next];
    }

    std::span<const double> values() const { return values_; }

    bool operator==(const TransitionTensor&) const = default;

private:
    std::size_t num_states_ = 0;
    std::size_t num_actions_ = 0;
    std::vector<double> values_;
};

/**
 * Stochastic shortest path MDP over S non-goal states and A actions.
 *
 * The goal has index S in every transition row. It is absorbing and
 * zero-cost by construction, so no row is stored for it. Construction
 * validates the model: costs must lie in [0,1] and each row must be a
 * distribution. Rows whose sum is off by more than rounding but at most 1e-9
 * are renormalized, anything worse is rejected with InvalidArgs.
 */
class SspMdp {
public:
    SspMdp(CostMatrix cost, TransitionTensor trans);

    std::size_t num_states() const { return cost_.num_states(); }
    std::size_t num_actions() const { return cost_.num_actions(); }
    std::size_t goal() const { return num_states(); }

    double cost(std::size_t s, std::size_t a) const { return cost_(s, a); }
    std::span<const double> row(std::size_t s, std::size_t a) const { return trans_.row(s, a); }

    const CostMatrix& costs() const { return cost_; }
    const TransitionTensor& transitions() const { return trans_; }

    bool operator==(const SspMdp&) const = default;

private:
    CostMatrix cost_;
    TransitionTensor trans_;
};

/// Tolerance on row sums accepted (and repaired) by SspMdp.
inline constexpr double kRowSumTolerance = 1e-9;

struct ViOptions {
    double tol = 1e-10;
    std::size_t max_iter = 10'000'000;
};

struct ViResult {
    ValueVector value;
    Policy policy;
    std::size_t iterations = 0;
    double residual = 0.0;
};

struct Diameter {
    double diameter = 0.0;
    ValueVector per_state;
};

struct ModelScalars {
    double c_min = 0.0;
    std::size_t gamma_support = 0;
    /// Only reported when c_min > 0; see value_iteration.
    std::optional<double> b_star;
    double diameter = 0.0;
    ValueVector per_state_diameter;
};

/// (Lv)(s) = min_a { c(s,a) + sum_y p(y|s,a) v(y) }, the goal contributing 0.
ValueVector bellman_apply(const SspMdp& mdp, std::span<const double> v);

/// Greedy policy w.r.t. v; ties go to the lowest action index.
Policy greedy_policy(const SspMdp& mdp, std::span<const double> v);

/// Value iteration from v = 0. Returns the first iterate v_j with
/// ||L v_j - v_j||_inf <= tol together with its greedy policy.
/// Throws NonConvergence after max_iter sweeps.
ViResult value_iteration(const SspMdp& mdp, const ViOptions& opts = {});

/// True iff the goal is reachable through positive-probability edges from
/// every non-goal state under pi.
bool policy_is_proper(const SspMdp& mdp, const Policy& pi);

/// V^pi from (I - Q^pi) V = c_pi. Throws ImproperPolicy when pi is not proper.
ValueVector policy_value(const SspMdp& mdp, const Policy& pi);

/// E[tau_pi(s)]: policy_value of pi with every cost replaced by 1.
ValueVector expected_hitting_time(const SspMdp& mdp, const Policy& pi);

/// D = max_s D_s with D_s = min_pi E[tau_pi(s)], via value iteration on unit costs.
Diameter ssp_diameter(const SspMdp& mdp, const ViOptions& opts = {});

ModelScalars model_scalars(const SspMdp& mdp, const ViOptions& opts = {});

/// Same model with every cost replaced by 1.
SspMdp with_unit_costs(const SspMdp& mdp);

/// Same transitions with cost'(s,a) = max(c(s,a), nu).
SspMdp perturb_costs(const SspMdp& mdp, double nu);

/// Embeds a discounted MDP (P over S states, row-major S x A x S) as an SSP:
/// every transition is scaled by gamma and the goal receives the remaining 1 - gamma.
SspMdp dmdp_to_ssp(std::span<const double> P, const CostMatrix& cost, double gamma);

/// max over states of |a - b|.
double sup_distance(std::span<const double> a, std::span<const double> b);
double sup_norm(std::span<const double> v);

} // namespace sspac
