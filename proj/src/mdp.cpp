#include "sspac/mdp.hpp"

#include "sspac/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace sspac {

namespace {

constexpr std::size_t kDirectSolveMaxStates = 2000;
constexpr std::size_t kIterativeEvalMaxIter = 10'000'000;
constexpr double kIterativeEvalTol = 1e-10;

std::string pair_name(std::size_t s, std::size_t a) {
    return "(s=" + std::to_string(s) + ", a=" + std::to_string(a) + ")";
}

double row_dot(std::span<const double> row, std::span<const double> v) {
    // row has S+1 entries, v has S; the goal contributes 0.
    double acc = 0.0;
    for (std::size_t y = 0; y < v.size(); ++y)
        acc += row[y] * v[y];
    return acc;
}

void check_policy(const SspMdp& mdp, const Policy& pi) {
    if (pi.size() != mdp.num_states())
        throw ShapeMismatch("policy has " + std::to_string(pi.size()) + " entries, model has " +
                            std::to_string(mdp.num_states()) + " states");
    for (std::size_t s = 0; s < pi.size(); ++s)
        if (pi(s) >= mdp.num_actions())
            throw InvalidArgs("policy action out of range at state " + std::to_string(s));
}

ValueVector evaluate_iteratively(const SspMdp& mdp, const Policy& pi) {
    const std::size_t S = mdp.num_states();
    ValueVector v(S, 0.0), next(S);
    for (std::size_t it = 0; it < kIterativeEvalMaxIter; ++it) {
        double change = 0.0;
        for (std::size_t s = 0; s < S; ++s) {
            next[s] = mdp.cost(s, pi(s)) + row_dot(mdp.row(s, pi(s)), v);
            change = std::max(change, std::abs(next[s] - v[s]));
        }
        v.swap(next);
        if (change <= kIterativeEvalTol)
            return v;
    }
    throw NonConvergence("iterative policy evaluation did not converge");
}

} // namespace

CostMatrix::CostMatrix(std::size_t num_states, std::size_t num_actions, double fill)
    : num_states_(num_states), num_actions_(num_actions), values_(num_states * num_actions, fill) {}

CostMatrix::CostMatrix(std::size_t num_states, std::size_t num_actions, std::vector<double> values)
    : num_states_(num_states), num_actions_(num_actions), values_(std::move(values)) {
    if (values_.size() != num_states * num_actions)
        throw ShapeMismatch("cost matrix needs S*A entries");
}

double CostMatrix::min() const {
    return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

TransitionTensor::TransitionTensor(std::size_t num_states, std::size_t num_actions)
    : num_states_(num_states), num_actions_(num_actions),
      values_(num_states * num_actions * (num_states + 1), 0.0) {}

TransitionTensor::TransitionTensor(std::size_t num_states, std::size_t num_actions,
                                   std::vector<double> values)
    : num_states_(num_states), num_actions_(num_actions), values_(std::move(values)) {
    if (values_.size() != num_states * num_actions * (num_states + 1))
        throw ShapeMismatch("transition tensor needs S*A*(S+1) entries");
}

SspMdp::SspMdp(CostMatrix cost, TransitionTensor trans) : cost_(std::move(cost)), trans_(std::move(trans)) {
    const std::size_t S = cost_.num_states();
    const std::size_t A = cost_.num_actions();
    if (S == 0 || A == 0)
        throw InvalidArgs("model needs at least one state and one action");
    if (trans_.num_states() != S || trans_.num_actions() != A)
        throw ShapeMismatch("cost and transition shapes disagree");

    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t a = 0; a < A; ++a) {
            const double c = cost_(s, a);
            if (!(c >= 0.0 && c <= 1.0))
                throw InvalidArgs("cost outside [0,1] at " + pair_name(s, a));
            auto row = trans_.row(s, a);
            double sum = 0.0;
            for (double p : row) {
                if (!(p >= 0.0 && std::isfinite(p)))
                    throw InvalidArgs("negative or non-finite probability at " + pair_name(s, a));
                sum += p;
            }
            if (std::abs(sum - 1.0) > kRowSumTolerance)
                throw InvalidArgs("transition row does not sum to 1 at " + pair_name(s, a));
            // Rounding-level drift is left alone so that saving and reloading is lossless.
            if (std::abs(sum - 1.0) > 1e-14)
                for (double& p : row)
                    p /= sum;
        }
    }
}

ValueVector bellman_apply(const SspMdp& mdp, std::span<const double> v) {
    const std::size_t S = mdp.num_states();
    if (v.size() != S)
        throw ShapeMismatch("value vector size differs from state count");
    ValueVector out(S);
    for (std::size_t s = 0; s < S; ++s) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < mdp.num_actions(); ++a)
            best = std::min(best, mdp.cost(s, a) + row_dot(mdp.row(s, a), v));
        out[s] = best;
    }
    return out;
}

Policy greedy_policy(const SspMdp& mdp, std::span<const double> v) {
    const std::size_t S = mdp.num_states();
    Policy pi{std::vector<std::size_t>(S, 0)};
    for (std::size_t s = 0; s < S; ++s) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
            const double q = mdp.cost(s, a) + row_dot(mdp.row(s, a), v);
            if (q < best) {
                best = q;
                pi.action[s] = a;
            }
        }
    }
    return pi;
}

ViResult value_iteration(const SspMdp& mdp, const ViOptions& opts) {
    if (!(opts.tol > 0.0))
        throw InvalidArgs("value iteration tolerance must be positive");
    ValueVector v(mdp.num_states(), 0.0);
    for (std::size_t it = 0; it < opts.max_iter; ++it) {
        ValueVector next = bellman_apply(mdp, v);
        const double residual = sup_distance(next, v);
        if (residual <= opts.tol) {
            ViResult result;
            result.policy = greedy_policy(mdp, v);
            result.value = std::move(v);
            result.iterations = it;
            result.residual = residual;
            return result;
        }
        v = std::move(next);
    }
    throw NonConvergence("value iteration exceeded " + std::to_string(opts.max_iter) +
                         " iterations; the model may have no proper policy or a zero-cost cycle");
}

bool policy_is_proper(const SspMdp& mdp, const Policy& pi) {
    check_policy(mdp, pi);
    const std::size_t S = mdp.num_states();
    // Backward search from the goal over reversed positive-probability edges.
    std::vector<std::vector<std::size_t>> predecessors(S + 1);
    for (std::size_t s = 0; s < S; ++s) {
        auto row = mdp.row(s, pi(s));
        for (std::size_t y = 0; y <= S; ++y)
            if (row[y] > 0.0 && y != s)
                predecessors[y].push_back(s);
    }
    std::vector<char> reaches(S + 1, 0);
    std::vector<std::size_t> frontier{S};
    reaches[S] = 1;
    std::size_t reached = 0;
    while (!frontier.empty()) {
        const std::size_t y = frontier.back();
        frontier.pop_back();
        for (std::size_t s : predecessors[y]) {
            if (!reaches[s]) {
                reaches[s] = 1;
                ++reached;
                frontier.push_back(s);
            }
        }
    }
    return reached == S;
}

ValueVector policy_value(const SspMdp& mdp, const Policy& pi) {
    if (!policy_is_proper(mdp, pi))
        throw ImproperPolicy("policy does not reach the goal from every state");
    const std::size_t S = mdp.num_states();
    if (S > kDirectSolveMaxStates)
        return evaluate_iteratively(mdp, pi);

    const auto n = static_cast<Eigen::Index>(S);
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd rhs(n);
    for (std::size_t s = 0; s < S; ++s) {
        auto row = mdp.row(s, pi(s));
        for (std::size_t y = 0; y < S; ++y)
            system(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(y)) -= row[y];
        rhs(static_cast<Eigen::Index>(s)) = mdp.cost(s, pi(s));
    }
    const Eigen::VectorXd solution = system.partialPivLu().solve(rhs);
    ValueVector v(S);
    for (std::size_t s = 0; s < S; ++s)
        v[s] = std::max(0.0, solution(static_cast<Eigen::Index>(s)));
    return v;
}

ValueVector expected_hitting_time(const SspMdp& mdp, const Policy& pi) {
    return policy_value(with_unit_costs(mdp), pi);
}

Diameter ssp_diameter(const SspMdp& mdp, const ViOptions& opts) {
    ViResult vi = value_iteration(with_unit_costs(mdp), opts);
    Diameter d;
    d.diameter = sup_norm(vi.value);
    d.per_state = std::move(vi.value);
    return d;
}

ModelScalars model_scalars(const SspMdp& mdp, const ViOptions& opts) {
    ModelScalars out;
    out.c_min = mdp.costs().min();
    for (std::size_t s = 0; s < mdp.num_states(); ++s) {
        for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
            auto row = mdp.row(s, a);
            const auto support = static_cast<std::size_t>(
                std::count_if(row.begin(), row.end(), [](double p) { return p > 0.0; }));
            out.gamma_support = std::max(out.gamma_support, support);
        }
    }
    if (out.c_min > 0.0)
        out.b_star = sup_norm(value_iteration(mdp, opts).value);
    Diameter d = ssp_diameter(mdp, opts);
    out.diameter = d.diameter;
    out.per_state_diameter = std::move(d.per_state);
    return out;
}

SspMdp with_unit_costs(const SspMdp& mdp) {
    return SspMdp(CostMatrix(mdp.num_states(), mdp.num_actions(), 1.0), mdp.transitions());
}

SspMdp perturb_costs(const SspMdp& mdp, double nu) {
    if (!(nu >= 0.0 && nu <= 1.0))
        throw InvalidArgs("cost perturbation must lie in [0,1]");
    CostMatrix cost = mdp.costs();
    for (std::size_t s = 0; s < mdp.num_states(); ++s)
        for (std::size_t a = 0; a < mdp.num_actions(); ++a)
            cost(s, a) = std::max(cost(s, a), nu);
    return SspMdp(std::move(cost), mdp.transitions());
}

SspMdp dmdp_to_ssp(std::span<const double> P, const CostMatrix& cost, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw InvalidArgs("discount factor must lie in (0,1)");
    const std::size_t S = cost.num_states();
    const std::size_t A = cost.num_actions();
    if (P.size() != S * A * S)
        throw ShapeMismatch("discounted transition tensor needs S*A*S entries");
    TransitionTensor trans(S, A);
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t a = 0; a < A; ++a) {
            auto row = trans.row(s, a);
            const double* src = P.data() + (s * A + a) * S;
            for (std::size_t y = 0; y < S; ++y)
                row[y] = gamma * src[y];
            row[S] = 1.0 - gamma;
        }
    }
    return SspMdp(cost, std::move(trans));
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw ShapeMismatch("vectors differ in length");
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

double sup_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

} // namespace sspac
