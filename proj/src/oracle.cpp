#include "sspac/oracle.hpp"

#include "sspac/confidence.hpp"
#include "sspac/error.hpp"
#include "sspac/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace sspac::oracle {

namespace {

constexpr double kRelTol = 1e-9;

bool leq(double a, double b) { return a <= b + kRelTol * std::max({1.0, std::abs(a), std::abs(b)}); }

// Goal reachability by forward fixpoint: a state reaches g iff some successor does.
bool reaches_goal_everywhere(const SspMdp& mdp, const Policy& pi) {
    const std::size_t S = mdp.num_states();
    std::vector<char> ok(S, 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t s = 0; s < S; ++s) {
            if (ok[s])
                continue;
            auto row = mdp.row(s, pi(s));
            bool reach = row[S] > 0.0;
            for (std::size_t y = 0; y < S && !reach; ++y)
                reach = row[y] > 0.0 && ok[y];
            if (reach) {
                ok[s] = 1;
                changed = true;
            }
        }
    }
    return std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
}

class Rollout {
public:
    Rollout(const SspMdp& mdp, const Policy& pi, std::uint64_t seed, std::size_t start)
        : mdp_(mdp), pi_(pi), engine_(derive_seed(seed, {start})) {}

    // Next state from s under pi by inverse CDF over the stored row.
    std::size_t step(std::size_t s) {
        auto row = mdp_.row(s, pi_(s));
        const double u = to_unit_interval(engine_());
        double acc = 0.0;
        std::size_t last = 0;
        for (std::size_t y = 0; y < row.size(); ++y) {
            if (row[y] <= 0.0)
                continue;
            acc += row[y];
            last = y;
            if (u < acc)
                return y;
        }
        return last;
    }

private:
    const SspMdp& mdp_;
    const Policy& pi_;
    std::mt19937_64 engine_;
};

struct Trajectory {
    double cost = 0.0;
    std::uint64_t steps = 0;
    bool truncated = false;
};

Trajectory run(Rollout& r, const SspMdp& mdp, const Policy& pi, std::size_t start, std::uint64_t cap) {
    Trajectory t;
    std::size_t s = start;
    const std::size_t goal = mdp.goal();
    while (s != goal) {
        if (t.steps == cap) {
            t.truncated = true;
            break;
        }
        t.cost += mdp.cost(s, pi(s));
        s = r.step(s);
        ++t.steps;
    }
    return t;
}

} // namespace

void for_each_policy(std::size_t num_states, std::size_t num_actions,
                     const std::function<void(const Policy&)>& visit) {
    double count = std::pow(static_cast<double>(num_actions), static_cast<double>(num_states));
    if (count > static_cast<double>(kMaxEnumeratedPolicies))
        throw TooLarge("A^S = " + std::to_string(count) + " policies exceeds the enumeration cap");
    Policy pi{std::vector<std::size_t>(num_states, 0)};
    for (;;) {
        visit(pi);
        // Odometer increment with the last state as the fastest digit.
        std::size_t i = num_states;
        while (i > 0) {
            --i;
            if (++pi.action[i] < num_actions)
                break;
            pi.action[i] = 0;
            if (i == 0)
                return;
        }
        if (num_states == 0)
            return;
    }
}

PolicyProfile profile_policy(const SspMdp& mdp, const Policy& pi) {
    PolicyProfile out;
    out.proper = reaches_goal_everywhere(mdp, pi);
    if (!out.proper)
        return out;
    const auto n = static_cast<Eigen::Index>(mdp.num_states());
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd rhs(n, 2);
    for (Eigen::Index s = 0; s < n; ++s) {
        const auto su = static_cast<std::size_t>(s);
        auto row = mdp.row(su, pi(su));
        for (Eigen::Index y = 0; y < n; ++y)
            system(s, y) -= row[static_cast<std::size_t>(y)];
        rhs(s, 0) = mdp.cost(su, pi(su));
        rhs(s, 1) = 1.0;
    }
    const Eigen::MatrixXd sol = system.fullPivLu().solve(rhs);
    out.value.resize(mdp.num_states());
    out.hitting_time.resize(mdp.num_states());
    for (Eigen::Index s = 0; s < n; ++s) {
        out.value[static_cast<std::size_t>(s)] = sol(s, 0);
        out.hitting_time[static_cast<std::size_t>(s)] = sol(s, 1);
    }
    return out;
}

bool in_restricted_set(const PolicyProfile& profile, std::span<const double> per_state_diameter, double theta) {
    if (!profile.proper)
        return false;
    if (std::isinf(theta))
        return true;
    for (std::size_t s = 0; s < per_state_diameter.size(); ++s)
        if (!leq(profile.hitting_time[s], theta * per_state_diameter[s]))
            return false;
    return true;
}

RestrictedOptimum enumerate_restricted_optimum(const SspMdp& mdp, double theta) {
    if (!(theta >= 1.0))
        throw InvalidArgs("theta must be at least 1");
    const std::size_t S = mdp.num_states();

    std::vector<std::pair<Policy, PolicyProfile>> proper;
    for_each_policy(S, mdp.num_actions(), [&](const Policy& pi) {
        PolicyProfile prof = profile_policy(mdp, pi);
        if (prof.proper)
            proper.emplace_back(pi, std::move(prof));
    });
    if (proper.empty())
        throw NoFeasiblePolicy("model has no proper policy");

    RestrictedOptimum out;
    out.per_state_diameter.assign(S, std::numeric_limits<double>::infinity());
    for (const auto& [pi, prof] : proper)
        for (std::size_t s = 0; s < S; ++s)
            out.per_state_diameter[s] = std::min(out.per_state_diameter[s], prof.hitting_time[s]);

    out.v_theta_star.assign(S, std::numeric_limits<double>::infinity());
    std::vector<const std::pair<Policy, PolicyProfile>*> feasible;
    for (const auto& entry : proper) {
        if (!in_restricted_set(entry.second, out.per_state_diameter, theta))
            continue;
        feasible.push_back(&entry);
        for (std::size_t s = 0; s < S; ++s)
            out.v_theta_star[s] = std::min(out.v_theta_star[s], entry.second.value[s]);
    }
    if (feasible.empty())
        throw NoFeasiblePolicy("restricted policy set is empty for theta = " + std::to_string(theta));
    out.feasible_count = feasible.size();

    double best = std::numeric_limits<double>::infinity();
    for (const auto* entry : feasible) {
        const double d = sup_distance(entry->second.value, out.v_theta_star);
        if (d < best) {
            best = d;
            out.argmin_policy = entry->first;
        }
    }
    return out;
}

MonteCarloEstimate monte_carlo_value(const SspMdp& mdp, const Policy& pi, std::uint64_t trials,
                                     std::uint64_t horizon_cap, std::uint64_t seed) {
    if (trials == 0)
        throw InvalidArgs("monte_carlo_value needs at least one trial");
    if (pi.size() != mdp.num_states())
        throw ShapeMismatch("policy size differs from state count");
    const std::size_t S = mdp.num_states();
    MonteCarloEstimate out;
    out.mean.assign(S, std::numeric_limits<double>::infinity());
    out.std_error.assign(S, std::numeric_limits<double>::infinity());
    for (std::size_t start = 0; start < S; ++start) {
        Rollout r(mdp, pi, seed, start);
        double sum = 0.0, sum_sq = 0.0;
        std::uint64_t finished = 0;
        for (std::uint64_t k = 0; k < trials; ++k) {
            const Trajectory t = run(r, mdp, pi, start, horizon_cap);
            if (t.truncated) {
                ++out.truncated;
                continue;
            }
            ++finished;
            sum += t.cost;
            sum_sq += t.cost * t.cost;
        }
        if (finished == 0)
            continue;
        const double n = static_cast<double>(finished);
        const double mean = sum / n;
        const double var = finished > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
        out.mean[start] = mean;
        out.std_error[start] = std::sqrt(var / n);
    }
    return out;
}

TailEstimate goal_reach_tail(const SspMdp& mdp, const Policy& pi, std::span<const double> m_values,
                             std::uint64_t trials, std::uint64_t seed, std::uint64_t horizon_cap) {
    if (!reaches_goal_everywhere(mdp, pi))
        throw ImproperPolicy("tail estimate needs a proper policy");
    if (trials == 0)
        throw InvalidArgs("goal_reach_tail needs at least one trial");
    const std::size_t S = mdp.num_states();
    const std::size_t K = m_values.size();
    std::vector<std::vector<std::uint64_t>> exceed(K, std::vector<std::uint64_t>(S, 0));
    for (std::size_t start = 0; start < S; ++start) {
        Rollout r(mdp, pi, seed, start);
        for (std::uint64_t k = 0; k < trials; ++k) {
            const Trajectory t = run(r, mdp, pi, start, horizon_cap);
            for (std::size_t i = 0; i < K; ++i)
                if (t.truncated || t.cost > m_values[i])
                    ++exceed[i][start];
        }
    }
    TailEstimate out;
    const double n = static_cast<double>(trials);
    for (std::size_t i = 0; i < K; ++i) {
        ValueVector f(S), se(S);
        for (std::size_t s = 0; s < S; ++s) {
            f[s] = static_cast<double>(exceed[i][s]) / n;
            se[s] = std::sqrt(f[s] * (1.0 - f[s]) / n);
        }
        out.frequency.push_back(std::move(f));
        out.std_error.push_back(std::move(se));
    }
    return out;
}

TailEstimate goal_survival(const SspMdp& mdp, const Policy& pi, std::span<const std::uint64_t> steps,
                           std::uint64_t trials, std::uint64_t seed) {
    if (!reaches_goal_everywhere(mdp, pi))
        throw ImproperPolicy("survival estimate needs a proper policy");
    if (trials == 0)
        throw InvalidArgs("goal_survival needs at least one trial");
    const std::size_t S = mdp.num_states();
    const std::uint64_t cap = steps.empty() ? 0 : *std::max_element(steps.begin(), steps.end());
    std::vector<std::vector<std::uint64_t>> alive(steps.size(), std::vector<std::uint64_t>(S, 0));
    for (std::size_t start = 0; start < S; ++start) {
        Rollout r(mdp, pi, seed, start);
        for (std::uint64_t k = 0; k < trials; ++k) {
            // s_t != g  <=>  more than t steps are needed.
            const Trajectory t = run(r, mdp, pi, start, cap + 1);
            for (std::size_t i = 0; i < steps.size(); ++i)
                if (t.truncated || t.steps > steps[i])
                    ++alive[i][start];
        }
    }
    TailEstimate out;
    const double n = static_cast<double>(trials);
    for (std::size_t i = 0; i < steps.size(); ++i) {
        ValueVector f(S), se(S);
        for (std::size_t s = 0; s < S; ++s) {
            f[s] = static_cast<double>(alive[i][s]) / n;
            se[s] = std::sqrt(f[s] * (1.0 - f[s]) / n);
        }
        out.frequency.push_back(std::move(f));
        out.std_error.push_back(std::move(se));
    }
    return out;
}

SimulationLemmaReport simulation_lemma_check(const SspMdp& p, const SspMdp& p_prime, const Policy& pi) {
    if (p.num_states() != p_prime.num_states() || p.num_actions() != p_prime.num_actions())
        throw ShapeMismatch("models differ in shape");
    if (!(p.costs() == p_prime.costs()))
        throw InvalidArgs("simulation lemma needs identical costs in both models");
    SimulationLemmaReport rep;
    rep.c_min = p.costs().min();
    if (!(rep.c_min > 0.0))
        throw InvalidArgs("simulation lemma needs c_min > 0");

    const PolicyProfile prime = profile_policy(p_prime, pi);
    if (!prime.proper)
        throw ImproperPolicy("policy must be proper in the reference model");
    rep.v_prime = prime.value;
    rep.v_prime_norm = sup_norm(rep.v_prime);
    rep.eta = model_l1_distance(p.transitions(), p_prime.transitions());
    rep.condition_met = rep.eta * rep.v_prime_norm <= 2.0 * rep.c_min;
    if (!rep.condition_met)
        return rep;

    const PolicyProfile base = profile_policy(p, pi);
    rep.proper_in_p = base.proper;
    if (!rep.proper_in_p)
        return rep;
    rep.v = base.value;

    const double x = rep.eta * rep.v_prime_norm / rep.c_min;
    rep.upper_holds = rep.lower_holds = true;
    rep.upper_slack = rep.lower_slack = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < rep.v.size(); ++s) {
        const double up = (1.0 + 2.0 * x) * rep.v_prime[s];
        const double low = (1.0 + x) * rep.v[s];
        rep.upper_slack = std::max(rep.upper_slack, rep.v[s] - up);
        rep.lower_slack = std::max(rep.lower_slack, rep.v_prime[s] - low);
        rep.upper_holds = rep.upper_holds && leq(rep.v[s], up);
        rep.lower_holds = rep.lower_holds && leq(rep.v_prime[s], low);
    }
    rep.gap = sup_distance(rep.v, rep.v_prime);
    rep.gap_bound = 7.0 * rep.eta * rep.v_prime_norm * rep.v_prime_norm / rep.c_min;
    rep.gap_holds = leq(rep.gap, rep.gap_bound);
    return rep;
}

} // namespace sspac::oracle
