#include "sspac/evi.hpp"

#include "sspac/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace sspac {

namespace {

constexpr double kDistributionTol = 1e-12;
constexpr double kCertificateTol = 1e-9;

/// Entries of v_ext in increasing value order; the goal sorts first among ties.
std::vector<std::size_t> ascending_order(std::span<const double> v) {
    const std::size_t goal = v.size();
    std::vector<std::size_t> order(goal + 1);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto value = [&](std::size_t i) { return i == goal ? 0.0 : v[i]; };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const double vx = value(x), vy = value(y);
        if (vx != vy)
            return vx < vy;
        return (x == goal) && (y != goal);
    });
    return order;
}

void minimize_row(std::span<const double> p_hat, std::span<const double> beta, std::span<const double> v,
                  std::span<const std::size_t> order, std::span<double> q) {
    const std::size_t n = p_hat.size();
    const std::size_t goal = n - 1;
    const auto value = [&](std::size_t i) { return i == goal ? 0.0 : v[i]; };
    const auto lower = [&](std::size_t i) { return std::max(0.0, p_hat[i] - beta[i]); };
    const auto upper = [&](std::size_t i) { return std::min(1.0, p_hat[i] + beta[i]); };

    const double mass = std::accumulate(p_hat.begin(), p_hat.end(), 0.0);
    if (std::abs(mass - 1.0) <= kDistributionTol) {
        std::copy(p_hat.begin(), p_hat.end(), q.begin());
        std::size_t lo = 0, hi = n - 1;
        while (lo < hi) {
            const std::size_t to = order[lo], from = order[hi];
            if (!(value(to) < value(from)))
                break;
            const double room = upper(to) - q[to];
            if (room <= 0.0) {
                ++lo;
                continue;
            }
            const double spare = q[from] - lower(from);
            if (spare <= 0.0) {
                --hi;
                continue;
            }
            if (room <= spare) {
                q[to] = upper(to);
                q[from] -= room;
                ++lo;
            } else {
                q[from] = lower(from);
                q[to] += spare;
                --hi;
            }
        }
        return;
    }

    // No usable centre: start every entry at its lower cap and pour the
    // remaining mass into the cheapest entries first.
    double remaining = 1.0;
    double capacity = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        q[i] = lower(i);
        remaining -= q[i];
        capacity += upper(i) - q[i];
    }
    if (remaining < -kDistributionTol || capacity < remaining - kDistributionTol)
        throw Infeasible("confidence box contains no distribution");
    for (std::size_t k = 0; k < n && remaining > 0.0; ++k) {
        const std::size_t i = order[k];
        const double add = std::min(remaining, upper(i) - q[i]);
        q[i] += add;
        remaining -= add;
    }
}

/// One synchronous sweep of the extended operator.
struct Sweep {
    const EmpiricalModel& e;
    const ConfidenceRadii& radii;
    const CostMatrix& cost;

    // Returns the new value vector; fills policy and p_tilde when given.
    ValueVector apply(std::span<const double> v, Policy* policy, TransitionTensor* p_tilde) const {
        const std::size_t S = e.num_states();
        const std::size_t A = e.num_actions();
        const std::vector<std::size_t> order = ascending_order(v);
        std::vector<double> q(S + 1);
        ValueVector out(S);
        for (std::size_t s = 0; s < S; ++s) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < A; ++a) {
                minimize_row(e.p_hat(s, a), radii.row(s, a), v, order, q);
                double expected = 0.0;
                for (std::size_t y = 0; y < S; ++y)
                    expected += q[y] * v[y];
                const double total = cost(s, a) + expected;
                if (p_tilde)
                    std::copy(q.begin(), q.end(), p_tilde->row(s, a).begin());
                if (total < best) {
                    best = total;
                    if (policy)
                        policy->action[s] = a;
                }
            }
            out[s] = best;
        }
        return out;
    }
};

void check_shapes(const EmpiricalModel& e, const CostMatrix& cost, std::span<const double> v) {
    if (cost.num_states() != e.num_states() || cost.num_actions() != e.num_actions())
        throw ShapeMismatch("cost matrix and sample set differ in shape");
    if (v.size() != e.num_states())
        throw ShapeMismatch("value vector size differs from state count");
}

} // namespace

std::vector<double> optimistic_row(std::span<const double> p_hat, std::span<const double> beta,
                                   std::span<const double> v) {
    if (p_hat.size() != v.size() + 1 || beta.size() != p_hat.size())
        throw ShapeMismatch("row, radii and value sizes are inconsistent");
    std::vector<double> q(p_hat.size());
    const std::vector<std::size_t> order = ascending_order(v);
    minimize_row(p_hat, beta, v, order, q);
    return q;
}

ExtendedBackup extended_bellman(const EmpiricalModel& e, const ConfidenceRadii& radii, const CostMatrix& cost,
                                std::span<const double> v) {
    check_shapes(e, cost, v);
    ExtendedBackup out;
    out.policy.action.assign(e.num_states(), 0);
    out.p_tilde = TransitionTensor(e.num_states(), e.num_actions());
    out.value = Sweep{e, radii, cost}.apply(v, &out.policy, &out.p_tilde);
    return out;
}

EviOutput evi(const EmpiricalModel& e, const ConfidenceRadii& radii, const CostMatrix& cost, double mu_vi,
              std::size_t max_iter) {
    if (!(mu_vi > 0.0))
        throw InvalidArgs("EVI precision must be positive");
    ValueVector v(e.num_states(), 0.0);
    check_shapes(e, cost, v);
    const Sweep sweep{e, radii, cost};
    for (std::size_t it = 0; it < max_iter; ++it) {
        ValueVector next = sweep.apply(v, nullptr, nullptr);
        if (sup_distance(next, v) <= mu_vi) {
            EviOutput out;
            out.pi_tilde.action.assign(e.num_states(), 0);
            out.p_tilde = TransitionTensor(e.num_states(), e.num_actions());
            sweep.apply(v, &out.pi_tilde, &out.p_tilde);
            out.v_tilde = std::move(v);
            out.iterations = it;
            out.vi_precision = mu_vi;
            return out;
        }
        v = std::move(next);
    }
    throw NonConvergence("extended value iteration exceeded " + std::to_string(max_iter) + " iterations");
}

ValueVector optimistic_policy_value(const TransitionTensor& p_tilde, const CostMatrix& cost, const Policy& pi) {
    return policy_value(SspMdp(cost, p_tilde), pi);
}

OptimismCertificate check_optimism_certificate(const EviOutput& out, const CostMatrix& cost) {
    OptimismCertificate cert;
    cert.optimistic_value = optimistic_policy_value(out.p_tilde, cost, out.pi_tilde);
    const double c_min = cost.min();
    const auto& v = out.v_tilde;
    const auto& big_v = cert.optimistic_value;

    cert.lower_holds = true;
    for (std::size_t s = 0; s < v.size(); ++s)
        if (v[s] > big_v[s] + kCertificateTol * std::max(1.0, big_v[s]))
            cert.lower_holds = false;

    cert.upper_applies = c_min > 0.0 && out.vi_precision <= c_min / 2.0;
    if (cert.upper_applies) {
        const double factor = 1.0 + 2.0 * out.vi_precision / c_min;
        cert.upper_slack = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < v.size(); ++s)
            cert.upper_slack = std::max(cert.upper_slack, big_v[s] - factor * v[s]);
        cert.upper_holds = true;
        for (std::size_t s = 0; s < v.size(); ++s)
            if (big_v[s] > factor * v[s] + kCertificateTol * std::max(1.0, big_v[s]))
                cert.upper_holds = false;
    }
    return cert;
}

} // namespace sspac
