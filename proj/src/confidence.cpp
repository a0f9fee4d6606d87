#include "sspac/confidence.hpp"

#include "sspac/error.hpp"

#include <cmath>

namespace sspac {

double bernstein_radius(double p_hat, std::uint64_t n_plus, std::size_t num_states, std::size_t num_actions,
                        double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw InvalidDelta("delta must lie in (0,1)");
    if (n_plus == 0)
        throw InvalidArgs("n_plus must be at least 1");
    const double n = static_cast<double>(n_plus);
    const double log_term =
        std::log(static_cast<double>(num_states) * static_cast<double>(num_actions) * n / delta);
    return 4.0 * std::sqrt(p_hat * log_term / n) + 28.0 * log_term / n;
}

ConfidenceRadii::ConfidenceRadii(const EmpiricalModel& e, double delta)
    : num_states_(e.num_states()), num_actions_(e.num_actions()), delta_(delta),
      beta_(e.num_states() * e.num_actions() * e.row_size()) {
    for (std::size_t s = 0; s < num_states_; ++s) {
        for (std::size_t a = 0; a < num_actions_; ++a) {
            auto p_hat = e.p_hat(s, a);
            const std::uint64_t n_plus = e.n_plus(s, a);
            double* out = beta_.data() + (s * num_actions_ + a) * e.row_size();
            for (std::size_t y = 0; y < e.row_size(); ++y)
                out[y] = bernstein_radius(p_hat[y], n_plus, num_states_, num_actions_, delta);
        }
    }
}

ConfidenceRadii::ConfidenceRadii(std::size_t num_states, std::size_t num_actions, double delta,
                                 std::vector<double> beta)
    : num_states_(num_states), num_actions_(num_actions), delta_(delta), beta_(std::move(beta)) {
    if (beta_.size() != num_states * num_actions * (num_states + 1))
        throw ShapeMismatch("radii need S*A*(S+1) entries");
    for (double b : beta_)
        if (!(b >= 0.0 && std::isfinite(b)))
            throw InvalidArgs("radii must be finite and nonnegative");
}

double model_l1_distance(const TransitionTensor& p, const TransitionTensor& q) {
    if (p.num_states() != q.num_states() || p.num_actions() != q.num_actions())
        throw ShapeMismatch("transition tensors differ in shape");
    double worst = 0.0;
    for (std::size_t s = 0; s < p.num_states(); ++s) {
        for (std::size_t a = 0; a < p.num_actions(); ++a) {
            auto pr = p.row(s, a);
            auto qr = q.row(s, a);
            double d = 0.0;
            for (std::size_t y = 0; y < pr.size(); ++y)
                d += std::abs(pr[y] - qr[y]);
            worst = std::max(worst, d);
        }
    }
    return worst;
}

double certified_row_bound(const EmpiricalModel& e, std::size_t s, std::size_t a, double delta) {
    auto p_hat = e.p_hat(s, a);
    const std::uint64_t n_plus = e.n_plus(s, a);
    double sum = 0.0;
    for (double p : p_hat)
        sum += bernstein_radius(p, n_plus, e.num_states(), e.num_actions(), delta);
    return sum;
}

double certified_l1_bound(const EmpiricalModel& e, double delta) {
    double worst = 0.0;
    for (std::size_t s = 0; s < e.num_states(); ++s)
        for (std::size_t a = 0; a < e.num_actions(); ++a)
            worst = std::max(worst, certified_row_bound(e, s, a, delta));
    return worst;
}

bool within_radii(const EmpiricalModel& e, const TransitionTensor& truth, double delta) {
    if (truth.num_states() != e.num_states() || truth.num_actions() != e.num_actions())
        throw ShapeMismatch("empirical model and truth differ in shape");
    for (std::size_t s = 0; s < e.num_states(); ++s) {
        for (std::size_t a = 0; a < e.num_actions(); ++a) {
            auto p_hat = e.p_hat(s, a);
            auto p = truth.row(s, a);
            const std::uint64_t n_plus = e.n_plus(s, a);
            for (std::size_t y = 0; y < e.row_size(); ++y)
                if (std::abs(p_hat[y] - p[y]) >
                    bernstein_radius(p_hat[y], n_plus, e.num_states(), e.num_actions(), delta))
                    return false;
        }
    }
    return true;
}

} // namespace sspac
