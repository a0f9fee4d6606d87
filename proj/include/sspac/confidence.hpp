#pragma once

#include "sspac/mdp.hpp"
#include "sspac/sampler.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace sspac {

/// Empirical-Bernstein radius for one transition probability:
///   4 sqrt(p_hat L / n_plus) + 28 L / n_plus,   L = ln(S A n_plus / delta).
/// Throws InvalidDelta unless delta is in (0,1).
double bernstein_radius(double p_hat, std::uint64_t n_plus, std::size_t num_states, std::size_t num_actions,
                        double delta);

/// Radii beta[s][a][s'] for every entry of an empirical model.
class ConfidenceRadii {
public:
    ConfidenceRadii(const EmpiricalModel& e, double delta);
    /// Explicit radii, S*A*(S+1) nonnegative entries in (s, a, s') order.
    ConfidenceRadii(std::size_t num_states, std::size_t num_actions, double delta, std::vector<double> beta);

    double delta() const { return delta_; }
    std::span<const double> row(std::size_t s, std::size_t a) const {
        return {beta_.data() + (s * num_actions_ + a) * (num_states_ + 1), num_states_ + 1};
    }

private:
    std::size_t num_states_;
    std::size_t num_actions_;
    double delta_;
    std::vector<double> beta_;
};

/// max_{s,a} || p(.|s,a) - q(.|s,a) ||_1. Throws ShapeMismatch on differing shapes.
double model_l1_distance(const TransitionTensor& p, const TransitionTensor& q);

/// Sum of the radii of one row: a data-only bound on ||p_hat - p||_1 for that pair.
double certified_row_bound(const EmpiricalModel& e, std::size_t s, std::size_t a, double delta);

/// max over pairs of certified_row_bound. Valid on the event that every |p_hat - p| <= beta.
double certified_l1_bound(const EmpiricalModel& e, double delta);

/// True when every entry satisfies |p_hat - p| <= beta (the Bernstein event at the current counts).
bool within_radii(const EmpiricalModel& e, const TransitionTensor& truth, double delta);

} // namespace sspac
