#pragma once

#include "sspac/confidence.hpp"
#include "sspac/mdp.hpp"
#include "sspac/sampler.hpp"

#include <span>
#include <vector>

namespace sspac {

/**
 * Minimizes <q, v_ext> over distributions q on S+1 entries with
 * |q[y] - p_hat[y]| <= beta[y] and q in [0,1]^{S+1}, where v_ext is v with
 * a trailing 0 for the goal.
 *
 * When p_hat is a distribution the solution is reached from q = p_hat by
 * moving mass from the highest-valued entries (down to their lower caps)
 * to the lowest-valued ones (up to their upper caps). Mass only moves toward
 * strictly lower values, so a zero box or a constant v returns p_hat as is.
 * Rows without samples start from the lower caps instead.
 * Throws Infeasible when the box contains no distribution.
 */
std::vector<double> optimistic_row(std::span<const double> p_hat, std::span<const double> beta,
                                   std::span<const double> v);

struct ExtendedBackup {
    ValueVector value;
    Policy policy;
    TransitionTensor p_tilde;
};

/// One application of the extended Bellman operator; ties go to the lowest action.
ExtendedBackup extended_bellman(const EmpiricalModel& e, const ConfidenceRadii& radii, const CostMatrix& cost,
                                std::span<const double> v);

struct EviOutput {
    /// Stopping iterate v_j, the first with ||L~ v_j - v_j||_inf <= mu_vi.
    ValueVector v_tilde;
    /// Greedy policy and optimistic model selected by the backup of v_tilde.
    Policy pi_tilde;
    TransitionTensor p_tilde;
    std::size_t iterations = 0;
    double vi_precision = 0.0;
};

inline constexpr std::size_t kEviMaxIter = 10'000'000;

/// Extended value iteration from v_0 = 0. Throws NonConvergence after max_iter sweeps.
EviOutput evi(const EmpiricalModel& e, const ConfidenceRadii& radii, const CostMatrix& cost, double mu_vi,
              std::size_t max_iter = kEviMaxIter);

/// Value of pi in the optimistic model p_tilde. Throws ImproperPolicy.
ValueVector optimistic_policy_value(const TransitionTensor& p_tilde, const CostMatrix& cost, const Policy& pi);

/// Deterministic checks that follow from how EVI stops:
/// v_tilde <= V~^pi, and V~^pi <= (1 + 2 mu/c_min) v_tilde when mu <= c_min / 2.
struct OptimismCertificate {
    ValueVector optimistic_value;
    bool lower_holds = false;
    bool upper_applies = false;
    bool upper_holds = false;
    /// max_s (V~^pi(s) - (1 + 2 mu/c_min) v_tilde(s)); nonpositive when the cap holds.
    double upper_slack = 0.0;

    bool ok() const { return lower_holds && (!upper_applies || upper_holds); }
};

OptimismCertificate check_optimism_certificate(const EviOutput& out, const CostMatrix& cost);

} // namespace sspac
