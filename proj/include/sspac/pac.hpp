#pragma once

#include "sspac/io.hpp"
#include "sspac/mdp.hpp"
#include "sspac/sampler.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace sspac {

struct PacConfig {
    double epsilon = 0.1;
    double delta = 0.1;
    /// Numerical constant in front of the allocation function.
    double alpha = 0.1;
    /// Slack of the restricted policy set; infinity means unrestricted.
    double theta = std::numeric_limits<double>::infinity();
    std::size_t max_doublings = 64;
    /// Worker threads for sample collection. Results do not depend on it.
    unsigned threads = 1;

    /// Throws InvalidArgs when a field is out of range.
    void validate() const;
};

/// One pass of a doubling loop: SEARCH (scale = Delta) or the diameter estimate (scale = W).
struct PacRound {
    double scale = 0.0;
    /// Smallest per-pair sample count after this round's collection.
    std::uint64_t target_n = 0;
    /// Generator calls so far, over the whole run.
    std::uint64_t calls = 0;
    std::size_t evi_iterations = 0;
    double v_norm = 0.0;
    double mu_vi = 0.0;
    /// L1 accuracy demanded of the sample set; diameter rounds only.
    std::optional<double> eta;
    ValueVector v_tilde;
    Policy policy;
};

struct PacRunLog {
    std::vector<PacRound> rounds;
    /// Rounds of the diameter estimate preceding SEARCH in the restricted algorithm.
    std::vector<PacRound> diameter_rounds;
    Policy policy;
    double final_delta = 0.0;
    double iota = 0.0;
    std::optional<double> d_hat;
    std::optional<double> nu;
    std::uint64_t total_calls = 0;
};

struct PacResult {
    Policy policy;
    PacRunLog log;
};

struct DiameterEstimate {
    double d_hat = 0.0;
    PacRunLog log;
};

/**
 * Per-pair sample target for a value-range guess x and cost floor y:
 *
 *   alpha * ( x^3 G / (y eps^2) * log(x S A / (y eps delta))
 *           + x^2 S / (y eps)   * log(x S A / (y eps delta))
 *           + x^2 G / y^2       * log^2(x S A / (y delta)) ),
 *
 * rounded up, where G is the empirical support size (at least 1).
 * Throws InvalidArgs for nonpositive x or y.
 */
std::uint64_t allocation(double x, double y, const PacConfig& cfg, std::size_t num_states, std::size_t num_actions,
                         std::size_t gamma_hat);

/// SEARCH: doubles Delta from 1, collecting allocation(Delta, iota) samples per pair and running
/// EVI at precision iota * eps / (6 Delta), until ||v~||_inf <= Delta.
/// Throws DoublingCapExceeded after cfg.max_doublings rounds.
PacResult search(GenerativeModel& gen, const CostMatrix& cost, const PacConfig& cfg);

/// Positive-cost planner. Throws MinCostZero when some cost is 0.
PacResult solve_positive(GenerativeModel& gen, const CostMatrix& cost, const PacConfig& cfg);

/// Diameter upper bound: doubles W from 1, collects samples until the certified L1 bound is at
/// most eps / (2W), runs unit-cost EVI at precision eps / 2, and stops once ||v~||_inf <= W.
/// Returns D^ = (1 + 2 eta (1+eps) ||v~||) (1+eps) ||v~||.
DiameterEstimate estimate_diameter(GenerativeModel& gen, const PacConfig& cfg);

/// Restricted planner for costs in [0,1]: estimates D^ with confidence delta/2, perturbs costs
/// to max(c, nu) with nu = eps / (2 theta D^), and runs SEARCH at accuracy eps/2, confidence delta/2
/// on a fresh sample set.
PacResult solve_restricted(GenerativeModel& gen, const CostMatrix& cost, const PacConfig& cfg);

json run_log_to_json(const PacRunLog& log);

} // namespace sspac
