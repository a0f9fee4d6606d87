#pragma once

#include "sspac/io.hpp"
#include "sspac/mdp.hpp"

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

namespace sspac {

/**
 * Sample counts per (s,a,s') together with the empirical transition
 * frequencies p_hat = counts / n. Rows with no samples have an all-zero p_hat.
 */
class EmpiricalModel {
public:
    EmpiricalModel() = default;
    EmpiricalModel(std::size_t num_states, std::size_t num_actions);

    std::size_t num_states() const { return num_states_; }
    std::size_t num_actions() const { return num_actions_; }
    std::size_t row_size() const { return num_states_ + 1; }

    std::uint64_t n(std::size_t s, std::size_t a) const { return n_[s * num_actions_ + a]; }
    /// max(1, n), the count used inside confidence radii.
    std::uint64_t n_plus(std::size_t s, std::size_t a) const { return std::max<std::uint64_t>(1, n(s, a)); }

    std::span<const std::uint64_t> counts(std::size_t s, std::size_t a) const {
        return {counts_.data() + offset(s, a), row_size()};
    }
    std::span<const double> p_hat(std::size_t s, std::size_t a) const {
        return {p_hat_.data() + offset(s, a), row_size()};
    }

    /// Adds `increments[s']` observations of s' to the pair (s,a).
    void add(std::size_t s, std::size_t a, std::span<const std::uint64_t> increments);
    void add_one(std::size_t s, std::size_t a, std::size_t next);

    std::uint64_t total() const;
    std::uint64_t min_n() const;

    /// Empirical transitions as a tensor. Rows with no samples are left all-zero.
    TransitionTensor p_hat_tensor() const;

    bool operator==(const EmpiricalModel&) const = default;

private:
    std::size_t offset(std::size_t s, std::size_t a) const { return (s * num_actions_ + a) * row_size(); }
    void refresh_row(std::size_t s, std::size_t a);

    std::size_t num_states_ = 0;
    std::size_t num_actions_ = 0;
    std::vector<std::uint64_t> counts_;
    std::vector<std::uint64_t> n_;
    std::vector<double> p_hat_;
};

/// Largest empirical support, max_{s,a} |{s' : counts[s][a][s'] > 0}|. Zero with no samples.
std::size_t empirical_gamma(const EmpiricalModel& e);

/// Serialization as {"counts": [[[...]]]}; S and A are recovered from the shape.
json empirical_to_json(const EmpiricalModel& e);
EmpiricalModel empirical_from_json(const json& j);

/**
 * Generative sampling oracle over a hidden SSP model.
 *
 * The k-th draw for pair (s,a) is a pure function of (master_seed, s, a, k),
 * so results do not depend on the order in which pairs are queried or on how
 * collection is split across threads. Every draw is also recorded in the
 * current sample set returned by samples().
 */
class GenerativeModel {
public:
    GenerativeModel(SspMdp model, std::uint64_t master_seed);

    std::size_t num_states() const { return model_.num_states(); }
    std::size_t num_actions() const { return model_.num_actions(); }
    std::uint64_t master_seed() const { return master_seed_; }

    /// One draw from p(.|s,a); returns a state index, or num_states() for the goal.
    std::size_t sample_transition(std::size_t s, std::size_t a);

    /// Samples until every pair has at least `target` observations. Never discards samples.
    const EmpiricalModel& collect_until(std::uint64_t target, unsigned threads = 1);
    /// Per-pair targets, indexed s * A + a.
    const EmpiricalModel& collect_until(std::span<const std::uint64_t> targets, unsigned threads = 1);

    const EmpiricalModel& samples() const { return samples_; }

    /// Starts an empty sample set. Call counters keep running, so later draws are fresh.
    void start_new_sample_set();

    std::uint64_t total_calls() const { return total_calls_; }
    std::uint64_t calls(std::size_t s, std::size_t a) const { return calls_[s * num_actions() + a]; }

    /// The hidden model. Algorithms must only use the sample set; tests use this as ground truth.
    const SspMdp& truth() const { return model_; }

private:
    struct PairSampler {
        std::uint64_t key = 0;
        std::vector<std::size_t> support;
        std::vector<double> cumulative;
    };

    std::size_t draw(const PairSampler& ps, std::uint64_t k) const;
    void fill_pair(std::size_t s, std::size_t a, std::uint64_t target, std::vector<std::uint64_t>& scratch);

    SspMdp model_;
    std::uint64_t master_seed_;
    std::vector<PairSampler> pairs_;
    EmpiricalModel samples_;
    std::vector<std::uint64_t> calls_;
    std::uint64_t total_calls_ = 0;
};

} // namespace sspac
