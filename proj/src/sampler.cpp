#include "sspac/sampler.hpp"

#include "sspac/error.hpp"
#include "sspac/rng.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

namespace sspac {

EmpiricalModel::EmpiricalModel(std::size_t num_states, std::size_t num_actions)
    : num_states_(num_states), num_actions_(num_actions),
      counts_(num_states * num_actions * (num_states + 1), 0), n_(num_states * num_actions, 0),
      p_hat_(num_states * num_actions * (num_states + 1), 0.0) {}

void EmpiricalModel::add(std::size_t s, std::size_t a, std::span<const std::uint64_t> increments) {
    if (increments.size() != row_size())
        throw ShapeMismatch("increment row must have S+1 entries");
    std::uint64_t added = 0;
    std::uint64_t* row = counts_.data() + offset(s, a);
    for (std::size_t y = 0; y < row_size(); ++y) {
        row[y] += increments[y];
        added += increments[y];
    }
    n_[s * num_actions_ + a] += added;
    refresh_row(s, a);
}

void EmpiricalModel::add_one(std::size_t s, std::size_t a, std::size_t next) {
    ++counts_[offset(s, a) + next];
    ++n_[s * num_actions_ + a];
    refresh_row(s, a);
}

void EmpiricalModel::refresh_row(std::size_t s, std::size_t a) {
    const std::uint64_t total = n(s, a);
    const std::uint64_t* row = counts_.data() + offset(s, a);
    double* out = p_hat_.data() + offset(s, a);
    for (std::size_t y = 0; y < row_size(); ++y)
        out[y] = total == 0 ? 0.0 : static_cast<double>(row[y]) / static_cast<double>(total);
}

std::uint64_t EmpiricalModel::total() const { return std::accumulate(n_.begin(), n_.end(), std::uint64_t{0}); }

std::uint64_t EmpiricalModel::min_n() const {
    return n_.empty() ? 0 : *std::min_element(n_.begin(), n_.end());
}

TransitionTensor EmpiricalModel::p_hat_tensor() const {
    return TransitionTensor(num_states_, num_actions_, p_hat_);
}

std::size_t empirical_gamma(const EmpiricalModel& e) {
    std::size_t best = 0;
    for (std::size_t s = 0; s < e.num_states(); ++s) {
        for (std::size_t a = 0; a < e.num_actions(); ++a) {
            auto row = e.counts(s, a);
            const auto support = static_cast<std::size_t>(
                std::count_if(row.begin(), row.end(), [](std::uint64_t c) { return c > 0; }));
            best = std::max(best, support);
        }
    }
    return best;
}

json empirical_to_json(const EmpiricalModel& e) {
    json counts = json::array();
    for (std::size_t s = 0; s < e.num_states(); ++s) {
        json per_state = json::array();
        for (std::size_t a = 0; a < e.num_actions(); ++a) {
            auto row = e.counts(s, a);
            per_state.push_back(std::vector<std::uint64_t>(row.begin(), row.end()));
        }
        counts.push_back(std::move(per_state));
    }
    return {{"counts", std::move(counts)}};
}

EmpiricalModel empirical_from_json(const json& j) {
    try {
        const json& counts = j.at("counts");
        const std::size_t S = counts.size();
        if (S == 0)
            throw ShapeMismatch("counts must have at least one state");
        const std::size_t A = counts[0].size();
        EmpiricalModel e(S, A);
        for (std::size_t s = 0; s < S; ++s) {
            if (counts[s].size() != A)
                throw ShapeMismatch("ragged counts tensor");
            for (std::size_t a = 0; a < A; ++a) {
                auto row = counts[s][a].get<std::vector<std::uint64_t>>();
                e.add(s, a, row);
            }
        }
        return e;
    } catch (const json::exception& ex) {
        throw InvalidArgs(std::string("malformed counts JSON: ") + ex.what());
    }
}

GenerativeModel::GenerativeModel(SspMdp model, std::uint64_t master_seed)
    : model_(std::move(model)), master_seed_(master_seed),
      samples_(model_.num_states(), model_.num_actions()), calls_(model_.num_states() * model_.num_actions(), 0) {
    const std::size_t S = model_.num_states();
    const std::size_t A = model_.num_actions();
    pairs_.resize(S * A);
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t a = 0; a < A; ++a) {
            PairSampler& ps = pairs_[s * A + a];
            ps.key = derive_seed(master_seed_, {s, a});
            double acc = 0.0;
            auto row = model_.row(s, a);
            for (std::size_t y = 0; y <= S; ++y) {
                if (row[y] > 0.0) {
                    acc += row[y];
                    ps.support.push_back(y);
                    ps.cumulative.push_back(acc);
                }
            }
            // Draws lie in [0,1), so pinning the last edge to 1 keeps
            // rounding in the running sum from ever leaving the support.
            ps.cumulative.back() = 1.0;
        }
    }
}

std::size_t GenerativeModel::draw(const PairSampler& ps, std::uint64_t k) const {
    const double u = to_unit_interval(stream_at(ps.key, k));
    std::size_t i = 0;
    while (u >= ps.cumulative[i])
        ++i;
    return ps.support[i];
}

std::size_t GenerativeModel::sample_transition(std::size_t s, std::size_t a) {
    if (s >= num_states() || a >= num_actions())
        throw InvalidArgs("state-action pair out of range");
    const std::size_t pair = s * num_actions() + a;
    const std::size_t next = draw(pairs_[pair], calls_[pair]++);
    samples_.add_one(s, a, next);
    ++total_calls_;
    return next;
}

void GenerativeModel::fill_pair(std::size_t s, std::size_t a, std::uint64_t target,
                                std::vector<std::uint64_t>& scratch) {
    const std::uint64_t have = samples_.n(s, a);
    if (have >= target)
        return;
    std::fill(scratch.begin(), scratch.end(), 0);
    const std::size_t pair = s * num_actions() + a;
    const PairSampler& ps = pairs_[pair];
    const std::uint64_t first = calls_[pair];
    const std::uint64_t last = first + (target - have);
    for (std::uint64_t k = first; k < last; ++k)
        ++scratch[draw(ps, k)];
    calls_[pair] = last;
    samples_.add(s, a, scratch);
}

void GenerativeModel::start_new_sample_set() { samples_ = EmpiricalModel(num_states(), num_actions()); }

const EmpiricalModel& GenerativeModel::collect_until(std::uint64_t target, unsigned threads) {
    std::vector<std::uint64_t> targets(num_states() * num_actions(), target);
    return collect_until(targets, threads);
}

const EmpiricalModel& GenerativeModel::collect_until(std::span<const std::uint64_t> targets, unsigned threads) {
    const std::size_t A = num_actions();
    const std::size_t pairs = num_states() * A;
    if (targets.size() != pairs)
        throw ShapeMismatch("need one target per state-action pair");

    std::uint64_t added = 0;
    for (std::size_t i = 0; i < pairs; ++i)
        added += targets[i] > samples_.n(i / A, i % A) ? targets[i] - samples_.n(i / A, i % A) : 0;

    const auto work = [&](std::size_t begin, std::size_t stride) {
        std::vector<std::uint64_t> scratch(num_states() + 1);
        for (std::size_t i = begin; i < pairs; i += stride)
            fill_pair(i / A, i % A, targets[i], scratch);
    };
    // Each pair touches only its own slice of the sample set.
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(pairs)));
    if (threads == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(work, t, threads);
    }
    total_calls_ += added;
    return samples_;
}

} // namespace sspac
