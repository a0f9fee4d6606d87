#include "sspac/generators.hpp"

#include "sspac/error.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace sspac {

SspMdp gen_random_ssp(std::size_t num_states, std::size_t num_actions, std::size_t support, double c_min_target,
                      std::uint64_t seed) {
    if (num_states == 0 || num_actions == 0)
        throw InvalidArgs("random model needs S >= 1 and A >= 1");
    if (support < 1 || support > num_states + 1)
        throw InvalidArgs("support must lie in [1, S+1]");
    if (!(c_min_target >= 0.0 && c_min_target <= 1.0))
        throw InvalidArgs("c_min target must lie in [0,1]");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::exponential_distribution<double> gamma1(1.0);
    std::uniform_int_distribution<std::size_t> pick_action(0, num_actions - 1);

    const std::size_t S = num_states;
    CostMatrix cost(S, num_actions);
    TransitionTensor trans(S, num_actions);
    std::vector<std::size_t> candidates(S + 1);
    for (std::size_t s = 0; s < S; ++s) {
        const std::size_t exit_action = pick_action(rng);
        for (std::size_t a = 0; a < num_actions; ++a) {
            cost(s, a) = c_min_target + (1.0 - c_min_target) * unit(rng);
            std::iota(candidates.begin(), candidates.end(), std::size_t{0});
            std::shuffle(candidates.begin(), candidates.end(), rng);
            std::vector<std::size_t> chosen(candidates.begin(), candidates.begin() + static_cast<long>(support));
            if (a == exit_action && std::find(chosen.begin(), chosen.end(), S) == chosen.end())
                chosen.back() = S;
            auto row = trans.row(s, a);
            double total = 0.0;
            std::vector<double> weights(support);
            for (double& w : weights) {
                w = gamma1(rng);
                // Exact zeros would shrink the support.
                w = std::max(w, 1e-6);
                total += w;
            }
            for (std::size_t k = 0; k < support; ++k)
                row[chosen[k]] = weights[k] / total;
        }
    }
    return SspMdp(std::move(cost), std::move(trans));
}

SspMdp gen_chain(std::size_t length, double slip, double cost) {
    if (length == 0)
        throw InvalidArgs("chain needs at least one state");
    if (!(slip >= 0.0 && slip < 1.0))
        throw InvalidArgs("slip must lie in [0,1)");
    if (!(cost >= 0.0 && cost <= 1.0))
        throw InvalidArgs("chain cost must lie in [0,1]");
    TransitionTensor trans(length, 1);
    for (std::size_t s = 0; s < length; ++s) {
        auto row = trans.row(s, 0);
        row[s + 1] += 1.0 - slip;
        row[s] += slip;
    }
    return SspMdp(CostMatrix(length, 1, cost), std::move(trans));
}

SspMdp gen_gridworld(std::size_t width, std::size_t height, double slip) {
    if (width == 0 || height == 0 || width * height < 2)
        throw InvalidArgs("grid needs at least two cells");
    if (!(slip >= 0.0 && slip < 1.0))
        throw InvalidArgs("slip must lie in [0,1)");

    // Cells are numbered row-major; the goal cell (w-1, h-1) is last and maps to index S.
    const std::size_t S = width * height - 1;
    constexpr int dx[4] = {0, 1, 0, -1};
    constexpr int dy[4] = {-1, 0, 1, 0};
    const auto move = [&](std::size_t cell, int dir) {
        const auto x = static_cast<long>(cell % width) + dx[dir];
        const auto y = static_cast<long>(cell / width) + dy[dir];
        if (x < 0 || y < 0 || x >= static_cast<long>(width) || y >= static_cast<long>(height))
            return cell;
        return static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x);
    };

    TransitionTensor trans(S, 4);
    for (std::size_t s = 0; s < S; ++s) {
        for (int a = 0; a < 4; ++a) {
            auto row = trans.row(s, static_cast<std::size_t>(a));
            row[move(s, a)] += 1.0 - slip;
            for (int d = 0; d < 4; ++d)
                row[move(s, d)] += slip / 4.0;
        }
    }
    return SspMdp(CostMatrix(S, 4, 1.0), std::move(trans));
}

} // namespace sspac
