#pragma once

#include "sspac/mdp.hpp"

#include <cstdint>

namespace sspac {

/// Random SSP: every (s,a) row has exactly `support` successors drawn uniformly from the
/// S+1 candidates with Dirichlet(1) weights, costs uniform in [c_min_target, 1].
/// One action per state always includes the goal, so a proper policy exists.
SspMdp gen_random_ssp(std::size_t num_states, std::size_t num_actions, std::size_t support, double c_min_target,
                      std::uint64_t seed);

/// Single-action chain: state i advances w.p. 1 - slip and stays otherwise; the last state
/// advances into the goal. Every step costs `cost`.
SspMdp gen_chain(std::size_t length, double slip, double cost = 1.0);

/// w x h grid, goal in the far corner (w-1, h-1), unit costs. Four actions (up, right, down, left):
/// the intended move happens w.p. 1 - slip, otherwise a uniformly random direction is taken.
/// Moves into a wall leave the agent in place.
SspMdp gen_gridworld(std::size_t width, std::size_t height, double slip);

} // namespace sspac
