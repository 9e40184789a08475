#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "srn/statespace.hpp"

namespace srn {

/// Stationary probability per tangible state, with the residual of the balance
/// equations and any transient states that were pruned to probability zero.
struct StationaryDistribution {
    std::vector<double> probabilities;
    double residual_inf_norm = 0.0;
    std::vector<std::uint32_t> pruned_states;
};

/// Solves pi * Q = 0, sum(pi) = 1 by subtraction-free GTH elimination.
/// A strong-connectivity pre-check runs first: transient states outside the
/// single recurrent class are pruned to zero probability; more than one
/// recurrent class throws ReducibleChain, a zero pivot throws Singular.
StationaryDistribution steady_state(const Ctmc& ctmc);

/// Expected steady-state reward: sum(pi_i * reward_i).
double expected_reward(const StationaryDistribution& pi, std::span<const double> rewards);

/// Probability mass of the tangible states whose marking satisfies the predicate.
double state_probability(const StationaryDistribution& pi, const Ctmc& ctmc,
                         const std::function<bool(const Marking&)>& predicate);

}  // namespace srn
