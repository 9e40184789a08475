#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "srn/model.hpp"

namespace srn {

enum class StateKind { Tangible, Vanishing };

/// Edge of the reachability graph. The label is a rate in h^-1 when the source
/// is tangible and a branch probability when the source is vanishing.
struct RgEdge {
    TransitionId transition;
    std::uint32_t target = 0;
    double label = 0.0;
};

/// All markings reachable from the initial marking, classified tangible or
/// vanishing. State 0 is the initial marking.
struct ReachabilityGraph {
    std::vector<Marking> states;
    std::vector<StateKind> kinds;
    std::vector<std::vector<RgEdge>> edges;  // indexed by source state

    std::size_t state_count() const { return states.size(); }
    std::size_t count(StateKind k) const;
};

/// CTMC over the tangible markings. Rows hold off-diagonal rates (sorted by
/// target); Q[i][i] is implied as -exit_rate[i]. Self-loop mass produced by
/// vanishing elimination is dropped, which leaves the stationary distribution
/// unchanged.
struct Ctmc {
    std::vector<Marking> states;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> rows;
    std::vector<double> exit_rates;

    std::size_t state_count() const { return states.size(); }
    double rate(std::uint32_t from, std::uint32_t to) const;
};

/// Breadth-first closure of the token game from the initial marking.
/// Immediate branches with zero weight are never taken (probability zero) and
/// do not generate states. Throws StateSpaceExceeded past max_states and
/// DeadState when an enabled vanishing conflict set has zero total weight.
ReachabilityGraph explore(const SrnModel& model, std::size_t max_states = kDefaultMaxStates);

/// Folds vanishing states away: each timed edge into a vanishing chain is
/// redistributed onto the chain's tangible targets weighted by path
/// probability. Throws VanishingLoop on a cycle among vanishing states and
/// DeadState on a vanishing state with no outgoing edge.
Ctmc eliminate_vanishing(const ReachabilityGraph& graph);

/// Evaluates the model's named reward function at each tangible marking, in
/// CTMC state order. Throws UnknownReward.
std::vector<double> reward_vector(const SrnModel& model, const Ctmc& ctmc,
                                  const std::string& reward_name);

/// Debug dump: one edge per line as "state<TAB>transition<TAB>label".
std::string dump_edges(const SrnModel& model, const ReachabilityGraph& graph);

}  // namespace srn
