#include "srn/statespace.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <map>
#include <sstream>

namespace srn {

std::size_t ReachabilityGraph::count(StateKind k) const {
    std::size_t n = 0;
    for (StateKind kind : kinds)
        if (kind == k) ++n;
    return n;
}

double Ctmc::rate(std::uint32_t from, std::uint32_t to) const {
    for (const auto& [target, r] : rows[from])
        if (target == to) return r;
    return 0.0;
}

ReachabilityGraph explore(const SrnModel& model, std::size_t max_states) {
    ReachabilityGraph g;
    std::unordered_map<Marking, std::uint32_t, MarkingHash> index;

    auto intern = [&](Marking m) -> std::uint32_t {
        auto it = index.find(m);
        if (it != index.end()) return it->second;
        if (g.states.size() >= max_states)
            throw StateSpaceExceeded("state space exceeds " + std::to_string(max_states) +
                                     " markings");
        auto id = static_cast<std::uint32_t>(g.states.size());
        index.emplace(m, id);
        g.states.push_back(std::move(m));
        g.kinds.push_back(StateKind::Tangible);
        g.edges.emplace_back();
        return id;
    };

    intern(model.initial_marking());
    for (std::uint32_t current = 0; current < g.states.size(); ++current) {
        // g.states may reallocate while expanding; copy the marking
        Marking m = g.states[current];
        auto enabled = enabled_transitions(model, m);
        if (enabled.empty()) continue;

        bool vanishing = model.transition(enabled.front()).kind == TransitionKind::Immediate;
        g.kinds[current] = vanishing ? StateKind::Vanishing : StateKind::Tangible;

        double weight_sum = 0.0;
        if (vanishing) {
            for (TransitionId t : enabled) weight_sum += model.transition(t).value;
            if (!(weight_sum > 0.0))
                throw DeadState("vanishing marking " + model.marking_name(m) +
                                " has zero total immediate weight");
        }
        for (TransitionId t : enabled) {
            const Transition& tr = model.transition(t);
            if (vanishing && tr.value == 0.0) continue;  // probability-zero branch
            std::uint32_t target = intern(fire(model, m, t));
            double label = vanishing ? tr.value / weight_sum : tr.value;
            g.edges[current].push_back(RgEdge{t, target, label});
        }
    }
    return g;
}

Ctmc eliminate_vanishing(const ReachabilityGraph& graph) {
    std::vector<std::uint32_t> tangible_index(graph.state_count(), 0);
    Ctmc ctmc;
    for (std::uint32_t s = 0; s < graph.state_count(); ++s) {
        if (graph.kinds[s] == StateKind::Tangible) {
            tangible_index[s] = static_cast<std::uint32_t>(ctmc.states.size());
            ctmc.states.push_back(graph.states[s]);
        }
    }
    ctmc.rows.resize(ctmc.state_count());
    ctmc.exit_rates.assign(ctmc.state_count(), 0.0);

    // absorb(v, rate): distribute `rate` entering vanishing state v onto the
    // tangible states reachable through immediate branches
    std::vector<bool> on_path(graph.state_count(), false);
    std::map<std::uint32_t, double> row;
    auto absorb = [&](auto&& self, std::uint32_t v, double rate) -> void {
        if (on_path[v])
            throw VanishingLoop("cycle among vanishing states through state " + std::to_string(v));
        if (graph.edges[v].empty())
            throw DeadState("vanishing state " + std::to_string(v) + " has no outgoing edges");
        on_path[v] = true;
        for (const RgEdge& e : graph.edges[v]) {
            double share = rate * e.label;
            if (graph.kinds[e.target] == StateKind::Tangible)
                row[tangible_index[e.target]] += share;
            else
                self(self, e.target, share);
        }
        on_path[v] = false;
    };

    for (std::uint32_t s = 0; s < graph.state_count(); ++s) {
        if (graph.kinds[s] != StateKind::Tangible) continue;
        std::uint32_t i = tangible_index[s];
        row.clear();
        for (const RgEdge& e : graph.edges[s]) {
            if (e.label == 0.0) continue;
            if (graph.kinds[e.target] == StateKind::Tangible)
                row[tangible_index[e.target]] += e.label;
            else
                absorb(absorb, e.target, e.label);
        }
        for (const auto& [target, rate] : row) {
            if (target == i) continue;  // self-loops do not affect the stationary distribution
            ctmc.rows[i].emplace_back(target, rate);
            ctmc.exit_rates[i] += rate;
        }
    }
    return ctmc;
}

std::vector<double> reward_vector(const SrnModel& model, const Ctmc& ctmc,
                                  const std::string& reward_name) {
    const RewardFunction& fn = model.reward(reward_name);
    std::vector<double> values;
    values.reserve(ctmc.state_count());
    for (const Marking& m : ctmc.states) values.push_back(fn(m));
    return values;
}

std::string dump_edges(const SrnModel& model, const ReachabilityGraph& graph) {
    std::ostringstream out;
    char label[32];
    for (std::uint32_t s = 0; s < graph.state_count(); ++s) {
        for (const RgEdge& e : graph.edges[s]) {
            std::snprintf(label, sizeof(label), "%.6g", e.label);
            out << model.marking_name(graph.states[s]) << '\t'
                << model.transition(e.transition).name << '\t' << label << '\n';
        }
    }
    return out.str();
}

}  // namespace srn
