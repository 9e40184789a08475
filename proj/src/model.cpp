#include "srn/model.hpp"

#include <cmath>
#include <deque>
#include <sstream>
#include <unordered_set>

namespace srn {

std::uint32_t Marking::total_tokens() const {
    std::uint32_t total = 0;
    for (std::uint32_t t : tokens_) total += t;
    return total;
}

PlaceId ModelBuilder::add_place(const std::string& name, std::uint32_t initial_tokens) {
    if (place_index_.contains(name))
        throw Error("duplicate place name: " + name);
    PlaceId id{static_cast<std::uint32_t>(place_names_.size())};
    place_index_.emplace(name, id.index);
    place_names_.push_back(name);
    initial_tokens_.push_back(initial_tokens);
    return id;
}

std::vector<Arc> ModelBuilder::resolve(const ArcSpec& spec, const std::string& transition) const {
    std::vector<Arc> arcs;
    arcs.reserve(spec.size());
    for (const auto& [place_name, mult] : spec) {
        auto it = place_index_.find(place_name);
        if (it == place_index_.end())
            throw Error("transition " + transition + " references unknown place: " + place_name);
        if (mult == 0)
            throw Error("transition " + transition + " has a zero-multiplicity arc to " + place_name);
        arcs.push_back(Arc{PlaceId{it->second}, mult});
    }
    return arcs;
}

TransitionId ModelBuilder::add_transition(const std::string& name, TransitionKind kind, double value,
                                          const ArcSpec& inputs, const ArcSpec& outputs, Guard guard) {
    if (transition_index_.contains(name))
        throw Error("duplicate transition name: " + name);
    Transition t;
    t.name = name;
    t.kind = kind;
    t.value = value;
    t.inputs = resolve(inputs, name);
    t.outputs = resolve(outputs, name);
    t.guard = std::move(guard);
    TransitionId id{static_cast<std::uint32_t>(transitions_.size())};
    transition_index_.emplace(name, id.index);
    transitions_.push_back(std::move(t));
    return id;
}

TransitionId ModelBuilder::add_timed(const std::string& name, double rate_per_hour,
                                     const ArcSpec& inputs, const ArcSpec& outputs, Guard guard) {
    return add_transition(name, TransitionKind::Timed, rate_per_hour, inputs, outputs, std::move(guard));
}

TransitionId ModelBuilder::add_immediate(const std::string& name, double weight,
                                         const ArcSpec& inputs, const ArcSpec& outputs, Guard guard) {
    return add_transition(name, TransitionKind::Immediate, weight, inputs, outputs, std::move(guard));
}

void ModelBuilder::add_reward(const std::string& name, RewardFunction fn) {
    if (rewards_.contains(name))
        throw Error("duplicate reward name: " + name);
    rewards_.emplace(name, std::move(fn));
}

PlaceId ModelBuilder::place(const std::string& name) const {
    auto it = place_index_.find(name);
    if (it == place_index_.end())
        throw Error("unknown place: " + name);
    return PlaceId{it->second};
}

SrnModel ModelBuilder::build() {
    SrnModel model;
    model.place_names_ = place_names_;
    model.place_index_ = place_index_;
    model.transitions_ = transitions_;
    model.transition_index_ = transition_index_;
    model.initial_marking_ = Marking(initial_tokens_);
    model.rewards_ = rewards_;
    model.exact_probabilities_ = exact_probabilities_;
    return model;
}

PlaceId SrnModel::place(const std::string& name) const {
    auto it = place_index_.find(name);
    if (it == place_index_.end())
        throw Error("unknown place: " + name);
    return PlaceId{it->second};
}

std::optional<PlaceId> SrnModel::find_place(const std::string& name) const {
    auto it = place_index_.find(name);
    if (it == place_index_.end()) return std::nullopt;
    return PlaceId{it->second};
}

TransitionId SrnModel::transition_id(const std::string& name) const {
    auto it = transition_index_.find(name);
    if (it == transition_index_.end())
        throw Error("unknown transition: " + name);
    return TransitionId{it->second};
}

const RewardFunction& SrnModel::reward(const std::string& name) const {
    auto it = rewards_.find(name);
    if (it == rewards_.end())
        throw UnknownReward("unknown reward function: " + name);
    return it->second;
}

std::string SrnModel::marking_name(const Marking& m) const {
    std::ostringstream out;
    out << '{';
    bool first = true;
    for (std::uint32_t i = 0; i < m.size(); ++i) {
        if (m.tokens()[i] == 0) continue;
        if (!first) out << ',';
        first = false;
        out << place_names_[i] << ':' << m.tokens()[i];
    }
    out << '}';
    return out.str();
}

bool has_concession(const SrnModel& model, const Marking& m, TransitionId t) {
    const Transition& tr = model.transition(t);
    for (const Arc& a : tr.inputs)
        if (m[a.place] < a.multiplicity) return false;
    if (tr.guard && !tr.guard(m)) return false;
    return true;
}

std::vector<TransitionId> enabled_transitions(const SrnModel& model, const Marking& m) {
    std::vector<TransitionId> timed;
    std::vector<TransitionId> immediate;
    for (std::uint32_t i = 0; i < model.transition_count(); ++i) {
        TransitionId id{i};
        if (!has_concession(model, m, id)) continue;
        if (model.transition(id).kind == TransitionKind::Immediate)
            immediate.push_back(id);
        else
            timed.push_back(id);
    }
    return immediate.empty() ? timed : immediate;
}

Marking fire(const SrnModel& model, const Marking& m, TransitionId t) {
    const Transition& tr = model.transition(t);
    bool enabled = has_concession(model, m, t);
    if (enabled && tr.kind == TransitionKind::Timed) {
        // immediate priority: a timed transition cannot fire in a vanishing marking
        for (std::uint32_t i = 0; i < model.transition_count() && enabled; ++i) {
            TransitionId other{i};
            if (model.transition(other).kind == TransitionKind::Immediate &&
                has_concession(model, m, other))
                enabled = false;
        }
    }
    if (!enabled)
        throw FiringDisabledTransition("transition " + tr.name + " is not enabled in " +
                                       model.marking_name(m));
    Marking next = m;
    for (const Arc& a : tr.inputs) next[a.place] -= a.multiplicity;
    for (const Arc& a : tr.outputs) next[a.place] += a.multiplicity;
    return next;
}

namespace {

void check_vanishing_weights(const SrnModel& model, std::size_t max_states,
                             std::vector<Violation>& out) {
    std::unordered_set<Marking, MarkingHash> seen;
    std::deque<Marking> queue;
    seen.insert(model.initial_marking());
    queue.push_back(model.initial_marking());
    std::unordered_set<std::string> reported;
    while (!queue.empty()) {
        if (seen.size() > max_states) {
            out.push_back({"state-cap", "reachability walk exceeded " + std::to_string(max_states) +
                                            " markings; weight sums unchecked beyond the cap"});
            return;
        }
        Marking m = std::move(queue.front());
        queue.pop_front();
        auto enabled = enabled_transitions(model, m);
        if (enabled.empty()) continue;
        if (model.transition(enabled.front()).kind == TransitionKind::Immediate) {
            double sum = 0.0;
            std::string set_name;
            for (TransitionId t : enabled) {
                sum += model.transition(t).value;
                set_name += (set_name.empty() ? "" : ",") + model.transition(t).name;
            }
            if (std::abs(sum - 1.0) > 1e-9 && reported.insert(set_name).second) {
                std::ostringstream msg;
                msg << "immediate weights of {" << set_name << "} enabled in "
                    << model.marking_name(m) << " sum to " << sum << " != 1";
                out.push_back({"weight-sum", msg.str()});
            }
        }
        for (TransitionId t : enabled) {
            Marking next = fire(model, m, t);
            if (seen.insert(next).second) queue.push_back(std::move(next));
        }
    }
}

}  // namespace

std::vector<Violation> validate(const SrnModel& model, std::size_t max_states) {
    std::vector<Violation> out;
    if (model.initial_marking().size() != model.place_count())
        out.push_back({"marking-dimension", "initial marking dimension differs from place count"});
    for (const Transition& t : model.transitions()) {
        if (t.kind == TransitionKind::Timed && !(t.value > 0.0))
            out.push_back({"nonpositive-rate",
                           "timed transition " + t.name + " has nonpositive rate"});
        if (t.kind == TransitionKind::Immediate && t.value < 0.0)
            out.push_back({"negative-weight",
                           "immediate transition " + t.name + " has negative weight"});
        if (!std::isfinite(t.value))
            out.push_back({"nonfinite-value", "transition " + t.name + " has nonfinite rate/weight"});
        if (t.inputs.empty())
            out.push_back({"no-input-arcs", "transition " + t.name + " has no input arcs"});
    }
    if (out.empty() && model.exact_probabilities())
        check_vanishing_weights(model, max_states, out);
    return out;
}

}  // namespace srn
