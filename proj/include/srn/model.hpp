#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "srn/errors.hpp"

namespace srn {

/// Dense index of a place, assigned in insertion order by the builder.
struct PlaceId {
    std::uint32_t index = 0;
    friend bool operator==(PlaceId a, PlaceId b) { return a.index == b.index; }
    friend auto operator<=>(PlaceId a, PlaceId b) { return a.index <=> b.index; }
};

/// Dense index of a transition, assigned in insertion order by the builder.
struct TransitionId {
    std::uint32_t index = 0;
    friend bool operator==(TransitionId a, TransitionId b) { return a.index == b.index; }
    friend auto operator<=>(TransitionId a, TransitionId b) { return a.index <=> b.index; }
};

/// Token counts per place. Hashable and comparable so it can key state tables.
class Marking {
public:
    Marking() = default;
    explicit Marking(std::vector<std::uint32_t> tokens) : tokens_(std::move(tokens)) {}

    std::uint32_t operator[](PlaceId p) const { return tokens_[p.index]; }
    std::uint32_t& operator[](PlaceId p) { return tokens_[p.index]; }
    std::size_t size() const { return tokens_.size(); }
    std::uint32_t total_tokens() const;
    const std::vector<std::uint32_t>& tokens() const { return tokens_; }

    friend bool operator==(const Marking& a, const Marking& b) { return a.tokens_ == b.tokens_; }
    friend auto operator<=>(const Marking& a, const Marking& b) { return a.tokens_ <=> b.tokens_; }

private:
    std::vector<std::uint32_t> tokens_;
};

struct MarkingHash {
    std::size_t operator()(const Marking& m) const {
        // FNV-1a over the token words
        std::uint64_t h = 1469598103934665603ULL;
        for (std::uint32_t t : m.tokens()) {
            h ^= t;
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

enum class TransitionKind { Timed, Immediate };

using Guard = std::function<bool(const Marking&)>;
using RewardFunction = std::function<double(const Marking&)>;

struct Arc {
    PlaceId place;
    std::uint32_t multiplicity = 1;
};

/// A timed (exponential rate, events per hour) or immediate (probability
/// weight) transition with its input/output arcs and optional guard.
struct Transition {
    std::string name;
    TransitionKind kind = TransitionKind::Timed;
    double value = 0.0;  // rate in h^-1 for Timed, weight for Immediate
    std::vector<Arc> inputs;
    std::vector<Arc> outputs;
    Guard guard;  // empty = always true
};

struct Violation {
    std::string code;
    std::string message;
};

class SrnModel;

/// Assembles an immutable SrnModel. Place and transition names must be unique;
/// arcs are given by place name and resolved at insertion time.
class ModelBuilder {
public:
    using ArcSpec = std::vector<std::pair<std::string, std::uint32_t>>;

    PlaceId add_place(const std::string& name, std::uint32_t initial_tokens = 0);
    TransitionId add_timed(const std::string& name, double rate_per_hour,
                           const ArcSpec& inputs, const ArcSpec& outputs, Guard guard = {});
    TransitionId add_immediate(const std::string& name, double weight,
                               const ArcSpec& inputs, const ArcSpec& outputs, Guard guard = {});
    void add_reward(const std::string& name, RewardFunction fn);

    /// Declares that immediate weights are exact probabilities, so validate()
    /// checks that every reachable vanishing conflict set sums to 1.
    void declare_exact_probabilities() { exact_probabilities_ = true; }

    PlaceId place(const std::string& name) const;
    SrnModel build();

private:
    friend class SrnModel;
    TransitionId add_transition(const std::string& name, TransitionKind kind, double value,
                                const ArcSpec& inputs, const ArcSpec& outputs, Guard guard);
    std::vector<Arc> resolve(const ArcSpec& spec, const std::string& transition) const;

    std::vector<std::string> place_names_;
    std::vector<std::uint32_t> initial_tokens_;
    std::unordered_map<std::string, std::uint32_t> place_index_;
    std::vector<Transition> transitions_;
    std::unordered_map<std::string, std::uint32_t> transition_index_;
    std::map<std::string, RewardFunction> rewards_;
    bool exact_probabilities_ = false;
};

/// Immutable stochastic reward net: places, timed/immediate transitions,
/// arcs, guards, an initial marking and named reward functions. Safe to share
/// across threads; all operations on it are pure.
class SrnModel {
public:
    std::size_t place_count() const { return place_names_.size(); }
    std::size_t transition_count() const { return transitions_.size(); }
    const std::string& place_name(PlaceId p) const { return place_names_[p.index]; }
    const Transition& transition(TransitionId t) const { return transitions_[t.index]; }
    const std::vector<Transition>& transitions() const { return transitions_; }
    const Marking& initial_marking() const { return initial_marking_; }
    bool exact_probabilities() const { return exact_probabilities_; }

    PlaceId place(const std::string& name) const;
    std::optional<PlaceId> find_place(const std::string& name) const;
    TransitionId transition_id(const std::string& name) const;

    const std::map<std::string, RewardFunction>& rewards() const { return rewards_; }
    const RewardFunction& reward(const std::string& name) const;

    /// Renders a marking as "{P_a:1,P_b:2}" listing only marked places.
    std::string marking_name(const Marking& m) const;

private:
    friend class ModelBuilder;
    SrnModel() = default;

    std::vector<std::string> place_names_;
    std::unordered_map<std::string, std::uint32_t> place_index_;
    std::vector<Transition> transitions_;
    std::unordered_map<std::string, std::uint32_t> transition_index_;
    Marking initial_marking_;
    std::map<std::string, RewardFunction> rewards_;
    bool exact_probabilities_ = false;
};

/// True when the transition's input multiplicities and guard are satisfied.
/// Does not apply immediate-over-timed priority; see enabled_transitions.
bool has_concession(const SrnModel& model, const Marking& m, TransitionId t);

/// Transitions that may fire in m. If any immediate transition has concession,
/// only the immediate ones are returned (immediate priority); zero-weight
/// immediates are included here and resolved to probability zero downstream.
std::vector<TransitionId> enabled_transitions(const SrnModel& model, const Marking& m);

/// Fires t in m: removes input multiplicities, adds output multiplicities.
/// Throws FiringDisabledTransition unless t is enabled per enabled_transitions.
Marking fire(const SrnModel& model, const Marking& m, TransitionId t);

inline constexpr std::size_t kDefaultMaxStates = 1'000'000;

/// Structural checks plus, for models that declare exact probabilities, a
/// bounded reachability walk verifying each vanishing conflict set's weights
/// sum to 1 within 1e-9. Empty result means valid.
std::vector<Violation> validate(const SrnModel& model, std::size_t max_states = kDefaultMaxStates);

}  // namespace srn
