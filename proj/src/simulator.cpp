#include "srn/simulator.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <thread>
#include <unordered_map>

#include "srn/solver.hpp"
#include "srn/statespace.hpp"

namespace srn {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256++, seeded per replication via splitmix64
class Xoshiro256 {
public:
    Xoshiro256(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t init = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
        for (auto& word : state_) word = splitmix64(init);
    }

    std::uint64_t next() {
        std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform in (0, 1]
    double uniform() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

// Lazily discovered jump table over reachable markings. Built from the token
// game only (enabled_transitions/fire), independent of the reachability-graph
// and elimination code paths the simulator is meant to check.
struct SimNode {
    bool vanishing = false;
    bool deadlock = false;
    double exit_rate = 0.0;           // tangible: sum of enabled rates
    std::vector<double> cumulative;   // running sums of rates or weights
    std::vector<std::uint32_t> successors;
    std::vector<double> rewards;      // value of each named reward at this marking
};

class SimGraph {
public:
    explicit SimGraph(const SrnModel& model) : model_(model) {
        for (const auto& [name, fn] : model.rewards()) reward_names_.push_back(name);
        initial_ = intern(model.initial_marking());
    }

    std::uint32_t initial() const { return initial_; }
    const SimNode& node(std::uint32_t i) { return expanded_[i] ? nodes_[i] : expand(i); }
    const std::vector<std::string>& reward_names() const { return reward_names_; }
    std::size_t node_count() const { return nodes_.size(); }

private:
    std::uint32_t intern(const Marking& m) {
        auto it = index_.find(m);
        if (it != index_.end()) return it->second;
        auto id = static_cast<std::uint32_t>(nodes_.size());
        index_.emplace(m, id);
        markings_.push_back(m);
        nodes_.emplace_back();
        expanded_.push_back(false);
        return id;
    }

    const SimNode& expand(std::uint32_t i) {
        Marking m = markings_[i];
        SimNode node;
        node.rewards.reserve(reward_names_.size());
        for (const auto& name : reward_names_) node.rewards.push_back(model_.reward(name)(m));

        auto enabled = enabled_transitions(model_, m);
        if (enabled.empty()) {
            node.deadlock = true;
        } else {
            node.vanishing =
                model_.transition(enabled.front()).kind == TransitionKind::Immediate;
            double running = 0.0;
            for (TransitionId t : enabled) {
                double value = model_.transition(t).value;
                if (node.vanishing && value == 0.0) continue;
                running += value;
                node.cumulative.push_back(running);
                node.successors.push_back(intern(fire(model_, m, t)));
            }
            if (node.vanishing && !(running > 0.0))
                throw DeadState("vanishing marking " + model_.marking_name(m) +
                                " has zero total immediate weight");
            node.exit_rate = running;
        }
        nodes_[i] = std::move(node);
        expanded_[i] = true;
        return nodes_[i];
    }

    const SrnModel& model_;
    std::unordered_map<Marking, std::uint32_t, MarkingHash> index_;
    std::vector<Marking> markings_;
    std::vector<SimNode> nodes_;
    std::vector<bool> expanded_;
    std::vector<std::string> reward_names_;
    std::uint32_t initial_;
};

struct ReplicationResult {
    std::vector<double> reward_means;
    std::uint64_t events = 0;
};

constexpr std::uint64_t kBudgetBlock = 4096;

ReplicationResult run_replication(SimGraph& graph, const SimConfig& cfg, int replication,
                                  std::atomic<std::uint64_t>& budget_used) {
    Xoshiro256 rng(cfg.seed, static_cast<std::uint64_t>(replication));
    const double warmup_end = cfg.warmup_fraction * cfg.horizon_hours;
    const double horizon = cfg.horizon_hours;

    std::vector<double> time_in_node;
    auto node_time = [&](std::uint32_t i) -> double& {
        if (time_in_node.size() <= i) time_in_node.resize(graph.node_count(), 0.0);
        return time_in_node[i];
    };

    std::uint32_t current = graph.initial();
    double now = 0.0;
    std::uint64_t events = 0;
    std::uint64_t unbilled = 0;

    while (now < horizon) {
        const SimNode& node = graph.node(current);
        if (node.deadlock)
            throw DeadlockReached("deadlock reached after " + std::to_string(events) + " events");

        ++events;
        if (++unbilled == kBudgetBlock) {
            if (budget_used.fetch_add(unbilled, std::memory_order_relaxed) + unbilled >
                cfg.max_total_events)
                throw BudgetExceeded("simulation exceeded the event budget of " +
                                     std::to_string(cfg.max_total_events));
            unbilled = 0;
        }

        std::uint32_t branch = 0;
        if (node.cumulative.size() > 1) {
            double u = rng.uniform() * node.exit_rate;
            while (branch + 1 < node.cumulative.size() && u > node.cumulative[branch]) ++branch;
        }

        if (node.vanishing) {
            current = node.successors[branch];
            continue;
        }

        double sojourn = -std::log(rng.uniform()) / node.exit_rate;
        double leave = now + sojourn;
        double measured_from = std::max(now, warmup_end);
        double measured_to = std::min(leave, horizon);
        if (measured_to > measured_from) node_time(current) += measured_to - measured_from;
        now = leave;
        current = node.successors[branch];
    }

    budget_used.fetch_add(unbilled, std::memory_order_relaxed);

    ReplicationResult result;
    result.events = events;
    result.reward_means.assign(graph.reward_names().size(), 0.0);
    double measured = 0.0;
    for (double t : time_in_node) measured += t;
    if (measured <= 0.0) return result;
    for (std::uint32_t i = 0; i < time_in_node.size(); ++i) {
        if (time_in_node[i] == 0.0) continue;
        const SimNode& node = graph.node(i);
        double share = time_in_node[i] / measured;
        for (std::size_t r = 0; r < result.reward_means.size(); ++r)
            result.reward_means[r] += share * node.rewards[r];
    }
    return result;
}

}  // namespace

SimEstimate simulate(const SrnModel& model, const SimConfig& config) {
    if (!(config.horizon_hours > 0.0)) throw OutOfRange("horizon must be positive");
    if (config.replications < 1) throw OutOfRange("need at least one replication");
    if (!(config.warmup_fraction >= 0.0 && config.warmup_fraction < 1.0))
        throw OutOfRange("warmup fraction must be in [0,1)");

    const int reps = config.replications;
    std::vector<ReplicationResult> results(reps);
    std::atomic<std::uint64_t> budget_used{0};

    unsigned threads = config.threads ? config.threads : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(reps)));

    if (threads == 1) {
        SimGraph graph(model);
        for (int r = 0; r < reps; ++r) results[r] = run_replication(graph, config, r, budget_used);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> failures(threads);
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                try {
                    SimGraph graph(model);  // per-worker table: no locking in the hot loop
                    for (int r = static_cast<int>(w); r < reps; r += static_cast<int>(threads))
                        results[r] = run_replication(graph, config, r, budget_used);
                } catch (...) {
                    failures[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& failure : failures)
            if (failure) std::rethrow_exception(failure);
    }

    SimEstimate estimate;
    std::size_t r = 0;
    for (const auto& [name, fn] : model.rewards()) {
        double mean = 0.0;
        for (const auto& rep : results) mean += rep.reward_means[r];
        mean /= reps;
        double variance = 0.0;
        for (const auto& rep : results) {
            double d = rep.reward_means[r] - mean;
            variance += d * d;
        }
        double std_error = reps > 1 ? std::sqrt(variance / (reps * (reps - 1.0))) : 0.0;
        estimate.mean[name] = mean;
        estimate.std_error[name] = std_error;
        ++r;
    }
    for (const auto& rep : results) estimate.total_events += rep.events;
    return estimate;
}

CrossCheckReport cross_check(const SrnModel& model, const SimConfig& config, double tolerance) {
    auto graph = explore(model);
    auto ctmc = eliminate_vanishing(graph);
    auto pi = steady_state(ctmc);
    SimEstimate estimate = simulate(model, config);

    CrossCheckReport report;
    report.total_events = estimate.total_events;
    for (const auto& [name, fn] : model.rewards()) {
        CrossCheckEntry entry;
        entry.reward = name;
        entry.analytical = expected_reward(pi, reward_vector(model, ctmc, name));
        entry.simulated = estimate.mean.at(name);
        entry.std_error = estimate.std_error.at(name);
        double scale = std::abs(entry.analytical);
        entry.rel_error = scale > 0.0 ? std::abs(entry.simulated - entry.analytical) / scale
                                      : std::abs(entry.simulated - entry.analytical);
        entry.pass = entry.rel_error <= tolerance;
        report.max_rel_error = std::max(report.max_rel_error, entry.rel_error);
        report.all_pass = report.all_pass && entry.pass;
        report.entries.push_back(entry);
    }
    return report;
}

}  // namespace srn
