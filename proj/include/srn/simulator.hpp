#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "srn/model.hpp"

namespace srn {

struct SimConfig {
    double horizon_hours = 1e4;  // simulated time per replication
    int replications = 10;
    std::uint64_t seed = 0;
    double warmup_fraction = 0.01;
    std::uint64_t max_total_events = 10'000'000'000ULL;  // budget across replications
    unsigned threads = 0;  // 0 = hardware concurrency; results do not depend on it
};

/// Time-averaged reward estimates. Identical (model, config) inputs produce
/// bit-identical estimates regardless of thread count.
struct SimEstimate {
    std::map<std::string, double> mean;
    std::map<std::string, double> std_error;
    std::uint64_t total_events = 0;
};

/// Discrete-event simulation of the net: exponential races in tangible
/// markings, weighted choice in vanishing markings, rewards accumulated by
/// sojourn time after the warmup window. Throws DeadlockReached on a marking
/// with no enabled transitions, DeadState on an unresolvable vanishing
/// marking, BudgetExceeded past max_total_events.
SimEstimate simulate(const SrnModel& model, const SimConfig& config);

struct CrossCheckEntry {
    std::string reward;
    double analytical = 0.0;
    double simulated = 0.0;
    double std_error = 0.0;
    double rel_error = 0.0;
    bool pass = false;
};

struct CrossCheckReport {
    std::vector<CrossCheckEntry> entries;
    double max_rel_error = 0.0;
    bool all_pass = true;
    std::uint64_t total_events = 0;
};

/// Runs the analytical pipeline and the simulator on every named reward of the
/// model and compares them at the given relative tolerance.
CrossCheckReport cross_check(const SrnModel& model, const SimConfig& config, double tolerance);

}  // namespace srn
