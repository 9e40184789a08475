#include <cmath>

#include "doctest.h"
#include "srn/cloud_model.hpp"
#include "srn/simulator.hpp"
#include "srn/solver.hpp"
#include "srn/statespace.hpp"

using namespace srn;

namespace {

SrnModel constant_reward_loop(double reward_value) {
    ModelBuilder b;
    b.add_place("A", 1);
    b.add_timed("T", 100.0, {{"A", 1}}, {{"A", 1}});
    b.add_reward("c", [=](const Marking&) { return reward_value; });
    return b.build();
}

}  // namespace

TEST_CASE("a constant reward is estimated exactly with zero variance") {
    SimConfig cfg;
    cfg.horizon_hours = 5.0;
    cfg.replications = 4;
    cfg.seed = 3;
    SimEstimate est = simulate(constant_reward_loop(7.0), cfg);
    CHECK(est.mean.at("c") == 7.0);
    CHECK(est.std_error.at("c") == 0.0);
    CHECK(est.total_events > 0);
}

TEST_CASE("estimates are reproducible and seed-sensitive") {
    SrnModel model = build_baseline_model(ServiceParams{});
    SimConfig cfg;
    cfg.horizon_hours = 50.0;
    cfg.replications = 3;
    cfg.seed = 11;
    SimEstimate a = simulate(model, cfg);
    SimEstimate b = simulate(model, cfg);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.total_events == b.total_events);

    cfg.seed = 12;
    SimEstimate c = simulate(model, cfg);
    CHECK(a.mean.at(kSvlat) != c.mean.at(kSvlat));
}

TEST_CASE("thread count does not change the estimate") {
    SrnModel model = build_baseline_model(ServiceParams{});
    SimConfig cfg;
    cfg.horizon_hours = 50.0;
    cfg.replications = 4;
    cfg.seed = 21;
    cfg.threads = 1;
    SimEstimate serial = simulate(model, cfg);
    cfg.threads = 4;
    SimEstimate parallel = simulate(model, cfg);
    CHECK(serial.mean == parallel.mean);
    CHECK(serial.std_error == parallel.std_error);
}

TEST_CASE("baseline simulation agrees with the analytical solution") {
    SrnModel model = build_baseline_model(ServiceParams{});
    SimConfig cfg;
    cfg.horizon_hours = 4000.0;
    cfg.replications = 5;
    cfg.seed = 7;
    CrossCheckReport report = cross_check(model, cfg, 0.02);
    CHECK(report.entries.size() == 2);
    CHECK(report.all_pass);
    for (const auto& entry : report.entries) CHECK(entry.rel_error < 0.02);
}

TEST_CASE("monitored-model simulation agrees with the analytical solution") {
    ServiceParams params;  // 1 s inspection interval
    SrnModel model = build_monitored_model(params, *catalog_detector("Superior"));
    SimConfig cfg;
    cfg.horizon_hours = 3000.0;
    cfg.replications = 8;
    cfg.seed = 7;
    CrossCheckReport report = cross_check(model, cfg, 0.02);
    CHECK(report.all_pass);
}

TEST_CASE("a corrupted rate in the simulated model is detected") {
    ServiceParams good;
    ServiceParams bad = good;
    bad.anomaly_rate *= 2.0;  // corruption applied to the simulator input only
    SrnModel good_model = build_baseline_model(good);
    SrnModel bad_model = build_baseline_model(bad);

    Ctmc ctmc = eliminate_vanishing(explore(good_model));
    auto pi = steady_state(ctmc);
    double analytical = expected_reward(pi, reward_vector(good_model, ctmc, kSvcost));

    SimConfig cfg;
    cfg.horizon_hours = 2000.0;
    cfg.replications = 5;
    cfg.seed = 9;
    SimEstimate est = simulate(bad_model, cfg);
    CHECK(std::abs(est.mean.at(kSvcost) - analytical) / analytical > 0.02);
}

TEST_CASE("warmup choice does not move stationary estimates materially") {
    SrnModel model = build_baseline_model(ServiceParams{});
    SimConfig cfg;
    cfg.horizon_hours = 2000.0;
    cfg.replications = 5;
    cfg.seed = 31;
    cfg.warmup_fraction = 0.0;
    SimEstimate cold = simulate(model, cfg);
    cfg.warmup_fraction = 0.1;
    SimEstimate warm = simulate(model, cfg);
    for (const auto& [name, mean] : cold.mean) {
        double spread = 3.0 * (cold.std_error.at(name) + warm.std_error.at(name));
        CHECK(std::abs(mean - warm.mean.at(name)) <= spread);
    }
}

TEST_CASE("deadlocked markings stop the simulation") {
    ModelBuilder b;
    b.add_place("A", 1);
    b.add_place("B");
    b.add_timed("T", 1.0, {{"A", 1}}, {{"B", 1}});
    SimConfig cfg;
    cfg.horizon_hours = 10.0;
    cfg.replications = 1;
    CHECK_THROWS_AS(simulate(b.build(), cfg), DeadlockReached);
}

TEST_CASE("unresolvable vanishing markings are reported") {
    ModelBuilder b;
    b.add_place("A", 1);
    b.add_place("V");
    b.add_place("C");
    b.add_timed("T", 1.0, {{"A", 1}}, {{"V", 1}});
    b.add_immediate("u", 0.0, {{"V", 1}}, {{"C", 1}});
    SimConfig cfg;
    cfg.horizon_hours = 10.0;
    cfg.replications = 1;
    CHECK_THROWS_AS(simulate(b.build(), cfg), DeadState);
}

TEST_CASE("the event budget is enforced") {
    SimConfig cfg;
    cfg.horizon_hours = 1000.0;
    cfg.replications = 2;
    cfg.max_total_events = 1000;
    CHECK_THROWS_AS(simulate(constant_reward_loop(1.0), cfg), BudgetExceeded);
}

TEST_CASE("configuration bounds are checked") {
    SrnModel model = constant_reward_loop(1.0);
    SimConfig cfg;
    cfg.horizon_hours = 0.0;
    CHECK_THROWS_AS(simulate(model, cfg), OutOfRange);
    cfg = SimConfig{};
    cfg.replications = 0;
    CHECK_THROWS_AS(simulate(model, cfg), OutOfRange);
    cfg = SimConfig{};
    cfg.warmup_fraction = 1.0;
    CHECK_THROWS_AS(simulate(model, cfg), OutOfRange);
}
