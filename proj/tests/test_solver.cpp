#include <cmath>

#include "doctest.h"
#include "srn/cloud_model.hpp"
#include "srn/solver.hpp"
#include "test_support.hpp"

using namespace srn;

namespace {

Ctmc two_state(double forward, double backward) {
    Ctmc ctmc;
    ctmc.states.emplace_back(std::vector<std::uint32_t>{1, 0});
    ctmc.states.emplace_back(std::vector<std::uint32_t>{0, 1});
    ctmc.rows = {{{1, forward}}, {{0, backward}}};
    ctmc.exit_rates = {forward, backward};
    return ctmc;
}

}  // namespace

TEST_CASE("two-state chains solve by balance") {
    auto symmetric = steady_state(two_state(2.0, 2.0));
    CHECK(symmetric.probabilities[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(symmetric.probabilities[1] == doctest::Approx(0.5).epsilon(1e-12));

    auto skewed = steady_state(two_state(1.0, 3.0));
    CHECK(skewed.probabilities[0] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(skewed.probabilities[1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(skewed.residual_inf_norm <= 1e-10);
}

TEST_CASE("baseline cycle matches the hand-solved distribution") {
    SrnModel model = build_baseline_model(ServiceParams{});
    Ctmc ctmc = eliminate_vanishing(explore(model));
    auto pi = steady_state(ctmc);
    // flow balance: pi_i proportional to 1/exit rate along the cycle
    REQUIRE(pi.probabilities.size() == 4);
    CHECK(pi.probabilities[0] == doctest::Approx(60.0 / 77.0).epsilon(1e-12));  // P_norm
    CHECK(pi.probabilities[1] == doctest::Approx(6.0 / 77.0).epsilon(1e-12));   // P_anom
    CHECK(pi.probabilities[2] == doctest::Approx(5.0 / 77.0).epsilon(1e-12));   // P_down
    CHECK(pi.probabilities[3] == doctest::Approx(6.0 / 77.0).epsilon(1e-12));   // P_scaledout
    CHECK(pi.residual_inf_norm <= 1e-10);

    auto svlat = expected_reward(pi, reward_vector(model, ctmc, kSvlat));
    CHECK(svlat == doctest::Approx(128900.0 / 77.0).epsilon(1e-12));
    CHECK(std::abs(svlat - 1674.0) / 1674.0 < 0.01);
    auto svcost = expected_reward(pi, reward_vector(model, ctmc, kSvcost));
    CHECK(svcost == doctest::Approx(83.0 / 77.0).epsilon(1e-12));
    CHECK(std::abs(svcost - 1.078) / 1.078 < 0.005);
}

TEST_CASE("constant rewards are reproduced exactly") {
    auto pi = steady_state(two_state(1.0, 3.0));
    std::vector<double> constant{7.0, 7.0};
    CHECK(expected_reward(pi, constant) == doctest::Approx(7.0).epsilon(1e-15));
}

TEST_CASE("expected reward is linear") {
    auto ctmc = testsupport::random_irreducible_ctmc(7, 20);
    auto pi = steady_state(ctmc);
    std::uint64_t state = 99;
    std::vector<double> r(ctmc.state_count()), s(ctmc.state_count());
    for (std::size_t i = 0; i < ctmc.state_count(); ++i) {
        r[i] = testsupport::uniform01(state) * 10.0;
        s[i] = testsupport::uniform01(state) * 10.0;
    }
    std::vector<double> mixed(ctmc.state_count());
    for (std::size_t i = 0; i < ctmc.state_count(); ++i) mixed[i] = 2.0 * r[i] + 3.0 * s[i];
    CHECK(expected_reward(pi, mixed) ==
          doctest::Approx(2.0 * expected_reward(pi, r) + 3.0 * expected_reward(pi, s))
              .epsilon(1e-12));
}

TEST_CASE("dimension mismatches are rejected") {
    auto pi = steady_state(two_state(1.0, 1.0));
    std::vector<double> wrong{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(expected_reward(pi, wrong), DimensionMismatch);
}

TEST_CASE("state probabilities sum over matching markings") {
    SrnModel model = build_baseline_model(ServiceParams{});
    Ctmc ctmc = eliminate_vanishing(explore(model));
    auto pi = steady_state(ctmc);
    CHECK(state_probability(pi, ctmc, [](const Marking&) { return true; }) ==
          doctest::Approx(1.0).epsilon(1e-12));
    PlaceId down = model.place(places::kDown);
    CHECK(state_probability(pi, ctmc, [&](const Marking& m) { return m[down] > 0; }) ==
          doctest::Approx(5.0 / 77.0).epsilon(1e-12));
}

TEST_CASE("unreachable detector outcomes carry zero probability") {
    DetectorProfile d;
    d.name = "nofp";
    d.p_tp = 0.95;
    d.p_fp = 0.0;
    SrnModel model = build_monitored_model(ServiceParams{}, d);
    Ctmc ctmc = eliminate_vanishing(explore(model));
    auto pi = steady_state(ctmc);
    PlaceId fp = model.place(places::kFp);
    CHECK(state_probability(pi, ctmc, [&](const Marking& m) { return m[fp] > 0; }) == 0.0);
}

TEST_CASE("transient states are pruned and reported") {
    Ctmc ctmc;
    for (std::uint32_t i = 0; i < 3; ++i)
        ctmc.states.emplace_back(std::vector<std::uint32_t>{i});
    ctmc.rows = {{{1, 1.0}}, {{2, 2.0}}, {{1, 2.0}}};
    ctmc.exit_rates = {1.0, 2.0, 2.0};
    auto pi = steady_state(ctmc);
    CHECK(pi.probabilities[0] == 0.0);
    CHECK(pi.probabilities[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pi.probabilities[2] == doctest::Approx(0.5).epsilon(1e-12));
    REQUIRE(pi.pruned_states.size() == 1);
    CHECK(pi.pruned_states[0] == 0);
}

TEST_CASE("two recurrent classes are rejected") {
    Ctmc ctmc;
    for (std::uint32_t i = 0; i < 4; ++i)
        ctmc.states.emplace_back(std::vector<std::uint32_t>{i});
    ctmc.rows = {{{1, 1.0}}, {{0, 1.0}}, {{3, 1.0}}, {{2, 1.0}}};
    ctmc.exit_rates = {1.0, 1.0, 1.0, 1.0};
    CHECK_THROWS_AS(steady_state(ctmc), ReducibleChain);
    CHECK_THROWS_AS(steady_state(Ctmc{}), ReducibleChain);
}

TEST_CASE("solution is invariant under uniform rate scaling") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        Ctmc ctmc = testsupport::random_irreducible_ctmc(seed);
        auto pi = steady_state(ctmc);
        Ctmc scaled = ctmc;
        for (auto& row : scaled.rows)
            for (auto& [target, r] : row) r *= 1000.0;
        for (auto& e : scaled.exit_rates) e *= 1000.0;
        auto pi2 = steady_state(scaled);
        for (std::size_t i = 0; i < pi.probabilities.size(); ++i)
            CHECK(std::abs(pi.probabilities[i] - pi2.probabilities[i]) < 1e-12);
    }
}

TEST_CASE("probability flow is constant around a single cycle") {
    Ctmc ctmc;
    std::vector<double> rates{6.0, 60.0, 72.0, 60.0, 17.5};
    for (std::uint32_t i = 0; i < rates.size(); ++i)
        ctmc.states.emplace_back(std::vector<std::uint32_t>{i});
    ctmc.rows.resize(rates.size());
    for (std::uint32_t i = 0; i < rates.size(); ++i)
        ctmc.rows[i] = {{static_cast<std::uint32_t>((i + 1) % rates.size()), rates[i]}};
    ctmc.exit_rates = rates;
    auto pi = steady_state(ctmc);
    double flow = pi.probabilities[0] * rates[0];
    for (std::size_t i = 1; i < rates.size(); ++i)
        CHECK(pi.probabilities[i] * rates[i] == doctest::Approx(flow).epsilon(1e-12));
}

TEST_CASE("GTH agrees with an independent dense solve on random chains") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        Ctmc ctmc = testsupport::random_irreducible_ctmc(seed);
        auto pi = steady_state(ctmc);
        auto oracle = testsupport::naive_stationary(ctmc);
        REQUIRE(pi.probabilities.size() == oracle.size());
        for (std::size_t i = 0; i < oracle.size(); ++i)
            CHECK(std::abs(pi.probabilities[i] - oracle[i]) < 1e-9);
        CHECK(pi.residual_inf_norm <= 1e-10);
        double sum = 0.0;
        for (double p : pi.probabilities) {
            CHECK(p >= 0.0);
            sum += p;
        }
        CHECK(std::abs(sum - 1.0) < 1e-9);
    }
}
