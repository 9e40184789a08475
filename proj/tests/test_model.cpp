#include <algorithm>
#include <set>

#include "doctest.h"
#include "srn/cloud_model.hpp"
#include "srn/model.hpp"

using namespace srn;

namespace {

SrnModel fig2(double p_tp = 0.95, double p_fp = 0.001) {
    DetectorProfile d;
    d.name = "test";
    d.p_tp = p_tp;
    d.p_fp = p_fp;
    return build_monitored_model(ServiceParams{}, d);
}

Marking single_token(const SrnModel& model, const std::string& place) {
    Marking m(std::vector<std::uint32_t>(model.place_count(), 0));
    m[model.place(place)] = 1;
    return m;
}

std::set<std::string> enabled_names(const SrnModel& model, const Marking& m) {
    std::set<std::string> names;
    for (TransitionId t : enabled_transitions(model, m)) names.insert(model.transition(t).name);
    return names;
}

}  // namespace

TEST_CASE("enabled transitions on the monitored net") {
    SrnModel model = fig2();
    CHECK(enabled_names(model, single_token(model, places::kNorm)) ==
          std::set<std::string>{"T_anom", "T_inspec2"});
    CHECK(enabled_names(model, single_token(model, places::kAnom)) ==
          std::set<std::string>{"T_inspec", "T_down"});
    // immediate-only even though the marking would enable nothing timed anyway
    CHECK(enabled_names(model, single_token(model, places::kInfer)) ==
          std::set<std::string>{"t_tp", "t_fn"});
    CHECK(enabled_names(model, single_token(model, places::kInfer2)) ==
          std::set<std::string>{"t_tn", "t_fp"});
}

TEST_CASE("immediate transitions preempt timed ones") {
    ModelBuilder b;
    b.add_place("A", 1);
    b.add_place("B");
    b.add_timed("T", 5.0, {{"A", 1}}, {{"B", 1}});
    b.add_immediate("u", 1.0, {{"A", 1}}, {{"B", 1}});
    SrnModel model = b.build();
    auto enabled = enabled_transitions(model, model.initial_marking());
    REQUIRE(enabled.size() == 1);
    CHECK(model.transition(enabled[0]).name == "u");
    CHECK_THROWS_AS(fire(model, model.initial_marking(), model.transition_id("T")),
                    FiringDisabledTransition);
}

TEST_CASE("firing moves tokens along the arcs") {
    SrnModel model = fig2();
    CHECK(fire(model, single_token(model, places::kNorm), model.transition_id("T_anom")) ==
          single_token(model, places::kAnom));
    CHECK(fire(model, single_token(model, places::kAnom), model.transition_id("T_down")) ==
          single_token(model, places::kDown));
    CHECK(fire(model, single_token(model, places::kInfer2), model.transition_id("t_tn")) ==
          single_token(model, places::kNorm));

    Marking before = single_token(model, places::kNorm);
    fire(model, before, model.transition_id("T_anom"));
    CHECK(before == single_token(model, places::kNorm));  // input unmodified
    CHECK_THROWS_AS(fire(model, before, model.transition_id("T_recov")),
                    FiringDisabledTransition);
}

TEST_CASE("firing conserves tokens and is deterministic on the single-token net") {
    SrnModel model = fig2();
    std::vector<Marking> frontier{model.initial_marking()};
    std::set<Marking> seen(frontier.begin(), frontier.end());
    while (!frontier.empty()) {
        Marking m = frontier.back();
        frontier.pop_back();
        auto enabled = enabled_transitions(model, m);
        CHECK(enabled == enabled_transitions(model, m));
        for (TransitionId t : enabled) {
            Marking next = fire(model, m, t);
            CHECK(next == fire(model, m, t));
            CHECK(next.total_tokens() == 1);
            if (seen.insert(next).second) frontier.push_back(next);
        }
    }
    CHECK(seen.size() == 10);
}

TEST_CASE("guards gate enabling") {
    ModelBuilder b;
    b.add_place("A", 2);
    b.add_place("B");
    PlaceId a = b.place("A");
    b.add_timed("T", 1.0, {{"A", 1}}, {{"B", 1}},
                [a](const Marking& m) { return m[a] >= 2; });
    SrnModel model = b.build();
    CHECK(enabled_transitions(model, model.initial_marking()).size() == 1);
    Marking one(std::vector<std::uint32_t>{1, 1});
    CHECK(enabled_transitions(model, one).empty());
}

TEST_CASE("multiplicities are respected") {
    ModelBuilder b;
    b.add_place("A", 3);
    b.add_place("B");
    b.add_timed("T", 1.0, {{"A", 2}}, {{"B", 1}});
    SrnModel model = b.build();
    Marking start = model.initial_marking();
    Marking after = fire(model, start, model.transition_id("T"));
    CHECK(after[model.place("A")] == 1);
    CHECK(after[model.place("B")] == 1);
    CHECK(enabled_transitions(model, after).empty());
}

TEST_CASE("validate accepts the monitored net") {
    CHECK(validate(fig2()).empty());
}

TEST_CASE("validate flags weights that do not sum to one") {
    ModelBuilder b;
    b.add_place("A", 1);
    b.add_place("B");
    b.add_place("C");
    b.add_timed("T", 1.0, {{"A", 1}}, {{"B", 1}});
    b.add_immediate("u1", 0.95, {{"B", 1}}, {{"C", 1}});
    b.add_immediate("u2", 0.1, {{"B", 1}}, {{"A", 1}});
    b.declare_exact_probabilities();
    SrnModel model = b.build();
    auto violations = validate(model);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].code == "weight-sum");
    CHECK(violations[0].message.find("1.05") != std::string::npos);
}

TEST_CASE("validate flags nonpositive rates and missing inputs") {
    ModelBuilder b;
    b.add_place("A", 1);
    b.add_timed("T", 0.0, {{"A", 1}}, {{"A", 1}});
    auto violations = validate(b.build());
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].code == "nonpositive-rate");

    ModelBuilder b2;
    b2.add_place("A", 1);
    b2.add_timed("T", 1.0, {}, {{"A", 1}});
    auto v2 = validate(b2.build());
    REQUIRE(v2.size() == 1);
    CHECK(v2[0].code == "no-input-arcs");
}

TEST_CASE("builder rejects unknown places and duplicate names") {
    ModelBuilder b;
    b.add_place("A", 1);
    CHECK_THROWS_AS(b.add_place("A"), Error);
    CHECK_THROWS_AS(b.add_timed("T", 1.0, {{"missing", 1}}, {{"A", 1}}), Error);
}

TEST_CASE("marking rendering lists marked places") {
    SrnModel model = fig2();
    CHECK(model.marking_name(single_token(model, places::kNorm)) == "{P_norm:1}");
    CHECK(model.marking_name(Marking(std::vector<std::uint32_t>(10, 0))) == "{}");
}
