#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "srn/campaign.hpp"

using namespace srn;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "srnlab_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("numbers print with six significant digits and no exponent below 1e6") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(1674.0519) == "1674.05");
    CHECK(format_number(0.5) == "0.500000");
    CHECK(format_number(1.0) == "1.00000");
    CHECK(format_number(10.0) == "10.0000");
    CHECK(format_number(0.000123456) == "0.000123456");
    CHECK(format_number(1234567.0) == "1.23457e+06");
    CHECK(format_number(-3.25) == "-3.25000");
    CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("config parsing merges overrides onto the defaults") {
    CampaignSpec spec = parse_config(
        "[service]\n"
        "lambda_a = 12\n"
        "[campaign]\n"
        "kind = baseline\n");
    CHECK(spec.service.anomaly_rate == 12.0);
    CHECK(spec.service.failure_rate == 60.0);
    CHECK(spec.service.inference_rate == 36000.0);
    CHECK(spec.service.latency_down_ms == 25000.0);
    CHECK(spec.kind == CampaignKind::Baseline);
}

TEST_CASE("config parsing enforces required keys and vocabulary") {
    CHECK_THROWS_WITH_AS(parse_config("[campaign]\n"), "campaign.kind required", RangeViolation);
    CHECK_THROWS_AS(parse_config("[campaign]\nkind = baseline\nturbo = on\n"), UnknownKey);
    CHECK_THROWS_AS(parse_config("[warp]\nspeed = 9\n"), UnknownKey);
    CHECK_THROWS_AS(parse_config("[service]\nlambda_a = -1\n[campaign]\nkind = baseline\n"),
                    RangeViolation);

    try {
        parse_config("[service]\nlambda_a = fast\n[campaign]\nkind = baseline\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("custom detectors derive their probabilities from the config") {
    CampaignSpec spec = parse_config(
        "[detectors]\n"
        "use = Custom1\n"
        "Custom1.recall = 0.9\n"
        "Custom1.precision = 0.9\n"
        "[campaign]\n"
        "kind = lc-score-vs-interval\n");
    REQUIRE(spec.custom_detectors.contains("Custom1"));
    const DetectorProfile& d = spec.custom_detectors.at("Custom1");
    CHECK(d.p_tp == 0.9);
    CHECK(d.p_fp == doctest::Approx(0.0041666667).epsilon(1e-6));
    CHECK(spec.detector_columns() == std::vector<std::string>{"Custom1"});

    CHECK_THROWS_AS(parse_config("[detectors]\nCustom1.recall = 0.9\n[campaign]\nkind = baseline\n"),
                    RangeViolation);  // precision missing
    CHECK_THROWS_AS(parse_config("[detectors]\nuse = Ghost\n[campaign]\nkind = baseline\n"),
                    RangeViolation);
}

TEST_CASE("baseline campaign reproduces the no-detection figures") {
    CampaignSpec spec;
    spec.kind = CampaignKind::Baseline;
    spec.out_dir = fresh_dir("baseline");
    std::ostringstream log;
    CampaignOutcome outcome = run_campaign(spec, log);
    REQUIRE(outcome.ok);
    REQUIRE(outcome.results.size() == 1);
    const ScenarioResult& r = outcome.results.front();
    CHECK(std::abs(r.svlat_ms - 1674.0) / 1674.0 < 0.01);
    CHECK(std::abs(r.svcost_replicas - 1.078) / 1.078 < 0.005);

    std::string csv = read_file(spec.out_dir / "baseline.csv");
    CHECK(csv.substr(0, csv.find('\n')) == "svlat,svcost,lc");
    CHECK(csv.find("1674.03") != std::string::npos);
}

TEST_CASE("interval campaigns emit the pinned plot-data schema") {
    CampaignSpec spec;
    spec.kind = CampaignKind::LatencyCostVsInterval;
    spec.out_dir = fresh_dir("latcost");
    std::ostringstream log;
    CampaignOutcome outcome = run_campaign(spec, log);
    REQUIRE(outcome.ok);
    CHECK(outcome.results.size() == 28);

    std::string csv = read_file(spec.out_dir / "latency_vs_interval.csv");
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "Superior,GreatPrec,GoodPrec,GreatRec,GoodRec,Heuristic,Random,x");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        CHECK(std::count(line.begin(), line.end(), ',') == 7);
        ++rows;
    }
    CHECK(rows == 4);
    CHECK(fs::exists(spec.out_dir / "cost_vs_interval.csv"));

    for (const ScenarioResult& r : outcome.results) {
        CHECK(r.svlat_ms >= spec.service.latency_normal_ms);
        CHECK(r.svcost_replicas >= spec.service.replicas_default);
        CHECK(r.svcost_replicas <= spec.service.replicas_scaled_out);
    }
}

TEST_CASE("campaign output is byte-identical across runs") {
    CampaignSpec spec;
    spec.kind = CampaignKind::LcScoreVsInterval;
    spec.detectors = {"Superior", "Random"};
    spec.intervals_s = {1.0, 5.0};
    std::ostringstream log;
    spec.out_dir = fresh_dir("repeat_a");
    run_campaign(spec, log);
    std::string first = read_file(spec.out_dir / "lc_vs_interval.csv");
    spec.out_dir = fresh_dir("repeat_b");
    run_campaign(spec, log);
    CHECK(first == read_file(spec.out_dir / "lc_vs_interval.csv"));
}

TEST_CASE("the best trade-off at frequent inspection comes from precision") {
    CampaignSpec spec;
    spec.kind = CampaignKind::LcScoreVsInterval;
    spec.intervals_s = {0.5, 1.0};
    spec.out_dir = fresh_dir("lcmin");
    std::ostringstream log;
    CampaignOutcome outcome = run_campaign(spec, log);
    REQUIRE(outcome.ok);
    for (double interval : spec.intervals_s) {
        std::vector<std::pair<double, std::string>> scored;
        for (const ScenarioResult& r : outcome.results)
            if (r.interval_s == interval) scored.push_back({r.lc_score, r.detector});
        std::sort(scored.begin(), scored.end());
        REQUIRE(scored.size() == 7);
        std::set<std::string> two_lowest{scored[0].second, scored[1].second};
        CHECK(two_lowest == std::set<std::string>{"Superior", "GreatPrec"});
    }
}

TEST_CASE("sensitivity sweeps keep their qualitative shape") {
    CampaignSpec spec;
    spec.kind = CampaignKind::LcVsAnomalyRate;
    spec.out_dir = fresh_dir("anomaly");
    std::ostringstream log;
    CampaignOutcome outcome = run_campaign(spec, log);
    REQUIRE(outcome.ok);
    for (const std::string& detector : spec.detector_columns()) {
        double previous = -1e9;
        for (const ScenarioResult& r : outcome.results) {
            if (r.detector != detector) continue;
            CHECK(r.lc_score >= previous - 1e-12);
            previous = r.lc_score;
        }
    }
}

TEST_CASE("time-to-crash sweeps record the converted failure rate") {
    CampaignSpec spec;
    spec.kind = CampaignKind::LcVsTimeToCrash;
    spec.detectors = {"GreatPrec"};
    spec.format = OutputFormat::Json;
    spec.out_dir = fresh_dir("ttc");
    std::ostringstream log;
    CampaignOutcome outcome = run_campaign(spec, log);
    REQUIRE(outcome.ok);

    auto rows = nlohmann::json::parse(read_file(spec.out_dir / "lc_vs_time_to_crash.json"));
    REQUIRE(rows.is_array());
    bool found = false;
    for (const auto& row : rows) {
        if (row["interval_s"] == 1.0 && row["lambda_f"] == 240.0) found = true;
    }
    CHECK(found);

    // shorter time to crash worsens the score
    double lc15 = 0.0, lc120 = 0.0;
    for (const ScenarioResult& r : outcome.results) {
        if (r.failure_rate == 240.0) lc15 = r.lc_score;
        if (r.failure_rate == 30.0) lc120 = r.lc_score;
    }
    CHECK(lc15 > lc120);
}

TEST_CASE("failed scenarios are recorded without aborting the campaign") {
    CampaignSpec spec;
    spec.kind = CampaignKind::LcScoreVsInterval;
    spec.intervals_s = {1.0};
    spec.detectors = {"Superior", "Broken"};
    DetectorProfile broken;
    broken.name = "Broken";
    broken.p_tp = 2.0;  // invalid on purpose
    spec.custom_detectors.emplace("Broken", broken);
    spec.out_dir = fresh_dir("failures");
    std::ostringstream log;
    CampaignOutcome outcome = run_campaign(spec, log);
    CHECK(!outcome.ok);
    REQUIRE(outcome.results.size() == 2);
    CHECK(outcome.results[0].error.empty());
    CHECK(!outcome.results[1].error.empty());
    CHECK(log.str().find("Broken") != std::string::npos);

    std::string csv = read_file(spec.out_dir / "lc_vs_interval.csv");
    CHECK(csv.find("nan") != std::string::npos);
}

TEST_CASE("single-point campaigns solve one scenario") {
    CampaignSpec spec;
    spec.kind = CampaignKind::SinglePoint;
    spec.detectors = {"Heuristic"};
    spec.fixed_interval_s = 5.0;
    std::ostringstream log;
    CampaignOutcome outcome = run_campaign(spec, log);
    REQUIRE(outcome.ok);
    REQUIRE(outcome.results.size() == 1);
    CHECK(outcome.results[0].detector == "Heuristic");
    CHECK(outcome.results[0].interval_s == 5.0);
    CHECK(outcome.results[0].tangible_states == 8);
}
