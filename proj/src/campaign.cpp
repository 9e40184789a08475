#include "srn/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "srn/solver.hpp"
#include "srn/statespace.hpp"

namespace srn {

namespace {

using nlohmann::json;

std::string format_interval(double seconds) {
    std::ostringstream out;
    out << seconds << 's';
    return out.str();
}

DetectorProfile resolve_detector(const CampaignSpec& spec, const std::string& name) {
    auto custom = spec.custom_detectors.find(name);
    if (custom != spec.custom_detectors.end()) return custom->second;
    auto profile = catalog_detector(name, spec.prob_mode, spec.anomaly_fraction);
    if (!profile)
        throw RangeViolation("detector " + name + " is neither in the catalog nor in the config");
    return *profile;
}

LcConfig effective_lc(const CampaignSpec& spec, double active_anomaly_rate) {
    LcConfig lc = spec.lc;
    if (spec.lc_explicit_c_min) return lc;
    double base = spec.recompute_c_min ? active_anomaly_rate : spec.service.anomaly_rate;
    lc.cost_min = c_min_of(base, spec.service.down_scale_rate);
    return lc;
}

ScenarioResult baseline_scenario(const CampaignSpec& spec) {
    ScenarioResult r;
    r.detector = "baseline";
    r.interval_s = std::numeric_limits<double>::quiet_NaN();
    r.anomaly_rate = spec.service.anomaly_rate;
    r.failure_rate = spec.service.failure_rate;
    try {
        SrnModel model = build_baseline_model(spec.service);
        auto graph = explore(model);
        auto ctmc = eliminate_vanishing(graph);
        auto pi = steady_state(ctmc);
        r.svlat_ms = svlat(pi, ctmc, model, spec.service);
        r.svcost_replicas = svcost(pi, ctmc, model, spec.service);
        r.lc_score = lc_score(r.svlat_ms, r.svcost_replicas, effective_lc(spec, r.anomaly_rate));
        r.tangible_states = ctmc.state_count();
        r.residual = pi.residual_inf_norm;
    } catch (const Error& e) {
        r.error = e.what();
    }
    return r;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

// Matrix CSV in the plot-data layout: one detector column per value series,
// the sweep variable in the final column.
std::string matrix_csv(const std::vector<std::string>& detectors,
                       const std::vector<double>& sweep,
                       const std::vector<std::vector<double>>& cells) {
    std::string out;
    for (const std::string& d : detectors) out += d + ",";
    out += "x\n";
    for (std::size_t row = 0; row < sweep.size(); ++row) {
        for (std::size_t col = 0; col < detectors.size(); ++col)
            out += format_number(cells[row][col]) + ",";
        out += format_number(sweep[row]) + "\n";
    }
    return out;
}

json result_json(const ScenarioResult& r) {
    json j{{"detector", r.detector},
           {"svlat_ms", r.svlat_ms},
           {"svcost_replicas", r.svcost_replicas},
           {"lc", r.lc_score},
           {"tangible_states", r.tangible_states},
           {"residual", r.residual},
           {"lambda_a", r.anomaly_rate},
           {"lambda_f", r.failure_rate}};
    if (std::isfinite(r.interval_s)) j["interval_s"] = r.interval_s;
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

struct SweepOutput {
    std::vector<ScenarioResult> results;
    std::vector<std::vector<double>> svlat;
    std::vector<std::vector<double>> svcost;
    std::vector<std::vector<double>> lc;
    bool ok = true;
};

// Runs detectors x sweep in deterministic order. mutate(service, x) applies
// the swept variable; the inspection interval itself is a special case.
template <typename Mutate>
SweepOutput run_sweep(const CampaignSpec& spec, const std::vector<std::string>& detectors,
                      std::vector<double> sweep, bool sweep_is_interval, Mutate mutate,
                      std::ostream& log) {
    std::sort(sweep.begin(), sweep.end());
    SweepOutput out;
    for (double x : sweep) {
        std::vector<double> row_lat, row_cost, row_lc;
        for (const std::string& name : detectors) {
            ServiceParams params = spec.service;
            double interval = sweep_is_interval ? x : spec.fixed_interval_s;
            if (!sweep_is_interval) mutate(params, x);
            ScenarioResult r;
            try {
                DetectorProfile detector = resolve_detector(spec, name);
                r = solve_scenario(params, detector, interval,
                                   effective_lc(spec, params.anomaly_rate));
            } catch (const Error& e) {
                r.detector = name;
                r.interval_s = interval;
                r.svlat_ms = r.svcost_replicas = r.lc_score =
                    std::numeric_limits<double>::quiet_NaN();
                r.error = e.what();
            }
            r.anomaly_rate = params.anomaly_rate;
            r.failure_rate = params.failure_rate;
            if (!r.error.empty()) {
                out.ok = false;
                log << "FAILED " << name << " @ x=" << x << ": " << r.error << "\n";
            }
            row_lat.push_back(r.svlat_ms);
            row_cost.push_back(r.svcost_replicas);
            row_lc.push_back(r.lc_score);
            out.results.push_back(std::move(r));
        }
        out.svlat.push_back(std::move(row_lat));
        out.svcost.push_back(std::move(row_cost));
        out.lc.push_back(std::move(row_lc));
    }
    return out;
}

void emit_sweep(const CampaignSpec& spec, const std::vector<std::string>& detectors,
                std::vector<double> sweep, const SweepOutput& out,
                const std::vector<std::pair<std::string, const std::vector<std::vector<double>>*>>& csvs,
                const std::string& json_name, CampaignOutcome& outcome) {
    std::sort(sweep.begin(), sweep.end());
    std::filesystem::create_directories(spec.out_dir);
    if (spec.format == OutputFormat::Csv) {
        for (const auto& [name, cells] : csvs) {
            auto path = spec.out_dir / name;
            write_file(path, matrix_csv(detectors, sweep, *cells));
            outcome.files_written.push_back(path);
        }
    } else {
        json rows = json::array();
        for (const ScenarioResult& r : out.results) rows.push_back(result_json(r));
        auto path = spec.out_dir / json_name;
        write_file(path, rows.dump(2) + "\n");
        outcome.files_written.push_back(path);
    }
}

std::uint64_t scenario_seed(std::uint64_t base, std::size_t ordinal) {
    return base + 0x9E3779B97F4A7C15ULL * (ordinal + 1);
}

CampaignOutcome run_cross_check_campaign(const CampaignSpec& spec,
                                         const std::vector<std::string>& detectors,
                                         std::ostream& log) {
    CampaignOutcome outcome;
    std::vector<double> intervals = spec.intervals_s;
    std::sort(intervals.begin(), intervals.end());

    std::size_t ordinal = 0;
    auto check_model = [&](const std::string& label, const SrnModel& model) {
        SimConfig cfg = spec.sim;
        cfg.seed = scenario_seed(spec.sim.seed, ordinal++);
        try {
            CrossCheckReport report = cross_check(model, cfg, spec.tolerance);
            for (const CrossCheckEntry& entry : report.entries) {
                outcome.cross_checks.push_back({label, entry});
                if (!entry.pass) outcome.ok = false;
            }
        } catch (const Error& e) {
            outcome.ok = false;
            CrossCheckEntry entry;
            entry.reward = "(error)";
            entry.pass = false;
            outcome.cross_checks.push_back({label, entry});
            log << "FAILED " << label << ": " << e.what() << "\n";
        }
    };

    for (const std::string& name : detectors) {
        for (double interval : intervals) {
            ServiceParams params = spec.service;
            params.inspection_rate = interval_to_rate(interval);
            DetectorProfile detector = resolve_detector(spec, name);
            check_model(name + "@" + format_interval(interval),
                        build_monitored_model(params, detector));
        }
    }
    check_model("baseline", build_baseline_model(spec.service));

    std::filesystem::create_directories(spec.out_dir);
    if (spec.format == OutputFormat::Csv) {
        std::string csv = "scenario,reward,analytical,simulated,std_error,rel_error,pass\n";
        for (const CrossCheckRow& row : outcome.cross_checks) {
            csv += row.scenario + "," + row.entry.reward + "," +
                   format_number(row.entry.analytical) + "," + format_number(row.entry.simulated) +
                   "," + format_number(row.entry.std_error) + "," +
                   format_number(row.entry.rel_error) + "," + (row.entry.pass ? "1" : "0") + "\n";
        }
        auto path = spec.out_dir / "cross_check.csv";
        write_file(path, csv);
        outcome.files_written.push_back(path);
    } else {
        json rows = json::array();
        for (const CrossCheckRow& row : outcome.cross_checks)
            rows.push_back(json{{"scenario", row.scenario},
                                {"reward", row.entry.reward},
                                {"analytical", row.entry.analytical},
                                {"simulated", row.entry.simulated},
                                {"std_error", row.entry.std_error},
                                {"rel_error", row.entry.rel_error},
                                {"pass", row.entry.pass}});
        auto path = spec.out_dir / "cross_check.json";
        write_file(path, rows.dump(2) + "\n");
        outcome.files_written.push_back(path);
    }

    double max_rel = 0.0;
    for (const CrossCheckRow& row : outcome.cross_checks)
        max_rel = std::max(max_rel, row.entry.rel_error);
    log << "cross-check: " << outcome.cross_checks.size() << " comparisons, max rel error "
        << max_rel << (outcome.ok ? " (all within tolerance)" : " (FAILURES)") << "\n";
    return outcome;
}

}  // namespace

std::vector<std::string> CampaignSpec::detector_columns() const {
    if (!detectors.empty()) return detectors;
    std::vector<std::string> columns;
    for (const CatalogEntry& e : detector_catalog()) columns.emplace_back(e.name);
    for (const auto& [name, profile] : custom_detectors) columns.push_back(name);
    return columns;
}

ScenarioResult solve_scenario(const ServiceParams& params, const DetectorProfile& detector,
                              double interval_s, const LcConfig& lc) {
    ServiceParams active = params;
    active.inspection_rate = interval_to_rate(interval_s);
    ScenarioResult r;
    r.detector = detector.name;
    r.interval_s = interval_s;
    r.anomaly_rate = active.anomaly_rate;
    r.failure_rate = active.failure_rate;

    SrnModel model = build_monitored_model(active, detector);
    auto graph = explore(model);
    auto ctmc = eliminate_vanishing(graph);
    auto pi = steady_state(ctmc);
    r.svlat_ms = svlat(pi, ctmc, model, active);
    r.svcost_replicas = svcost(pi, ctmc, model, active);
    r.lc_score = lc_score(r.svlat_ms, r.svcost_replicas, lc);
    r.tangible_states = ctmc.state_count();
    r.residual = pi.residual_inf_norm;
    return r;
}

CampaignOutcome run_campaign(const CampaignSpec& spec, std::ostream& log) {
    const std::vector<std::string> detectors = spec.detector_columns();
    if (detectors.empty()) throw RangeViolation("campaign needs at least one detector");

    CampaignOutcome outcome;
    auto no_mutation = [](ServiceParams&, double) {};

    switch (spec.kind) {
        case CampaignKind::LatencyCostVsInterval: {
            auto out = run_sweep(spec, detectors, spec.intervals_s, true, no_mutation, log);
            emit_sweep(spec, detectors, spec.intervals_s, out,
                       {{"latency_vs_interval.csv", &out.svlat},
                        {"cost_vs_interval.csv", &out.svcost}},
                       "latency_cost_vs_interval.json", outcome);
            outcome.results = std::move(out.results);
            outcome.ok = out.ok;
            break;
        }
        case CampaignKind::LcScoreVsInterval: {
            auto out = run_sweep(spec, detectors, spec.intervals_s, true, no_mutation, log);
            emit_sweep(spec, detectors, spec.intervals_s, out, {{"lc_vs_interval.csv", &out.lc}},
                       "lc_vs_interval.json", outcome);
            outcome.results = std::move(out.results);
            outcome.ok = out.ok;
            break;
        }
        case CampaignKind::LcVsAnomalyRate: {
            auto out = run_sweep(spec, detectors, spec.anomaly_rates, false,
                                 [](ServiceParams& p, double x) { p.anomaly_rate = x; }, log);
            emit_sweep(spec, detectors, spec.anomaly_rates, out,
                       {{"lc_vs_anomaly_rate.csv", &out.lc}}, "lc_vs_anomaly_rate.json", outcome);
            outcome.results = std::move(out.results);
            outcome.ok = out.ok;
            break;
        }
        case CampaignKind::LcVsTimeToCrash: {
            auto out = run_sweep(spec, detectors, spec.times_to_crash_s, false,
                                 [](ServiceParams& p, double x) {
                                     p.failure_rate = interval_to_rate(x);
                                 },
                                 log);
            emit_sweep(spec, detectors, spec.times_to_crash_s, out,
                       {{"lc_vs_time_to_crash.csv", &out.lc}}, "lc_vs_time_to_crash.json",
                       outcome);
            outcome.results = std::move(out.results);
            outcome.ok = out.ok;
            break;
        }
        case CampaignKind::Baseline: {
            ScenarioResult r = baseline_scenario(spec);
            outcome.ok = r.error.empty();
            if (!outcome.ok) log << "FAILED baseline: " << r.error << "\n";
            outcome.results.push_back(r);
            std::filesystem::create_directories(spec.out_dir);
            if (spec.format == OutputFormat::Csv) {
                std::string csv = "svlat,svcost,lc\n" + format_number(r.svlat_ms) + "," +
                                  format_number(r.svcost_replicas) + "," +
                                  format_number(r.lc_score) + "\n";
                auto path = spec.out_dir / "baseline.csv";
                write_file(path, csv);
                outcome.files_written.push_back(path);
            } else {
                auto path = spec.out_dir / "baseline.json";
                write_file(path, json::array({result_json(r)}).dump(2) + "\n");
                outcome.files_written.push_back(path);
            }
            break;
        }
        case CampaignKind::SinglePoint: {
            ScenarioResult r;
            try {
                DetectorProfile detector = resolve_detector(spec, detectors.front());
                r = solve_scenario(spec.service, detector, spec.fixed_interval_s,
                                   effective_lc(spec, spec.service.anomaly_rate));
            } catch (const Error& e) {
                r.detector = detectors.front();
                r.interval_s = spec.fixed_interval_s;
                r.error = e.what();
            }
            outcome.ok = r.error.empty();
            if (!outcome.ok) log << "FAILED " << r.detector << ": " << r.error << "\n";
            outcome.results.push_back(std::move(r));
            break;
        }
        case CampaignKind::CrossCheck:
            return run_cross_check_campaign(spec, detectors, log);
    }
    return outcome;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (value == 0.0) return "0";
    double magnitude = std::abs(value);
    char buffer[64];
    if (magnitude >= 1e6 || !std::isfinite(value)) {
        std::snprintf(buffer, sizeof(buffer), "%.5e", value);
        return buffer;
    }
    int exponent = static_cast<int>(std::floor(std::log10(magnitude)));
    int decimals = std::clamp(5 - exponent, 0, 24);
    std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
    return buffer;
}

}  // namespace srn
