#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "srn/campaign.hpp"
#include "srn/solver.hpp"
#include "srn/statespace.hpp"

namespace {

using srn::CampaignKind;
using srn::CampaignSpec;

struct CommonFlags {
    std::string config;
    std::string out;
    double lmax = 0.0;
    std::string prob_mode;
    std::uint64_t seed = 0;
    std::string format;

    CLI::Option* out_opt = nullptr;
    CLI::Option* lmax_opt = nullptr;
    CLI::Option* prob_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* format_opt = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config, "Configuration file (sections: service, detectors, lc, campaign)");
        out_opt = cmd->add_option("--out", out, "Output directory for plot data");
        lmax_opt = cmd->add_option("--lmax", lmax, "Latency normalization bound l_max in ms");
        prob_opt = cmd->add_option("--prob-mode", prob_mode, "Detector probabilities: table5 or exact")
                       ->check(CLI::IsMember({"table5", "exact"}));
        seed_opt = cmd->add_option("--seed", seed, "Base seed for simulation campaigns");
        format_opt = cmd->add_option("--format", format, "Output format: csv or json")
                         ->check(CLI::IsMember({"csv", "json"}));
    }

    CampaignSpec build_spec(CampaignKind kind) const {
        CampaignSpec spec;
        if (!config.empty()) spec = srn::load_config(config);
        spec.kind = kind;
        if (*out_opt) spec.out_dir = out;
        if (*lmax_opt) spec.lc.latency_max_ms = lmax;
        if (*prob_opt)
            spec.prob_mode = prob_mode == "exact" ? srn::ProbMode::FullPrecision
                                                  : srn::ProbMode::Table5Rounded;
        if (*seed_opt) spec.sim.seed = seed;
        if (*format_opt)
            spec.format = format == "json" ? srn::OutputFormat::Json : srn::OutputFormat::Csv;
        return spec;
    }
};

void print_result(const srn::ScenarioResult& r, bool as_json) {
    if (as_json) {
        nlohmann::json j{{"detector", r.detector},
                         {"interval_s", r.interval_s},
                         {"svlat_ms", r.svlat_ms},
                         {"svcost_replicas", r.svcost_replicas},
                         {"lc", r.lc_score},
                         {"tangible_states", r.tangible_states},
                         {"residual", r.residual},
                         {"lambda_a", r.anomaly_rate},
                         {"lambda_f", r.failure_rate}};
        if (!r.error.empty()) j["error"] = r.error;
        std::cout << j.dump(2) << "\n";
        return;
    }
    if (!r.error.empty()) {
        std::cout << r.detector << ": ERROR " << r.error << "\n";
        return;
    }
    char interval[32] = "";
    if (std::isfinite(r.interval_s)) std::snprintf(interval, sizeof(interval), "interval=%gs  ", r.interval_s);
    std::printf("%-10s %ssvlat=%s ms  svcost=%s replicas  lc=%s  (states=%zu, residual=%.3g)\n",
                r.detector.c_str(), interval, srn::format_number(r.svlat_ms).c_str(),
                srn::format_number(r.svcost_replicas).c_str(),
                srn::format_number(r.lc_score).c_str(), r.tangible_states, r.residual);
}

int finish(const srn::CampaignOutcome& outcome) {
    for (const auto& path : outcome.files_written)
        std::cout << "wrote " << path.string() << "\n";
    return outcome.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic reward net analysis of a cloud service with a performance anomaly detector"};
    app.require_subcommand(1);

    CommonFlags solve_flags, campaign_flags, sensitivity_flags, baseline_flags, cross_flags,
        dump_flags;

    auto* solve = app.add_subcommand("solve", "Solve a single (detector, interval) point");
    std::string solve_detector = "Superior";
    double solve_interval = 1.0;
    solve->add_option("--detector", solve_detector, "Detector name (catalog or config-defined)");
    solve->add_option("--interval", solve_interval, "Inspection interval in seconds")
        ->check(CLI::PositiveNumber);
    solve_flags.attach(solve);

    auto* campaign = app.add_subcommand("campaign", "Run a sweep campaign and emit plot data");
    std::string kind_name;
    campaign->add_option("--kind", kind_name, "Campaign kind")
        ->required()
        ->check(CLI::IsMember({"latency-cost-vs-interval", "lc-score-vs-interval",
                               "lc-vs-anomaly-rate", "lc-vs-time-to-crash", "baseline"}));
    campaign_flags.attach(campaign);

    auto* sensitivity =
        app.add_subcommand("sensitivity", "Anomaly-rate and time-to-crash sensitivity sweeps");
    std::string sens_param = "all";
    bool recompute_cmin = false;
    sensitivity->add_option("--param", sens_param, "Which parameter to sweep")
        ->check(CLI::IsMember({"anomaly-rate", "time-to-crash", "all"}));
    sensitivity->add_flag("--recompute-cmin", recompute_cmin,
                          "Recompute c_min from each swept anomaly rate instead of freezing it");
    sensitivity_flags.attach(sensitivity);

    auto* baseline = app.add_subcommand("baseline", "Solve the no-detection baseline model");
    baseline_flags.attach(baseline);

    auto* cross = app.add_subcommand("cross-check",
                                     "Compare the analytical solution against Monte Carlo simulation");
    double tolerance = 0.02;
    double horizon = 1e4;
    int replications = 10;
    cross->add_option("--tolerance", tolerance, "Relative tolerance per reward")
        ->check(CLI::PositiveNumber);
    cross->add_option("--horizon", horizon, "Simulated hours per replication")
        ->check(CLI::PositiveNumber);
    cross->add_option("--replications", replications, "Independent replications per scenario")
        ->check(CLI::PositiveNumber);
    cross_flags.attach(cross);

    auto* dump = app.add_subcommand("dump-statespace", "Print the reachability graph edge list");
    std::string dump_detector = "Superior";
    double dump_interval = 1.0;
    bool dump_baseline = false;
    dump->add_option("--detector", dump_detector, "Detector name");
    dump->add_option("--interval", dump_interval, "Inspection interval in seconds")
        ->check(CLI::PositiveNumber);
    dump->add_flag("--baseline", dump_baseline, "Dump the no-detection baseline instead");
    dump_flags.attach(dump);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) {
            CampaignSpec spec = solve_flags.build_spec(CampaignKind::SinglePoint);
            spec.detectors = {solve_detector};
            spec.fixed_interval_s = solve_interval;
            auto outcome = srn::run_campaign(spec, std::cerr);
            print_result(outcome.results.front(), spec.format == srn::OutputFormat::Json);
            return outcome.ok ? 0 : 1;
        }
        if (*campaign) {
            CampaignKind kind = CampaignKind::LatencyCostVsInterval;
            if (kind_name == "lc-score-vs-interval") kind = CampaignKind::LcScoreVsInterval;
            if (kind_name == "lc-vs-anomaly-rate") kind = CampaignKind::LcVsAnomalyRate;
            if (kind_name == "lc-vs-time-to-crash") kind = CampaignKind::LcVsTimeToCrash;
            if (kind_name == "baseline") kind = CampaignKind::Baseline;
            CampaignSpec spec = campaign_flags.build_spec(kind);
            return finish(srn::run_campaign(spec, std::cerr));
        }
        if (*sensitivity) {
            int status = 0;
            if (sens_param == "anomaly-rate" || sens_param == "all") {
                CampaignSpec spec = sensitivity_flags.build_spec(CampaignKind::LcVsAnomalyRate);
                spec.recompute_c_min = recompute_cmin;
                status |= finish(srn::run_campaign(spec, std::cerr));
            }
            if (sens_param == "time-to-crash" || sens_param == "all") {
                CampaignSpec spec = sensitivity_flags.build_spec(CampaignKind::LcVsTimeToCrash);
                status |= finish(srn::run_campaign(spec, std::cerr));
            }
            return status;
        }
        if (*baseline) {
            CampaignSpec spec = baseline_flags.build_spec(CampaignKind::Baseline);
            auto outcome = srn::run_campaign(spec, std::cerr);
            print_result(outcome.results.front(), false);
            return finish(outcome);
        }
        if (*cross) {
            CampaignSpec spec = cross_flags.build_spec(CampaignKind::CrossCheck);
            spec.tolerance = tolerance;
            spec.sim.horizon_hours = horizon;
            spec.sim.replications = replications;
            auto outcome = srn::run_campaign(spec, std::cout);
            for (const auto& row : outcome.cross_checks)
                std::printf("%-16s %-7s analytical=%-12s simulated=%-12s rel_err=%.3e %s\n",
                            row.scenario.c_str(), row.entry.reward.c_str(),
                            srn::format_number(row.entry.analytical).c_str(),
                            srn::format_number(row.entry.simulated).c_str(), row.entry.rel_error,
                            row.entry.pass ? "pass" : "FAIL");
            return finish(outcome);
        }
        if (*dump) {
            CampaignSpec spec = dump_flags.build_spec(CampaignKind::SinglePoint);
            srn::SrnModel model = [&] {
                if (dump_baseline) return srn::build_baseline_model(spec.service);
                srn::ServiceParams params = spec.service;
                params.inspection_rate = srn::interval_to_rate(dump_interval);
                auto detector =
                    srn::catalog_detector(dump_detector, spec.prob_mode, spec.anomaly_fraction);
                if (!detector) {
                    auto custom = spec.custom_detectors.find(dump_detector);
                    if (custom == spec.custom_detectors.end())
                        throw srn::RangeViolation("unknown detector " + dump_detector);
                    detector = custom->second;
                }
                return srn::build_monitored_model(params, *detector);
            }();
            auto graph = srn::explore(model);
            std::cout << srn::dump_edges(model, graph);
            std::cerr << graph.state_count() << " states ("
                      << graph.count(srn::StateKind::Tangible) << " tangible, "
                      << graph.count(srn::StateKind::Vanishing) << " vanishing)\n";
            return 0;
        }
    } catch (const srn::ParseError& e) {
        std::cerr << "config error at line " << e.line() << ", column " << e.column() << ": "
                  << e.what() << "\n";
        return 2;
    } catch (const srn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
