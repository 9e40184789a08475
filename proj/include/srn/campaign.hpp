#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "srn/cloud_model.hpp"
#include "srn/metrics.hpp"
#include "srn/simulator.hpp"

namespace srn {

enum class CampaignKind {
    LatencyCostVsInterval,  // svlat and svcost per detector per inspection interval
    LcScoreVsInterval,      // latency-cost score per detector per inspection interval
    LcVsAnomalyRate,        // score sensitivity to the anomaly rate, fixed interval
    LcVsTimeToCrash,        // score sensitivity to the mean time to crash, fixed interval
    Baseline,               // no-detection model, single point
    SinglePoint,            // one detector, one interval
    CrossCheck,             // simulator vs analytical on the full grid
};

enum class OutputFormat { Csv, Json };

struct CampaignSpec {
    CampaignKind kind = CampaignKind::LatencyCostVsInterval;
    std::vector<std::string> detectors;  // empty = full catalog
    std::map<std::string, DetectorProfile> custom_detectors;
    std::vector<double> intervals_s = {0.5, 1.0, 5.0, 10.0};
    std::vector<double> anomaly_rates = {1.0, 3.0, 6.0, 12.0};
    std::vector<double> times_to_crash_s = {15.0, 30.0, 60.0, 120.0};
    double fixed_interval_s = 1.0;  // used by the sensitivity sweeps
    double anomaly_fraction = 0.04;  // A, used when deriving catalog probabilities
    ServiceParams service;
    LcConfig lc;
    bool lc_explicit_c_min = false;   // config pinned c_min; never recompute
    bool recompute_c_min = false;     // recompute c_min per swept anomaly rate
    ProbMode prob_mode = ProbMode::Table5Rounded;
    std::filesystem::path out_dir = ".";
    OutputFormat format = OutputFormat::Csv;
    SimConfig sim;
    double tolerance = 0.02;

    /// Detector column order: catalog detectors first (canonical order), then
    /// customs in definition order.
    std::vector<std::string> detector_columns() const;
};

struct CrossCheckRow {
    std::string scenario;  // e.g. "Superior@1s" or "baseline"
    CrossCheckEntry entry;
};

struct CampaignOutcome {
    std::vector<ScenarioResult> results;
    std::vector<CrossCheckRow> cross_checks;  // cross-check campaigns only
    std::vector<std::filesystem::path> files_written;
    bool ok = true;
};

/// Solves one (service params, detector, inspection interval) point.
ScenarioResult solve_scenario(const ServiceParams& params, const DetectorProfile& detector,
                              double interval_s, const LcConfig& lc);

/// Runs the campaign, writes plot data under spec.out_dir and returns every
/// scenario in deterministic order (detectors in column order, sweep
/// ascending). Per-scenario failures are recorded, not thrown.
CampaignOutcome run_campaign(const CampaignSpec& spec, std::ostream& log);

/// Parses the flat INI-style configuration (sections: service, detectors, lc,
/// campaign). Unknown sections or keys are hard errors.
CampaignSpec load_config(const std::filesystem::path& path);
CampaignSpec parse_config(const std::string& text, const std::string& origin = "<config>");

/// Number formatting used in every CSV cell: six significant digits, plain
/// positional notation for magnitudes below 1e6.
std::string format_number(double value);

}  // namespace srn
