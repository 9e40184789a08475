#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "srn/model.hpp"

namespace srn {

/// Canonical place names of the monitored-service net. The no-detection
/// baseline uses the subset {P_norm, P_anom, P_down, P_scaledout}.
namespace places {
inline constexpr const char* kNorm = "P_norm";
inline constexpr const char* kAnom = "P_anom";
inline constexpr const char* kInspec = "P_inspec";
inline constexpr const char* kInspec2 = "P_inspec2";
inline constexpr const char* kInfer = "P_infer";
inline constexpr const char* kInfer2 = "P_infer2";
inline constexpr const char* kTp = "P_tp";
inline constexpr const char* kFp = "P_fp";
inline constexpr const char* kScaledOut = "P_scaledout";
inline constexpr const char* kDown = "P_down";
}  // namespace places

inline constexpr const char* kSvlat = "svlat";
inline constexpr const char* kSvcost = "svcost";

/// Service and detector timing parameters. Rates are events per hour,
/// latencies milliseconds, replica counts dimensionless.
struct ServiceParams {
    double anomaly_rate = 6.0;          // lambda_a
    double failure_rate = 60.0;         // lambda_f
    double recovery_rate = 72.0;        // mu
    double inspection_rate = 3600.0;    // delta (1 s interval)
    double inference_rate = 36000.0;    // sigma (0.1 s inference)
    double scale_out_rate = 360.0;      // gamma_1
    double down_scale_rate = 60.0;      // gamma_2
    double latency_normal_ms = 50.0;    // l_n
    double latency_anomalous_ms = 100.0;  // l_a
    double latency_down_ms = 25000.0;   // l_d
    double replicas_default = 1.0;      // r_def
    double replicas_scaled_out = 2.0;   // r_out

    /// Throws RangeViolation if any invariant is broken (rates > 0,
    /// l_n <= l_a <= l_d, r_def < r_out).
    void check() const;
};

/// A detector characterized by recall/precision and the detection
/// probabilities used as immediate weights in the net.
struct DetectorProfile {
    std::string name;
    double recall = 0.0;
    double precision = 0.0;
    double anomaly_fraction = 0.04;  // A
    double p_tp = 0.0;
    double p_fp = 0.0;

    double p_tn() const { return 1.0 - p_fp; }
    double p_fn() const { return 1.0 - p_tp; }
};

/// How catalog detectors map their metrics onto probabilities: the rounded
/// published values, or the full-precision inversion of the precision/recall
/// formulas.
enum class ProbMode { Table5Rounded, FullPrecision };

/// Inverts the precision/recall formulas: p_tp = recall and
/// p_fp = A*p_tp*(1-precision) / ((1-A)*precision).
/// Throws OutOfRange on arguments outside (0,1] / (0,1) or when the implied
/// p_fp exceeds 1.
std::pair<double, double> detector_probs(double recall, double precision, double anomaly_fraction);

/// precision = A*p_tp / (A*p_tp + (1-A)*p_fp). Throws DivisionByZero when the
/// denominator vanishes.
double precision_of(double p_tp, double p_fp, double anomaly_fraction);
double recall_of(double p_tp);

/// Builds a named profile from recall/precision via detector_probs.
DetectorProfile make_detector(const std::string& name, double recall, double precision,
                              double anomaly_fraction = 0.04);

struct CatalogEntry {
    const char* name;
    double recall;
    double precision;
    double table5_p_tp;
    double table5_p_fp;
};

/// The seven published detectors, in canonical column order.
const std::array<CatalogEntry, 7>& detector_catalog();

/// Catalog lookup; probabilities per the requested mode. Returns nullopt for
/// names not in the catalog.
std::optional<DetectorProfile> catalog_detector(const std::string& name,
                                                ProbMode mode = ProbMode::Table5Rounded,
                                                double anomaly_fraction = 0.04);

/// The full monitored-service net: 10 places, 11 timed and 4 immediate
/// transitions, initial token in P_norm, svlat/svcost rewards registered.
/// Throws on parameter or validation violations.
SrnModel build_monitored_model(const ServiceParams& params, const DetectorProfile& detector);

/// The no-detection baseline: the 4-place cycle
/// P_norm -> P_anom -> P_down -> P_scaledout -> P_norm with the same rewards.
SrnModel build_baseline_model(const ServiceParams& params);

/// rate = 3600 / seconds and its exact inverse. Throws OutOfRange on
/// nonpositive input.
double interval_to_rate(double seconds);
double rate_to_interval(double rate_per_hour);

}  // namespace srn
