#pragma once

#include <string>

#include "srn/cloud_model.hpp"
#include "srn/solver.hpp"
#include "srn/statespace.hpp"

namespace srn {

/// Weights and normalization bands for the latency-cost score.
struct LcConfig {
    double weight_latency = 1.0;   // w_l
    double weight_cost = 1.0;      // w_c
    double latency_min_ms = 50.0;  // l_min
    double latency_max_ms = 500.0;  // l_max
    double cost_min = 1.1;          // c_min
    double cost_max = 2.0;          // c_max
};

/// One solved scenario: a (detector, parameter-set) point of a sweep.
struct ScenarioResult {
    std::string detector;
    double interval_s = 0.0;
    double svlat_ms = 0.0;
    double svcost_replicas = 0.0;
    double lc_score = 0.0;
    std::size_t tangible_states = 0;
    double residual = 0.0;
    double anomaly_rate = 0.0;
    double failure_rate = 0.0;
    std::string error;  // empty = solved
};

/// Average latency (ms): p(Normal)*l_n + p(Anomalous)*l_a + p(Down)*l_d with
/// the state classes given by place membership (Normal = P_norm, P_inspec2,
/// P_infer2, P_fp, P_scaledout; Anomalous = P_anom, P_inspec, P_infer, P_tp;
/// Down = P_down).
double svlat(const StationaryDistribution& pi, const Ctmc& ctmc, const SrnModel& model,
             const ServiceParams& params);

/// Resource consumption (replicas): p(Default)*r_def + p(ScaledOut)*r_out.
double svcost(const StationaryDistribution& pi, const Ctmc& ctmc, const SrnModel& model,
              const ServiceParams& params);

/// Linear rescale (x - min) / (max - min), deliberately unclamped.
/// Throws DegenerateRange when min >= max.
double minmax_norm(double x, double min, double max);

/// Minimum achievable resource consumption: lambda_a / gamma_2 + 1.
double c_min_of(double anomaly_rate, double down_scale_rate);

/// Latency-cost score: weighted mean of the normalized latency and cost.
/// Lower is better. Throws DegenerateRange / OutOfRange on bad config.
double lc_score(double latency_ms, double cost_replicas, const LcConfig& config);

}  // namespace srn
