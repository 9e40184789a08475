#include "srn/metrics.hpp"

#include <array>
#include <cmath>
#include <optional>

namespace srn {

namespace {

double class_probability(const StationaryDistribution& pi, const Ctmc& ctmc,
                         const SrnModel& model, std::initializer_list<const char*> names) {
    std::vector<PlaceId> ids;
    for (const char* name : names)
        if (auto p = model.find_place(name)) ids.push_back(*p);
    return state_probability(pi, ctmc, [&](const Marking& m) {
        for (PlaceId p : ids)
            if (m[p] > 0) return true;
        return false;
    });
}

}  // namespace

double svlat(const StationaryDistribution& pi, const Ctmc& ctmc, const SrnModel& model,
             const ServiceParams& params) {
    double p_anom = class_probability(pi, ctmc, model,
                                      {places::kAnom, places::kInspec, places::kInfer, places::kTp});
    double p_down = class_probability(pi, ctmc, model, {places::kDown});
    double p_norm = class_probability(
        pi, ctmc, model,
        {places::kNorm, places::kInspec2, places::kInfer2, places::kFp, places::kScaledOut});
    return p_norm * params.latency_normal_ms + p_anom * params.latency_anomalous_ms +
           p_down * params.latency_down_ms;
}

double svcost(const StationaryDistribution& pi, const Ctmc& ctmc, const SrnModel& model,
              const ServiceParams& params) {
    double p_scaled = class_probability(pi, ctmc, model, {places::kScaledOut});
    return (1.0 - p_scaled) * params.replicas_default + p_scaled * params.replicas_scaled_out;
}

double minmax_norm(double x, double min, double max) {
    if (!(min < max))
        throw DegenerateRange("min-max normalization needs min < max");
    return (x - min) / (max - min);
}

double c_min_of(double anomaly_rate, double down_scale_rate) {
    return anomaly_rate / down_scale_rate + 1.0;
}

double lc_score(double latency_ms, double cost_replicas, const LcConfig& config) {
    if (!(config.weight_latency >= 0.0 && config.weight_cost >= 0.0))
        throw OutOfRange("latency-cost weights must be nonnegative");
    double weight_sum = config.weight_latency + config.weight_cost;
    if (!(weight_sum > 0.0))
        throw OutOfRange("latency-cost weights must not both be zero");
    double l_norm = minmax_norm(latency_ms, config.latency_min_ms, config.latency_max_ms);
    double c_norm = minmax_norm(cost_replicas, config.cost_min, config.cost_max);
    return (config.weight_latency * l_norm + config.weight_cost * c_norm) / weight_sum;
}

}  // namespace srn
