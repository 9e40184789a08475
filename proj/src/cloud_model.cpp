#include "srn/cloud_model.hpp"

#include <cmath>
#include <sstream>

namespace srn {

void ServiceParams::check() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw RangeViolation(std::string(name) + " must be a positive finite rate");
    };
    positive(anomaly_rate, "lambda_a");
    positive(failure_rate, "lambda_f");
    positive(recovery_rate, "mu");
    positive(inspection_rate, "delta");
    positive(inference_rate, "sigma");
    positive(scale_out_rate, "gamma1");
    positive(down_scale_rate, "gamma2");
    if (!(latency_normal_ms <= latency_anomalous_ms && latency_anomalous_ms <= latency_down_ms))
        throw RangeViolation("latencies must satisfy l_n <= l_a <= l_d");
    if (!(replicas_default < replicas_scaled_out))
        throw RangeViolation("replica counts must satisfy r_def < r_out");
}

std::pair<double, double> detector_probs(double recall, double precision, double anomaly_fraction) {
    if (!(recall > 0.0 && recall <= 1.0))
        throw OutOfRange("recall must be in (0,1]");
    if (!(precision > 0.0 && precision <= 1.0))
        throw OutOfRange("precision must be in (0,1]");
    if (!(anomaly_fraction > 0.0 && anomaly_fraction < 1.0))
        throw OutOfRange("anomaly fraction must be in (0,1)");
    double p_tp = recall;
    double p_fp = anomaly_fraction * p_tp * (1.0 - precision) /
                  ((1.0 - anomaly_fraction) * precision);
    if (p_fp > 1.0) {
        std::ostringstream msg;
        msg << "precision " << precision << " is infeasible at anomaly fraction "
            << anomaly_fraction << " (implied p_fp = " << p_fp << ")";
        throw OutOfRange(msg.str());
    }
    return {p_tp, p_fp};
}

double precision_of(double p_tp, double p_fp, double anomaly_fraction) {
    double denom = anomaly_fraction * p_tp + (1.0 - anomaly_fraction) * p_fp;
    if (denom == 0.0)
        throw DivisionByZero("no detections: A*p_tp + (1-A)*p_fp = 0");
    return anomaly_fraction * p_tp / denom;
}

double recall_of(double p_tp) { return p_tp; }

DetectorProfile make_detector(const std::string& name, double recall, double precision,
                              double anomaly_fraction) {
    auto [p_tp, p_fp] = detector_probs(recall, precision, anomaly_fraction);
    DetectorProfile d;
    d.name = name;
    d.recall = recall;
    d.precision = precision;
    d.anomaly_fraction = anomaly_fraction;
    d.p_tp = p_tp;
    d.p_fp = p_fp;
    return d;
}

const std::array<CatalogEntry, 7>& detector_catalog() {
    static const std::array<CatalogEntry, 7> catalog = {{
        {"Superior", 0.95, 0.97, 0.95, 0.001},
        {"GreatPrec", 0.50, 0.95, 0.50, 0.001},
        {"GoodPrec", 0.50, 0.80, 0.50, 0.005},
        {"GreatRec", 0.95, 0.79, 0.95, 0.01},
        {"GoodRec", 0.70, 0.74, 0.70, 0.01},
        {"Heuristic", 0.90, 0.42, 0.90, 0.05},
        {"Random", 0.50, 0.04, 0.50, 0.5},
    }};
    return catalog;
}

std::optional<DetectorProfile> catalog_detector(const std::string& name, ProbMode mode,
                                                double anomaly_fraction) {
    for (const CatalogEntry& e : detector_catalog()) {
        if (name != e.name) continue;
        if (mode == ProbMode::FullPrecision)
            return make_detector(e.name, e.recall, e.precision, anomaly_fraction);
        DetectorProfile d;
        d.name = e.name;
        d.recall = e.recall;
        d.precision = e.precision;
        d.anomaly_fraction = anomaly_fraction;
        d.p_tp = e.table5_p_tp;
        d.p_fp = e.table5_p_fp;
        return d;
    }
    return std::nullopt;
}

namespace {

void register_rewards(ModelBuilder& builder, const ServiceParams& p) {
    auto in = [&](const char* name) -> std::optional<PlaceId> {
        try {
            return builder.place(name);
        } catch (const Error&) {
            return std::nullopt;
        }
    };
    auto anom = in(places::kAnom);
    auto inspec = in(places::kInspec);
    auto infer = in(places::kInfer);
    auto tp = in(places::kTp);
    auto down = in(places::kDown);
    auto scaled = in(places::kScaledOut);

    auto tokens = [](const Marking& m, std::optional<PlaceId> place) -> std::uint32_t {
        return place ? m[*place] : 0;
    };
    builder.add_reward(kSvlat, [=](const Marking& m) {
        if (tokens(m, anom) == 1 || tokens(m, inspec) == 1 || tokens(m, infer) == 1 ||
            tokens(m, tp) == 1)
            return p.latency_anomalous_ms;
        if (tokens(m, down) == 1) return p.latency_down_ms;
        return p.latency_normal_ms;
    });
    builder.add_reward(kSvcost, [=](const Marking& m) {
        return tokens(m, scaled) == 1 ? p.replicas_scaled_out : p.replicas_default;
    });
}

void check_built(const SrnModel& model) {
    auto violations = validate(model);
    if (violations.empty()) return;
    std::string msg = "model validation failed:";
    for (const Violation& v : violations) msg += " [" + v.code + "] " + v.message;
    throw RangeViolation(msg);
}

}  // namespace

SrnModel build_monitored_model(const ServiceParams& params, const DetectorProfile& detector) {
    params.check();
    if (!(detector.p_tp >= 0.0 && detector.p_tp <= 1.0 && detector.p_fp >= 0.0 &&
          detector.p_fp <= 1.0))
        throw RangeViolation("detector probabilities must lie in [0,1]");

    ModelBuilder b;
    b.add_place(places::kNorm, 1);
    b.add_place(places::kAnom);
    b.add_place(places::kInspec);
    b.add_place(places::kInspec2);
    b.add_place(places::kInfer);
    b.add_place(places::kInfer2);
    b.add_place(places::kTp);
    b.add_place(places::kFp);
    b.add_place(places::kScaledOut);
    b.add_place(places::kDown);

    b.add_timed("T_anom", params.anomaly_rate, {{places::kNorm, 1}}, {{places::kAnom, 1}});
    b.add_timed("T_inspec", params.inspection_rate, {{places::kAnom, 1}}, {{places::kInspec, 1}});
    b.add_timed("T_inspec2", params.inspection_rate, {{places::kNorm, 1}}, {{places::kInspec2, 1}});
    b.add_timed("T_infer", params.inference_rate, {{places::kInspec, 1}}, {{places::kInfer, 1}});
    b.add_timed("T_infer2", params.inference_rate, {{places::kInspec2, 1}}, {{places::kInfer2, 1}});
    b.add_timed("T_down", params.failure_rate, {{places::kAnom, 1}}, {{places::kDown, 1}});
    b.add_timed("T_down2", params.failure_rate, {{places::kInspec, 1}}, {{places::kDown, 1}});
    b.add_timed("T_recov", params.recovery_rate, {{places::kDown, 1}}, {{places::kScaledOut, 1}});
    b.add_timed("T_goodscale", params.scale_out_rate, {{places::kTp, 1}}, {{places::kScaledOut, 1}});
    b.add_timed("T_badscale", params.scale_out_rate, {{places::kFp, 1}}, {{places::kScaledOut, 1}});
    b.add_timed("T_downscale", params.down_scale_rate, {{places::kScaledOut, 1}},
                {{places::kNorm, 1}});

    b.add_immediate("t_tp", detector.p_tp, {{places::kInfer, 1}}, {{places::kTp, 1}});
    b.add_immediate("t_fn", detector.p_fn(), {{places::kInfer, 1}}, {{places::kAnom, 1}});
    b.add_immediate("t_tn", detector.p_tn(), {{places::kInfer2, 1}}, {{places::kNorm, 1}});
    b.add_immediate("t_fp", detector.p_fp, {{places::kInfer2, 1}}, {{places::kFp, 1}});

    register_rewards(b, params);
    b.declare_exact_probabilities();
    SrnModel model = b.build();
    check_built(model);
    return model;
}

SrnModel build_baseline_model(const ServiceParams& params) {
    params.check();
    ModelBuilder b;
    b.add_place(places::kNorm, 1);
    b.add_place(places::kAnom);
    b.add_place(places::kDown);
    b.add_place(places::kScaledOut);

    b.add_timed("T_anom", params.anomaly_rate, {{places::kNorm, 1}}, {{places::kAnom, 1}});
    b.add_timed("T_down", params.failure_rate, {{places::kAnom, 1}}, {{places::kDown, 1}});
    b.add_timed("T_recov", params.recovery_rate, {{places::kDown, 1}}, {{places::kScaledOut, 1}});
    b.add_timed("T_downscale", params.down_scale_rate, {{places::kScaledOut, 1}},
                {{places::kNorm, 1}});

    register_rewards(b, params);
    SrnModel model = b.build();
    check_built(model);
    return model;
}

double interval_to_rate(double seconds) {
    if (!(seconds > 0.0) || !std::isfinite(seconds))
        throw OutOfRange("interval must be positive");
    return 3600.0 / seconds;
}

double rate_to_interval(double rate_per_hour) {
    if (!(rate_per_hour > 0.0) || !std::isfinite(rate_per_hour))
        throw OutOfRange("rate must be positive");
    return 3600.0 / rate_per_hour;
}

}  // namespace srn
