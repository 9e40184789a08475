#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "srn/campaign.hpp"
#include "srn/cloud_model.hpp"
#include "srn/metrics.hpp"
#include "srn/simulator.hpp"
#include "srn/solver.hpp"
#include "srn/statespace.hpp"

namespace py = pybind11;

namespace {

py::dict analyze(const srn::SrnModel& model) {
    auto graph = srn::explore(model);
    auto ctmc = srn::eliminate_vanishing(graph);
    auto pi = srn::steady_state(ctmc);
    py::dict rewards;
    for (const auto& [name, fn] : model.rewards())
        rewards[py::str(name)] =
            srn::expected_reward(pi, srn::reward_vector(model, ctmc, name));
    py::dict out;
    out["rewards"] = rewards;
    out["tangible_states"] = ctmc.state_count();
    out["vanishing_states"] = graph.count(srn::StateKind::Vanishing);
    out["residual"] = pi.residual_inf_norm;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Stochastic reward net analysis of a cloud service monitored by an anomaly detector";

    py::register_exception<srn::Error>(m, "SrnError");

    py::class_<srn::ServiceParams>(m, "ServiceParams")
        .def(py::init<>())
        .def_readwrite("anomaly_rate", &srn::ServiceParams::anomaly_rate)
        .def_readwrite("failure_rate", &srn::ServiceParams::failure_rate)
        .def_readwrite("recovery_rate", &srn::ServiceParams::recovery_rate)
        .def_readwrite("inspection_rate", &srn::ServiceParams::inspection_rate)
        .def_readwrite("inference_rate", &srn::ServiceParams::inference_rate)
        .def_readwrite("scale_out_rate", &srn::ServiceParams::scale_out_rate)
        .def_readwrite("down_scale_rate", &srn::ServiceParams::down_scale_rate)
        .def_readwrite("latency_normal_ms", &srn::ServiceParams::latency_normal_ms)
        .def_readwrite("latency_anomalous_ms", &srn::ServiceParams::latency_anomalous_ms)
        .def_readwrite("latency_down_ms", &srn::ServiceParams::latency_down_ms)
        .def_readwrite("replicas_default", &srn::ServiceParams::replicas_default)
        .def_readwrite("replicas_scaled_out", &srn::ServiceParams::replicas_scaled_out);

    py::class_<srn::DetectorProfile>(m, "DetectorProfile")
        .def(py::init<>())
        .def_readwrite("name", &srn::DetectorProfile::name)
        .def_readwrite("recall", &srn::DetectorProfile::recall)
        .def_readwrite("precision", &srn::DetectorProfile::precision)
        .def_readwrite("anomaly_fraction", &srn::DetectorProfile::anomaly_fraction)
        .def_readwrite("p_tp", &srn::DetectorProfile::p_tp)
        .def_readwrite("p_fp", &srn::DetectorProfile::p_fp)
        .def_property_readonly("p_tn", &srn::DetectorProfile::p_tn)
        .def_property_readonly("p_fn", &srn::DetectorProfile::p_fn);

    py::enum_<srn::ProbMode>(m, "ProbMode")
        .value("TABLE5", srn::ProbMode::Table5Rounded)
        .value("EXACT", srn::ProbMode::FullPrecision);

    py::class_<srn::SrnModel>(m, "SrnModel")
        .def_property_readonly("place_count", &srn::SrnModel::place_count)
        .def_property_readonly("transition_count", &srn::SrnModel::transition_count)
        .def("reward_names", [](const srn::SrnModel& model) {
            std::vector<std::string> names;
            for (const auto& [name, fn] : model.rewards()) names.push_back(name);
            return names;
        });

    py::class_<srn::LcConfig>(m, "LcConfig")
        .def(py::init<>())
        .def_readwrite("weight_latency", &srn::LcConfig::weight_latency)
        .def_readwrite("weight_cost", &srn::LcConfig::weight_cost)
        .def_readwrite("latency_min_ms", &srn::LcConfig::latency_min_ms)
        .def_readwrite("latency_max_ms", &srn::LcConfig::latency_max_ms)
        .def_readwrite("cost_min", &srn::LcConfig::cost_min)
        .def_readwrite("cost_max", &srn::LcConfig::cost_max);

    py::class_<srn::SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("horizon_hours", &srn::SimConfig::horizon_hours)
        .def_readwrite("replications", &srn::SimConfig::replications)
        .def_readwrite("seed", &srn::SimConfig::seed)
        .def_readwrite("warmup_fraction", &srn::SimConfig::warmup_fraction)
        .def_readwrite("max_total_events", &srn::SimConfig::max_total_events)
        .def_readwrite("threads", &srn::SimConfig::threads);

    m.def("detector_probs", &srn::detector_probs, py::arg("recall"), py::arg("precision"),
          py::arg("anomaly_fraction"),
          "Invert the precision/recall relations into (p_tp, p_fp)");
    m.def("precision_of", &srn::precision_of, py::arg("p_tp"), py::arg("p_fp"),
          py::arg("anomaly_fraction"));
    m.def("recall_of", &srn::recall_of, py::arg("p_tp"));
    m.def("make_detector", &srn::make_detector, py::arg("name"), py::arg("recall"),
          py::arg("precision"), py::arg("anomaly_fraction") = 0.04);
    m.def("catalog_detector", &srn::catalog_detector, py::arg("name"),
          py::arg("mode") = srn::ProbMode::Table5Rounded, py::arg("anomaly_fraction") = 0.04);
    m.def("detector_names", [] {
        std::vector<std::string> names;
        for (const auto& e : srn::detector_catalog()) names.emplace_back(e.name);
        return names;
    });

    m.def("interval_to_rate", &srn::interval_to_rate, py::arg("seconds"));
    m.def("rate_to_interval", &srn::rate_to_interval, py::arg("rate_per_hour"));

    m.def("build_monitored_model", &srn::build_monitored_model, py::arg("params"),
          py::arg("detector"));
    m.def("build_baseline_model", &srn::build_baseline_model, py::arg("params"));

    m.def("analyze", &analyze, py::arg("model"),
          "Solve the model to steady state and return expected rewards plus solve metadata");

    m.def("minmax_norm", &srn::minmax_norm, py::arg("x"), py::arg("min"), py::arg("max"));
    m.def("c_min_of", &srn::c_min_of, py::arg("anomaly_rate"), py::arg("down_scale_rate"));
    m.def("lc_score", &srn::lc_score, py::arg("latency_ms"), py::arg("cost_replicas"),
          py::arg("config"));

    m.def(
        "simulate",
        [](const srn::SrnModel& model, const srn::SimConfig& config) {
            srn::SimEstimate est = srn::simulate(model, config);
            py::dict out;
            out["mean"] = est.mean;
            out["std_error"] = est.std_error;
            out["total_events"] = est.total_events;
            return out;
        },
        py::arg("model"), py::arg("config"));

    m.def(
        "cross_check",
        [](const srn::SrnModel& model, const srn::SimConfig& config, double tolerance) {
            srn::CrossCheckReport report = srn::cross_check(model, config, tolerance);
            py::list entries;
            for (const auto& e : report.entries) {
                py::dict entry;
                entry["reward"] = e.reward;
                entry["analytical"] = e.analytical;
                entry["simulated"] = e.simulated;
                entry["rel_error"] = e.rel_error;
                entry["pass"] = e.pass;
                entries.append(entry);
            }
            py::dict out;
            out["entries"] = entries;
            out["max_rel_error"] = report.max_rel_error;
            out["all_pass"] = report.all_pass;
            return out;
        },
        py::arg("model"), py::arg("config"), py::arg("tolerance"));
}
