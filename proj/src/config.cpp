#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "srn/campaign.hpp"

namespace srn {

namespace {

struct RawDetector {
    std::optional<double> recall;
    std::optional<double> precision;
    std::optional<double> anomaly_fraction;
    int line = 0;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view value, int line, int column) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ParseError("expected a number, got '" + std::string(value) + "'", line, column);
    return out;
}

std::uint64_t parse_u64(std::string_view value, int line, int column) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ParseError("expected an unsigned integer, got '" + std::string(value) + "'", line,
                         column);
    return out;
}

bool parse_bool(std::string_view value, int line, int column) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ParseError("expected true/false, got '" + std::string(value) + "'", line, column);
}

std::vector<double> parse_list(std::string_view value, int line, int column) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        std::size_t comma = value.find(',', start);
        std::string_view item = trim(value.substr(
            start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!item.empty()) out.push_back(parse_double(item, line, column));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw ParseError("expected a comma-separated number list", line, column);
    return out;
}

std::vector<std::string> parse_names(std::string_view value) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        std::size_t comma = value.find(',', start);
        std::string_view item = trim(value.substr(
            start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!item.empty()) out.emplace_back(item);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

CampaignKind parse_kind(std::string_view value, int line, int column) {
    if (value == "latency-cost-vs-interval") return CampaignKind::LatencyCostVsInterval;
    if (value == "lc-score-vs-interval") return CampaignKind::LcScoreVsInterval;
    if (value == "lc-vs-anomaly-rate") return CampaignKind::LcVsAnomalyRate;
    if (value == "lc-vs-time-to-crash") return CampaignKind::LcVsTimeToCrash;
    if (value == "baseline") return CampaignKind::Baseline;
    if (value == "single-point") return CampaignKind::SinglePoint;
    if (value == "cross-check") return CampaignKind::CrossCheck;
    throw ParseError("unknown campaign kind '" + std::string(value) + "'", line, column);
}

void positive_or_throw(double v, const std::string& key) {
    if (!(v > 0.0)) throw RangeViolation(key + " must be positive");
}

}  // namespace

CampaignSpec parse_config(const std::string& text, const std::string& origin) {
    CampaignSpec spec;
    bool kind_set = false;
    std::map<std::string, RawDetector> raw_detectors;
    std::vector<std::string> custom_order;

    std::istringstream in(text);
    std::string raw_line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw_line)) {
        ++line_no;
        std::string_view line = trim(raw_line);
        if (!line.empty()) {
            std::size_t hash = line.find('#');
            if (hash != std::string_view::npos) line = trim(line.substr(0, hash));
        }
        if (line.empty() || line.front() == ';') continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("unterminated section header", line_no,
                                 static_cast<int>(line.size()));
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "service" && section != "detectors" && section != "lc" &&
                section != "campaign")
                throw UnknownKey(origin + ":" + std::to_string(line_no) + ": unknown section [" +
                                 section + "]");
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("expected 'key = value'", line_no, 1);
        std::string key(trim(line.substr(0, eq)));
        std::string_view value = trim(line.substr(eq + 1));
        int vcol = static_cast<int>(eq + 2);
        if (key.empty()) throw ParseError("empty key", line_no, 1);
        if (value.empty()) throw ParseError("empty value for key '" + key + "'", line_no, vcol);
        if (section.empty())
            throw ParseError("key '" + key + "' appears before any [section]", line_no, 1);

        auto unknown = [&]() -> UnknownKey {
            return UnknownKey(origin + ":" + std::to_string(line_no) + ": unknown key '" + key +
                              "' in section [" + section + "]");
        };

        if (section == "service") {
            double v = parse_double(value, line_no, vcol);
            if (key == "lambda_a") {
                positive_or_throw(v, key);
                spec.service.anomaly_rate = v;
            } else if (key == "lambda_f") {
                positive_or_throw(v, key);
                spec.service.failure_rate = v;
            } else if (key == "mu") {
                positive_or_throw(v, key);
                spec.service.recovery_rate = v;
            } else if (key == "sigma") {
                positive_or_throw(v, key);
                spec.service.inference_rate = v;
            } else if (key == "gamma1") {
                positive_or_throw(v, key);
                spec.service.scale_out_rate = v;
            } else if (key == "gamma2") {
                positive_or_throw(v, key);
                spec.service.down_scale_rate = v;
            } else if (key == "l_n") {
                positive_or_throw(v, key);
                spec.service.latency_normal_ms = v;
            } else if (key == "l_a") {
                positive_or_throw(v, key);
                spec.service.latency_anomalous_ms = v;
            } else if (key == "l_d") {
                positive_or_throw(v, key);
                spec.service.latency_down_ms = v;
            } else if (key == "r_def") {
                positive_or_throw(v, key);
                spec.service.replicas_default = v;
            } else if (key == "r_out") {
                positive_or_throw(v, key);
                spec.service.replicas_scaled_out = v;
            } else {
                throw unknown();
            }
        } else if (section == "detectors") {
            if (key == "use") {
                spec.detectors = parse_names(value);
                if (spec.detectors.empty())
                    throw RangeViolation("detectors.use must name at least one detector");
            } else if (key == "anomaly_fraction") {
                double v = parse_double(value, line_no, vcol);
                if (!(v > 0.0 && v < 1.0))
                    throw RangeViolation("detectors.anomaly_fraction must be in (0,1)");
                spec.anomaly_fraction = v;
            } else if (std::size_t dot = key.find('.'); dot != std::string::npos) {
                std::string name = key.substr(0, dot);
                std::string field = key.substr(dot + 1);
                if (name.empty()) throw ParseError("empty detector name", line_no, 1);
                auto [it, inserted] = raw_detectors.try_emplace(name);
                if (inserted) {
                    it->second.line = line_no;
                    custom_order.push_back(name);
                }
                double v = parse_double(value, line_no, vcol);
                if (field == "recall") {
                    it->second.recall = v;
                } else if (field == "precision") {
                    it->second.precision = v;
                } else if (field == "anomaly_fraction") {
                    it->second.anomaly_fraction = v;
                } else {
                    throw unknown();
                }
            } else {
                throw unknown();
            }
        } else if (section == "lc") {
            if (key == "w_l") {
                spec.lc.weight_latency = parse_double(value, line_no, vcol);
            } else if (key == "w_c") {
                spec.lc.weight_cost = parse_double(value, line_no, vcol);
            } else if (key == "l_min") {
                spec.lc.latency_min_ms = parse_double(value, line_no, vcol);
            } else if (key == "l_max") {
                spec.lc.latency_max_ms = parse_double(value, line_no, vcol);
            } else if (key == "c_min") {
                if (value == "auto") {
                    spec.lc_explicit_c_min = false;
                } else {
                    spec.lc.cost_min = parse_double(value, line_no, vcol);
                    spec.lc_explicit_c_min = true;
                }
            } else if (key == "c_max") {
                spec.lc.cost_max = parse_double(value, line_no, vcol);
            } else if (key == "freeze_c_min") {
                spec.recompute_c_min = !parse_bool(value, line_no, vcol);
            } else {
                throw unknown();
            }
        } else {  // campaign
            if (key == "kind") {
                spec.kind = parse_kind(value, line_no, vcol);
                kind_set = true;
            } else if (key == "intervals") {
                spec.intervals_s = parse_list(value, line_no, vcol);
            } else if (key == "anomaly_rates") {
                spec.anomaly_rates = parse_list(value, line_no, vcol);
            } else if (key == "times_to_crash") {
                spec.times_to_crash_s = parse_list(value, line_no, vcol);
            } else if (key == "fixed_interval") {
                spec.fixed_interval_s = parse_double(value, line_no, vcol);
                positive_or_throw(spec.fixed_interval_s, key);
            } else if (key == "prob_mode") {
                if (value == "table5") {
                    spec.prob_mode = ProbMode::Table5Rounded;
                } else if (value == "exact") {
                    spec.prob_mode = ProbMode::FullPrecision;
                } else {
                    throw ParseError("prob_mode must be table5 or exact", line_no, vcol);
                }
            } else if (key == "out") {
                spec.out_dir = std::string(value);
            } else if (key == "format") {
                if (value == "csv") {
                    spec.format = OutputFormat::Csv;
                } else if (value == "json") {
                    spec.format = OutputFormat::Json;
                } else {
                    throw ParseError("format must be csv or json", line_no, vcol);
                }
            } else if (key == "seed") {
                spec.sim.seed = parse_u64(value, line_no, vcol);
            } else if (key == "horizon") {
                spec.sim.horizon_hours = parse_double(value, line_no, vcol);
                positive_or_throw(spec.sim.horizon_hours, key);
            } else if (key == "replications") {
                auto reps = parse_u64(value, line_no, vcol);
                if (reps == 0 || reps > 1'000'000) throw RangeViolation("replications out of range");
                spec.sim.replications = static_cast<int>(reps);
            } else if (key == "warmup") {
                spec.sim.warmup_fraction = parse_double(value, line_no, vcol);
                if (!(spec.sim.warmup_fraction >= 0.0 && spec.sim.warmup_fraction < 1.0))
                    throw RangeViolation("warmup must be in [0,1)");
            } else if (key == "max_events") {
                spec.sim.max_total_events = parse_u64(value, line_no, vcol);
            } else if (key == "tolerance") {
                spec.tolerance = parse_double(value, line_no, vcol);
                positive_or_throw(spec.tolerance, key);
            } else {
                throw unknown();
            }
        }
    }

    if (!kind_set) throw RangeViolation("campaign.kind required");

    for (const std::string& name : custom_order) {
        const RawDetector& raw = raw_detectors.at(name);
        if (!raw.recall || !raw.precision)
            throw RangeViolation("detector " + name + " needs both recall and precision");
        double fraction = raw.anomaly_fraction.value_or(spec.anomaly_fraction);
        spec.custom_detectors.emplace(name, make_detector(name, *raw.recall, *raw.precision,
                                                          fraction));
    }
    for (const std::string& name : spec.detectors) {
        if (!spec.custom_detectors.contains(name) &&
            !catalog_detector(name, ProbMode::Table5Rounded))
            throw RangeViolation("detectors.use references unknown detector " + name);
    }

    spec.service.check();
    if (!(spec.lc.latency_min_ms < spec.lc.latency_max_ms))
        throw RangeViolation("lc bands must satisfy l_min < l_max");
    if (spec.lc_explicit_c_min && !(spec.lc.cost_min < spec.lc.cost_max))
        throw RangeViolation("lc bands must satisfy c_min < c_max");
    if (!(spec.lc.weight_latency >= 0.0 && spec.lc.weight_cost >= 0.0 &&
          spec.lc.weight_latency + spec.lc.weight_cost > 0.0))
        throw RangeViolation("lc weights must be nonnegative and not both zero");
    return spec;
}

CampaignSpec load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.string());
}

}  // namespace srn
