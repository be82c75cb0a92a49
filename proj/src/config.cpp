#include "cantorwalk/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

namespace cantorwalk {

namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::optional<double> parse_number(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return value;
}

const std::set<std::string> kKnownKeys{
    "layout_kind", "generation", "L",       "theta1",  "theta2",           "steps",
    "record_every", "snapshot_times", "sweep", "outputs", "two_scatter_swap"};

nlohmann::json toml_node_to_json(const toml::node& node) {
    if (const auto* table = node.as_table()) {
        nlohmann::json out = nlohmann::json::object();
        for (const auto& [key, value] : *table) {
            out[std::string(key.str())] = toml_node_to_json(value);
        }
        return out;
    }
    if (const auto* array = node.as_array()) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& value : *array) {
            out.push_back(toml_node_to_json(value));
        }
        return out;
    }
    if (const auto* v = node.as_integer()) return v->get();
    if (const auto* v = node.as_floating_point()) return v->get();
    if (const auto* v = node.as_boolean()) return v->get();
    if (const auto* v = node.as_string()) return v->get();
    throw ValidationError({"unsupported TOML value at " +
                           (std::ostringstream() << node.source()).str()});
}

}  // namespace

Index half_width_for_generation(int generation) { return (pow3(generation) - 1) / 2; }

Index ExperimentConfig::chain_half_width() const {
    if (layout_kind == LayoutKind::Homogeneous) {
        return half_width;
    }
    return half_width_for_generation(generation);
}

std::vector<Index> ExperimentConfig::snapshot_schedule() const {
    if (snapshot_times) {
        std::vector<Index> times = *snapshot_times;
        std::sort(times.begin(), times.end());
        times.erase(std::unique(times.begin(), times.end()), times.end());
        return times;
    }
    return {step_count()};
}

bool ExperimentConfig::wants(OutputSink sink) const {
    return std::find(outputs.begin(), outputs.end(), sink) != outputs.end();
}

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::invalid_argument("invalid experiment config: " + join(violations, "; ")),
      violations_(std::move(violations)) {}

std::vector<std::string> validate(const ExperimentConfig& config) {
    std::vector<std::string> errors;
    std::optional<Index> half_width;

    if (config.layout_kind == LayoutKind::Homogeneous) {
        if (config.half_width < 0) {
            errors.push_back("L must be nonnegative");
        } else {
            half_width = config.half_width;
        }
    } else {
        const int min_generation = config.layout_kind == LayoutKind::TwoScatter ? 1 : 0;
        if (config.generation < min_generation) {
            errors.push_back("generation must be >= " + std::to_string(min_generation) + " for " +
                             std::string(to_string(config.layout_kind)) + " layouts");
        } else {
            try {
                half_width = half_width_for_generation(config.generation);
            } catch (const SizeError& e) {
                errors.push_back(e.what());
            }
        }
    }

    if (!std::isfinite(config.theta1)) errors.push_back("theta1 must be finite");
    if (!std::isfinite(config.theta2)) errors.push_back("theta2 must be finite");

    if (config.steps && *config.steps < 0) {
        errors.push_back("steps must be nonnegative");
    }
    if (half_width && config.steps && *config.steps > *half_width) {
        errors.push_back("steps (" + std::to_string(*config.steps) + ") exceeds L (" +
                         std::to_string(*half_width) + ")");
    }
    if (config.record_every < 1) {
        errors.push_back("record_every must be positive");
    }

    if (half_width && config.snapshot_times) {
        const Index steps = config.steps.value_or(*half_width);
        for (Index t : *config.snapshot_times) {
            if (t < 0 || t > steps) {
                errors.push_back("snapshot time " + std::to_string(t) + " outside [0, " +
                                 std::to_string(steps) + "]");
            }
        }
    }

    if (config.sweep) {
        if (config.sweep->values.empty()) {
            errors.push_back("sweep has no values");
        }
        for (double v : config.sweep->values) {
            if (!std::isfinite(v)) {
                errors.push_back("sweep values must be finite");
                break;
            }
        }
    }
    if (config.wants(OutputSink::Sweep) &&
        (!config.sweep || config.sweep->parameter != SweepParameter::Theta1)) {
        errors.push_back("sweep output needs a sweep over theta1");
    }
    if (config.wants(OutputSink::Transition) && config.record_every != 1) {
        errors.push_back("transition output needs record_every = 1");
    }
    return errors;
}

void require_valid(const ExperimentConfig& config) {
    auto errors = validate(config);
    if (!errors.empty()) {
        throw ValidationError(std::move(errors));
    }
}

double parse_angle(std::string_view text) {
    std::string lowered(trim(text));
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::string_view s = lowered;
    const auto bad = [&]() { return ValidationError({"cannot parse angle '" + std::string(text) + "'"}); };

    const auto pi_at = s.find("pi");
    if (pi_at == std::string_view::npos) {
        if (auto v = parse_number(s)) return *v;
        throw bad();
    }

    std::string_view coeff = trim(s.substr(0, pi_at));
    std::string_view tail = trim(s.substr(pi_at + 2));
    double value = std::numbers::pi;
    if (!coeff.empty() && coeff.back() == '*') {
        coeff = trim(coeff.substr(0, coeff.size() - 1));
        if (coeff.empty()) throw bad();
    }
    if (coeff == "-") {
        value = -value;
    } else if (!coeff.empty() && coeff != "+") {
        auto v = parse_number(coeff);
        if (!v) throw bad();
        value *= *v;
    }
    if (!tail.empty()) {
        if (tail.front() != '/') throw bad();
        auto d = parse_number(tail.substr(1));
        if (!d || *d == 0.0) throw bad();
        value /= *d;
    }
    return value;
}

std::vector<double> uniform_grid(double from, double to, int count) {
    if (count < 1) {
        throw ValidationError({"grid needs at least one interval"});
    }
    std::vector<double> grid(static_cast<std::size_t>(count) + 1);
    for (int k = 0; k <= count; ++k) {
        grid[static_cast<std::size_t>(k)] = from + (to - from) * k / count;
    }
    return grid;
}

std::string_view to_string(LayoutKind kind) {
    switch (kind) {
        case LayoutKind::Cantor: return "cantor";
        case LayoutKind::Homogeneous: return "homogeneous";
        case LayoutKind::TwoScatter: return "two_scatter";
    }
    return "?";
}

std::string_view to_string(OutputSink sink) {
    switch (sink) {
        case OutputSink::Series: return "series";
        case OutputSink::Snapshots: return "snapshots";
        case OutputSink::Sweep: return "sweep";
        case OutputSink::Transition: return "transition";
    }
    return "?";
}

ExperimentConfig config_from_json(const nlohmann::json& doc) {
    std::vector<std::string> errors;
    ExperimentConfig config;
    if (!doc.is_object()) {
        throw ValidationError({"config must be a key-value table"});
    }
    for (const auto& [key, _] : doc.items()) {
        if (!kKnownKeys.count(key)) errors.push_back("unknown key '" + key + "'");
    }

    auto angle = [&](const char* key, double& out) {
        if (!doc.contains(key)) return;
        const auto& v = doc.at(key);
        try {
            if (v.is_number()) {
                out = v.get<double>();
            } else if (v.is_string()) {
                out = parse_angle(v.get<std::string>());
            } else {
                errors.push_back(std::string(key) + " must be a number or angle expression");
            }
        } catch (const ValidationError& e) {
            errors.push_back(std::string(key) + ": " + e.violations().front());
        }
    };
    auto integer = [&](const char* key) -> std::optional<Index> {
        if (!doc.contains(key)) return std::nullopt;
        const auto& v = doc.at(key);
        if (!v.is_number_integer()) {
            errors.push_back(std::string(key) + " must be an integer");
            return std::nullopt;
        }
        return v.get<Index>();
    };

    if (doc.contains("layout_kind")) {
        const auto& v = doc.at("layout_kind");
        const std::string kind = v.is_string() ? v.get<std::string>() : "";
        if (kind == "cantor") {
            config.layout_kind = LayoutKind::Cantor;
        } else if (kind == "homogeneous") {
            config.layout_kind = LayoutKind::Homogeneous;
        } else if (kind == "two_scatter") {
            config.layout_kind = LayoutKind::TwoScatter;
        } else {
            errors.push_back("layout_kind must be one of cantor, homogeneous, two_scatter");
        }
    }
    if (auto g = integer("generation")) config.generation = static_cast<int>(*g);
    if (auto l = integer("L")) config.half_width = *l;
    if (config.layout_kind == LayoutKind::Homogeneous && !doc.contains("L")) {
        if (doc.contains("generation")) {
            try {
                config.half_width = half_width_for_generation(config.generation);
            } catch (const std::exception& e) {
                errors.push_back(e.what());
            }
        } else {
            errors.push_back("homogeneous layout needs L or generation");
        }
    }
    if (config.layout_kind != LayoutKind::Homogeneous && !doc.contains("generation")) {
        errors.push_back(std::string(to_string(config.layout_kind)) + " layout needs generation");
    }
    angle("theta1", config.theta1);
    angle("theta2", config.theta2);
    if (!doc.contains("theta2")) errors.push_back("theta2 is required");
    if (config.layout_kind != LayoutKind::Homogeneous && !doc.contains("theta1") &&
        !(doc.contains("sweep"))) {
        errors.push_back("theta1 is required");
    }
    if (config.layout_kind == LayoutKind::Homogeneous && !doc.contains("theta1")) {
        config.theta1 = config.theta2;
    }
    config.steps = integer("steps");
    if (auto r = integer("record_every")) config.record_every = *r;

    if (doc.contains("snapshot_times")) {
        const auto& v = doc.at("snapshot_times");
        if (!v.is_array() ||
            !std::all_of(v.begin(), v.end(), [](const auto& e) { return e.is_number_integer(); })) {
            errors.push_back("snapshot_times must be a list of integers");
        } else {
            config.snapshot_times = v.get<std::vector<Index>>();
        }
    }

    if (doc.contains("sweep")) {
        const auto& v = doc.at("sweep");
        SweepSpec spec;
        const std::string param = v.value("parameter", std::string("theta1"));
        if (param == "theta1") {
            spec.parameter = SweepParameter::Theta1;
        } else if (param == "theta2") {
            spec.parameter = SweepParameter::Theta2;
        } else {
            errors.push_back("sweep parameter must be theta1 or theta2");
        }
        if (v.contains("values")) {
            for (const auto& e : v.at("values")) {
                try {
                    spec.values.push_back(e.is_string() ? parse_angle(e.get<std::string>())
                                                        : e.get<double>());
                } catch (const std::exception&) {
                    errors.push_back("sweep values must be numbers or angle expressions");
                    break;
                }
            }
        } else if (v.contains("grid")) {
            try {
                auto bound = [](const nlohmann::json& e) {
                    return e.is_string() ? parse_angle(e.get<std::string>()) : e.get<double>();
                };
                const double from = v.contains("from") ? bound(v.at("from")) : 0.0;
                const double to = v.contains("to") ? bound(v.at("to")) : std::numbers::pi / 2;
                spec.values = uniform_grid(from, to, v.at("grid").get<int>());
            } catch (const std::exception& e) {
                errors.push_back(std::string("sweep grid: ") + e.what());
            }
        } else {
            errors.push_back("sweep needs values or grid");
        }
        config.sweep = std::move(spec);
    }

    if (doc.contains("outputs")) {
        config.outputs.clear();
        for (const auto& e : doc.at("outputs")) {
            const std::string name = e.is_string() ? e.get<std::string>() : "";
            if (name == "series") {
                config.outputs.push_back(OutputSink::Series);
            } else if (name == "snapshots") {
                config.outputs.push_back(OutputSink::Snapshots);
            } else if (name == "sweep") {
                config.outputs.push_back(OutputSink::Sweep);
            } else if (name == "transition") {
                config.outputs.push_back(OutputSink::Transition);
            } else {
                errors.push_back("unknown output '" + name + "'");
            }
        }
    }
    if (doc.contains("two_scatter_swap")) {
        const auto& v = doc.at("two_scatter_swap");
        if (v.is_boolean()) {
            config.two_scatter_swap = v.get<bool>();
        } else {
            errors.push_back("two_scatter_swap must be a boolean");
        }
    }

    if (!errors.empty()) {
        throw ValidationError(std::move(errors));
    }
    return config;
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
    nlohmann::json doc;
    doc["layout_kind"] = std::string(to_string(config.layout_kind));
    if (config.layout_kind == LayoutKind::Homogeneous) {
        doc["L"] = config.half_width;
    } else {
        doc["generation"] = config.generation;
    }
    doc["theta1"] = config.theta1;
    doc["theta2"] = config.theta2;
    if (config.steps) doc["steps"] = *config.steps;
    doc["record_every"] = config.record_every;
    if (config.snapshot_times) doc["snapshot_times"] = *config.snapshot_times;
    if (config.sweep) {
        doc["sweep"] = {{"parameter", config.sweep->parameter == SweepParameter::Theta1 ? "theta1"
                                                                                        : "theta2"},
                        {"values", config.sweep->values}};
    }
    doc["outputs"] = nlohmann::json::array();
    for (OutputSink sink : config.outputs) doc["outputs"].push_back(std::string(to_string(sink)));
    doc["two_scatter_swap"] = config.two_scatter_swap;
    return doc;
}

nlohmann::json toml_to_json(std::string_view text) {
    try {
        return toml_node_to_json(toml::parse(text));
    } catch (const toml::parse_error& e) {
        throw ValidationError({std::string("TOML parse error: ") + std::string(e.description())});
    }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError({"cannot open config file " + path.string()});
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    if (path.extension() == ".toml") {
        return config_from_json(toml_to_json(text));
    }
    try {
        return config_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError({std::string("JSON parse error: ") + e.what()});
    }
}

}  // namespace cantorwalk
