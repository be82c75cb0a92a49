#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cantorwalk/coin_sequence.hpp"

namespace cantorwalk {

enum class LayoutKind { Cantor, Homogeneous, TwoScatter };
enum class SweepParameter { Theta1, Theta2 };
enum class OutputSink { Series, Snapshots, Sweep, Transition };

struct SweepSpec {
    SweepParameter parameter = SweepParameter::Theta1;
    std::vector<double> values;
};

/// One run, or one run per sweep value.
struct ExperimentConfig {
    LayoutKind layout_kind = LayoutKind::Cantor;
    int generation = 0;
    Index half_width = 0;  // homogeneous only; derived from generation otherwise
    double theta1 = 0.0;
    double theta2 = 0.0;
    std::optional<Index> steps;  // defaults to L
    Index record_every = 1;
    std::optional<std::vector<Index>> snapshot_times;  // defaults to {steps}
    std::optional<SweepSpec> sweep;
    std::vector<OutputSink> outputs{OutputSink::Series};
    bool two_scatter_swap = false;

    /// Chain half-width implied by the layout fields.
    Index chain_half_width() const;
    Index step_count() const { return steps.value_or(chain_half_width()); }
    std::vector<Index> snapshot_schedule() const;
    bool wants(OutputSink sink) const;
};

/// Carries every problem found in a config, not just the first.
class ValidationError : public std::invalid_argument {
  public:
    explicit ValidationError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

  private:
    std::vector<std::string> violations_;
};

/// Empty when the config is runnable.
std::vector<std::string> validate(const ExperimentConfig& config);

/// Throws ValidationError listing all violations.
void require_valid(const ExperimentConfig& config);

/// Accepts a plain number or forms like "pi/4", "2*pi/5", "-pi", "0.3".
double parse_angle(std::string_view text);

/// Cantor-layout half-width (3^g - 1)/2.
Index half_width_for_generation(int generation);

/// `count + 1` evenly spaced values from `from` to `to` inclusive.
std::vector<double> uniform_grid(double from, double to, int count);

ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// TOML tables become JSON objects; parse errors raise ValidationError.
nlohmann::json toml_to_json(std::string_view text);

/// Reads TOML (.toml) or JSON (anything else) from disk.
ExperimentConfig load_config(const std::filesystem::path& path);

std::string_view to_string(LayoutKind kind);
std::string_view to_string(OutputSink sink);

}  // namespace cantorwalk
