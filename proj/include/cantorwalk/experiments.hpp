#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "cantorwalk/coin_sequence.hpp"
#include "cantorwalk/config.hpp"
#include "cantorwalk/observables.hpp"

namespace cantorwalk {

/// Tolerance on |sum P - 1| checked at every recorded step of a run.
inline constexpr double kNormTolerance = 1e-9;
/// Tolerance between closed-form and eigenvalue entropies.
inline constexpr double kEntropyOracleTolerance = 1e-10;
/// Relative deviation of sigma from the homogeneous reference marking t_c.
inline constexpr double kTcThreshold = 1e-4;
inline constexpr Index kSecondTransitionWindow = 50;

struct RunResult {
    std::optional<double> sweep_value;
    double theta1 = 0.0;
    double theta2 = 0.0;
    ObservableSeries series;
};

/// Layout for the config's kind and generation/L, bound to the given angles.
CoinLayout build_layout(const ExperimentConfig& config, double theta1, double theta2);

/// Evolves a single walk from the initial state and records sigma and S_E
/// at t = 0, every `record_every` steps, and at the final step, plus P(x,t)
/// at the snapshot times when requested. Throws NumericalInconsistency if
/// the norm or entropy cross-check drifts past tolerance.
ObservableSeries simulate(const CoinLayout& layout, Index steps, Index record_every = 1,
                          const std::vector<Index>& snapshot_times = {});

/// One result per sweep value (or one when there is no sweep), in input
/// order regardless of `threads`.
std::vector<RunResult> run(const ExperimentConfig& config, std::size_t threads = 1);

/// The homogeneous theta1 = theta2 companion of a config: same chain, steps
/// and record grid.
ExperimentConfig reference_config(const ExperimentConfig& config, double theta2);

/// L / (3 cos theta2). Throws std::domain_error when cos theta2 <= 0.
double predicted_tc(double theta2, Index half_width);

/// First t with |sigma_test - sigma_ref| / sigma_ref >= threshold, skipping
/// sigma_ref = 0. Empty when the series never deviate. Both series must be
/// recorded on the same t grid.
std::optional<Index> detect_tc(const ObservableSeries& test, const ObservableSeries& reference,
                               double threshold = kTcThreshold);

struct SecondTransition {
    enum class Status { Found, Absent, InsufficientData };
    Status status = Status::Absent;
    Index t = 0;

    bool found() const { return status == Status::Found; }
};

/// First t > t_c where the rolling (population) standard deviation of S_E
/// over the `window` records ending at t exceeds three times its value on
/// the window ending at t_c + window. The series must be recorded every step
/// and reach t_c + window; later samples are scanned as far as they go.
SecondTransition detect_second_transition(const ObservableSeries& series, Index t_c,
                                          Index window = kSecondTransitionWindow);

struct TransitionReport {
    double theta1 = 0.0;
    double theta2 = 0.0;
    Index half_width = 0;
    std::optional<Index> tc_detected;
    std::optional<double> tc_predicted;
    SecondTransition second;
};

TransitionReport analyze_transition(const RunResult& test, const ObservableSeries& reference);

/// Runs the config and its homogeneous companions (one per distinct theta2)
/// and reports the transitions of every run.
std::vector<TransitionReport> transition_analysis(const ExperimentConfig& config,
                                                  std::size_t threads = 1);
/// Same, reusing runs already produced by run(config).
std::vector<TransitionReport> transition_analysis(const ExperimentConfig& config,
                                                  const std::vector<RunResult>& tests,
                                                  std::size_t threads = 1);

struct SweepRow {
    double theta1 = 0.0;
    double sigma_over_l = 0.0;
    double entropy = 0.0;
};

/// sigma(t=steps)/L and S_E(t=steps) for each theta1 of the sweep. Each row
/// comes from an independent full run.
std::vector<SweepRow> angle_sweep_at_L(const ExperimentConfig& config, std::size_t threads = 1);
std::vector<SweepRow> sweep_rows(const std::vector<RunResult>& results);

// CSV writers. Headers are fixed; reals use 15 significant digits.
void write_series_csv(std::ostream& out, const ObservableSeries& series);
void write_snapshot_csv(std::ostream& out, const std::vector<double>& probabilities,
                        Index half_width);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_transition_csv(std::ostream& out, const std::vector<TransitionReport>& reports);

}  // namespace cantorwalk
