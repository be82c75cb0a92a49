#include "cantorwalk/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "cantorwalk/evolution.hpp"
#include "cantorwalk/worker_pool.hpp"

namespace cantorwalk {

namespace {

std::string real(double v) { return fmt::format("{:.15g}", v); }

double population_std(const std::vector<SeriesEntry>& entries, std::size_t last, Index window) {
    const std::size_t first = last + 1 - static_cast<std::size_t>(window);
    double mean = 0.0;
    for (std::size_t i = first; i <= last; ++i) mean += entries[i].entropy;
    mean /= static_cast<double>(window);
    double var = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        const double d = entries[i].entropy - mean;
        var += d * d;
    }
    return std::sqrt(var / static_cast<double>(window));
}

}  // namespace

CoinLayout build_layout(const ExperimentConfig& config, double theta1, double theta2) {
    switch (config.layout_kind) {
        case LayoutKind::Cantor:
            return build_cantor(config.generation, theta1, theta2);
        case LayoutKind::Homogeneous: {
            // Type2 everywhere; theta1 is carried along but never used.
            return build_homogeneous(config.half_width).with_angles(theta1, theta2);
        }
        case LayoutKind::TwoScatter:
            return build_two_scatter(config.generation, theta1, theta2, config.two_scatter_swap);
    }
    throw ValidationError({"unknown layout kind"});
}

ObservableSeries simulate(const CoinLayout& layout, Index steps, Index record_every,
                          const std::vector<Index>& snapshot_times) {
    const Index half_width = layout.half_width();
    if (record_every < 1) {
        throw ValidationError({"record_every must be positive"});
    }
    ObservableSeries series;
    series.half_width = half_width;
    series.entries.reserve(static_cast<std::size_t>(steps / record_every + 2));

    auto record = [&](const WalkerState& state) {
        const Index t = state.time();
        if (std::binary_search(snapshot_times.begin(), snapshot_times.end(), t)) {
            series.snapshots.emplace(t, probability_distribution(state));
        }
        if (t % record_every != 0 && t != steps) {
            return;
        }
        const Measurement m = measure(state);
        if (std::abs(m.norm - 1.0) > kNormTolerance) {
            throw NumericalInconsistency(fmt::format("norm drifted to {:.17g} at t={}", m.norm, t));
        }
        const double oracle = entropy_oracle(m.reduced);
        if (std::abs(oracle - m.entropy) > kEntropyOracleTolerance) {
            throw NumericalInconsistency(fmt::format(
                "entropy {:.17g} disagrees with eigenvalue route {:.17g} at t={}", m.entropy, oracle, t));
        }
        series.entries.push_back({t, m.sigma, m.entropy});
    };

    WalkerState state = initial_state(half_width);
    record(state);
    Propagator(layout).evolve(state, steps, record);
    return series;
}

std::vector<RunResult> run(const ExperimentConfig& config, std::size_t threads) {
    require_valid(config);
    std::vector<RunResult> results;
    if (config.sweep) {
        for (double v : config.sweep->values) {
            RunResult r;
            r.sweep_value = v;
            const bool sweep_theta1 = config.sweep->parameter == SweepParameter::Theta1;
            r.theta1 = sweep_theta1 ? v : config.theta1;
            r.theta2 = sweep_theta1 ? config.theta2 : v;
            results.push_back(std::move(r));
        }
    } else {
        RunResult r;
        r.theta1 = config.theta1;
        r.theta2 = config.theta2;
        results.push_back(std::move(r));
    }

    // Labels are shared; each job binds its own angles.
    const CoinLayout labels = build_layout(config, config.theta1, config.theta2);
    const std::vector<Index> snapshots =
        config.wants(OutputSink::Snapshots) ? config.snapshot_schedule() : std::vector<Index>{};
    parallel_for(results.size(), threads, [&](std::size_t i) {
        const CoinLayout layout = labels.with_angles(results[i].theta1, results[i].theta2);
        results[i].series = simulate(layout, config.step_count(), config.record_every, snapshots);
    });
    return results;
}

ExperimentConfig reference_config(const ExperimentConfig& config, double theta2) {
    ExperimentConfig ref;
    ref.layout_kind = LayoutKind::Homogeneous;
    ref.half_width = config.chain_half_width();
    ref.theta1 = theta2;
    ref.theta2 = theta2;
    ref.steps = config.step_count();
    ref.record_every = config.record_every;
    ref.outputs = {OutputSink::Series};
    return ref;
}

double predicted_tc(double theta2, Index half_width) {
    const double c = std::cos(theta2);
    if (!(c > 0.0)) {
        throw std::domain_error("no critical-time prediction for cos(theta2) <= 0");
    }
    return static_cast<double>(half_width) / (3.0 * c);
}

std::optional<Index> detect_tc(const ObservableSeries& test, const ObservableSeries& reference,
                               double threshold) {
    if (test.entries.size() != reference.entries.size()) {
        throw std::invalid_argument("series lengths differ");
    }
    for (std::size_t i = 0; i < test.entries.size(); ++i) {
        const SeriesEntry& a = test.entries[i];
        const SeriesEntry& b = reference.entries[i];
        if (a.t != b.t) {
            throw std::invalid_argument("series are recorded on different t grids");
        }
        if (b.sigma == 0.0) {
            continue;
        }
        if (std::abs(a.sigma - b.sigma) / b.sigma >= threshold) {
            return a.t;
        }
    }
    return std::nullopt;
}

SecondTransition detect_second_transition(const ObservableSeries& series, Index t_c,
                                           Index window) {
    if (window < 1) {
        throw std::invalid_argument("window must be positive");
    }
    const auto& entries = series.entries;
    // Index of each t; the series must be recorded every step from t = 0.
    auto position = [&](Index t) -> std::optional<std::size_t> {
        if (t < 0 || static_cast<std::size_t>(t) >= entries.size() ||
            entries[static_cast<std::size_t>(t)].t != t) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(t);
    };
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].t != static_cast<Index>(i)) {
            throw std::invalid_argument("second-transition detection needs a record at every step");
        }
    }
    const auto base_end = position(t_c + window);
    if (t_c < 0 || !base_end) {
        return {SecondTransition::Status::InsufficientData, 0};
    }
    const double base = population_std(entries, *base_end, window);
    const auto first = static_cast<std::size_t>(std::max(t_c + 1, window - 1));
    for (std::size_t i = first; i < entries.size(); ++i) {
        if (population_std(entries, i, window) > 3.0 * base) {
            return {SecondTransition::Status::Found, entries[i].t};
        }
    }
    return {SecondTransition::Status::Absent, 0};
}

TransitionReport analyze_transition(const RunResult& test, const ObservableSeries& reference) {
    TransitionReport report;
    report.theta1 = test.theta1;
    report.theta2 = test.theta2;
    report.half_width = test.series.half_width;
    if (std::cos(test.theta2) > 0.0) {
        report.tc_predicted = predicted_tc(test.theta2, report.half_width);
    }
    report.tc_detected = detect_tc(test.series, reference);
    if (report.tc_detected) {
        report.second = detect_second_transition(test.series, *report.tc_detected);
    }
    return report;
}

std::vector<TransitionReport> transition_analysis(const ExperimentConfig& config,
                                                  std::size_t threads) {
    return transition_analysis(config, run(config, threads), threads);
}

std::vector<TransitionReport> transition_analysis(const ExperimentConfig& config,
                                                  const std::vector<RunResult>& tests,
                                                  std::size_t threads) {
    std::vector<double> theta2s;
    for (const auto& r : tests) {
        if (std::find(theta2s.begin(), theta2s.end(), r.theta2) == theta2s.end()) {
            theta2s.push_back(r.theta2);
        }
    }
    std::vector<ObservableSeries> references(theta2s.size());
    parallel_for(theta2s.size(), threads, [&](std::size_t i) {
        references[i] = run(reference_config(config, theta2s[i])).front().series;
    });
    std::vector<TransitionReport> reports;
    for (const auto& r : tests) {
        const auto k = static_cast<std::size_t>(
            std::find(theta2s.begin(), theta2s.end(), r.theta2) - theta2s.begin());
        reports.push_back(analyze_transition(r, references[k]));
    }
    return reports;
}

std::vector<SweepRow> sweep_rows(const std::vector<RunResult>& results) {
    std::vector<SweepRow> rows;
    rows.reserve(results.size());
    for (const auto& r : results) {
        const SeriesEntry& last = r.series.entries.back();
        const auto half_width = static_cast<double>(r.series.half_width);
        rows.push_back({r.theta1, half_width > 0 ? last.sigma / half_width : 0.0, last.entropy});
    }
    return rows;
}

std::vector<SweepRow> angle_sweep_at_L(const ExperimentConfig& config, std::size_t threads) {
    if (!config.sweep || config.sweep->parameter != SweepParameter::Theta1) {
        throw ValidationError({"angle sweep needs a sweep over theta1"});
    }
    return sweep_rows(run(config, threads));
}

void write_series_csv(std::ostream& out, const ObservableSeries& series) {
    out << "t,sigma,entropy\n";
    for (const auto& e : series.entries) {
        out << e.t << ',' << real(e.sigma) << ',' << real(e.entropy) << '\n';
    }
}

void write_snapshot_csv(std::ostream& out, const std::vector<double>& probabilities,
                        Index half_width) {
    out << "x,p\n";
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        out << static_cast<Index>(i) - half_width << ',' << real(probabilities[i]) << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "theta1,sigma_over_L,entropy\n";
    for (const auto& row : rows) {
        out << real(row.theta1) << ',' << real(row.sigma_over_l) << ',' << real(row.entropy) << '\n';
    }
}

void write_transition_csv(std::ostream& out, const std::vector<TransitionReport>& reports) {
    out << "theta2,L,tc_detected,tc_predicted,t2_detected\n";
    for (const auto& r : reports) {
        out << real(r.theta2) << ',' << r.half_width << ',';
        if (r.tc_detected) out << *r.tc_detected;
        out << ',';
        if (r.tc_predicted) out << real(*r.tc_predicted);
        out << ',';
        if (r.second.found()) out << r.second.t;
        out << '\n';
    }
}

}  // namespace cantorwalk
