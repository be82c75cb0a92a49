#include "cantorwalk/cli.hpp"

#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cantorwalk/config.hpp"
#include "cantorwalk/experiments.hpp"

namespace cantorwalk {

namespace fs = std::filesystem;

namespace {

struct Globals {
    std::string out_dir = ".";
    std::size_t threads = 0;
};

std::ofstream open_output(const fs::path& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw ValidationError({"cannot write " + path.string()});
    }
    return file;
}

void print_reports(std::ostream& out, const std::vector<TransitionReport>& reports) {
    for (const auto& r : reports) {
        out << fmt::format("theta1={:.6g} theta2={:.6g} L={} tc_detected={} tc_predicted={} t2={}\n",
                           r.theta1, r.theta2, r.half_width,
                           r.tc_detected ? std::to_string(*r.tc_detected) : "none",
                           r.tc_predicted ? fmt::format("{:.2f}", *r.tc_predicted) : "undefined",
                           r.second.found() ? std::to_string(r.second.t)
                           : r.second.status == SecondTransition::Status::InsufficientData
                               ? "insufficient-data"
                               : "absent");
    }
}

void write_run_outputs(const ExperimentConfig& config, const std::vector<RunResult>& results,
                       const Globals& globals, std::ostream& out) {
    const fs::path dir(globals.out_dir);
    fs::create_directories(dir);
    const bool many = results.size() > 1;
    for (std::size_t k = 0; k < results.size(); ++k) {
        const std::string tag = many ? fmt::format("_{:03d}", k) : "";
        if (config.wants(OutputSink::Series)) {
            auto file = open_output(dir / ("series" + tag + ".csv"));
            write_series_csv(file, results[k].series);
        }
        if (config.wants(OutputSink::Snapshots)) {
            for (const auto& [t, probabilities] : results[k].series.snapshots) {
                auto file = open_output(dir / fmt::format("snapshot{}_t{}.csv", tag, t));
                write_snapshot_csv(file, probabilities, results[k].series.half_width);
            }
        }
    }
    if (config.wants(OutputSink::Sweep)) {
        auto file = open_output(dir / "sweep.csv");
        write_sweep_csv(file, sweep_rows(results));
    }
    if (config.wants(OutputSink::Transition)) {
        const auto reports = transition_analysis(config, results, globals.threads);
        auto file = open_output(dir / "transition.csv");
        write_transition_csv(file, reports);
        print_reports(out, reports);
    }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discrete-time quantum walks on Cantor coin chains"};
    app.require_subcommand(1);
    Globals globals;
    app.add_option("--out", globals.out_dir, "Directory for CSV outputs")->capture_default_str();
    app.add_option("--threads", globals.threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
    app.fallthrough();

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "Run an experiment described by a TOML or JSON file");
    run_cmd->add_option("--config", config_path, "Config file")->required();

    std::string theta1_text;
    std::string theta2_text;
    int generation = 7;
    int grid = 64;
    auto* sweep_cmd = app.add_subcommand("sweep", "theta1 sweep of sigma(L)/L and S_E(L)");
    sweep_cmd->add_option("--theta2", theta2_text, "Bulk coin angle (rad, e.g. pi/4)")->required();
    sweep_cmd->add_option("--generation", generation, "Cantor generation")->capture_default_str();
    sweep_cmd->add_option("--grid", grid, "Number of intervals over [0, pi/2]")->capture_default_str();

    bool two_scatter = false;
    auto* tc_cmd = app.add_subcommand("tc", "Critical-time analysis against the homogeneous walk");
    tc_cmd->add_option("--theta1", theta1_text, "Minority coin angle")->required();
    tc_cmd->add_option("--theta2", theta2_text, "Bulk coin angle")->required();
    tc_cmd->add_option("--generation", generation, "Cantor generation")->capture_default_str();
    tc_cmd->add_flag("--two-scatter", two_scatter, "Use the two-scatter chain instead");

    auto* layout_cmd = app.add_subcommand("layout", "Print a coin layout, one digit per site");
    std::string kind = "cantor";
    layout_cmd->add_option("--generation", generation, "Generation")->capture_default_str();
    layout_cmd->add_option("--kind", kind, "cantor or two_scatter")
        ->check(CLI::IsMember({"cantor", "two_scatter"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitSuccess : kExitValidation;
    }

    try {
        if (run_cmd->parsed()) {
            const ExperimentConfig config = load_config(config_path);
            const auto results = run(config, globals.threads);
            write_run_outputs(config, results, globals, out);
        } else if (sweep_cmd->parsed()) {
            ExperimentConfig config;
            config.layout_kind = LayoutKind::Cantor;
            config.generation = generation;
            config.theta2 = parse_angle(theta2_text);
            config.theta1 = config.theta2;
            config.sweep = SweepSpec{SweepParameter::Theta1,
                                     uniform_grid(0.0, std::numbers::pi / 2, grid)};
            config.outputs = {OutputSink::Sweep};
            write_run_outputs(config, run(config, globals.threads), globals, out);
            out << "wrote " << (fs::path(globals.out_dir) / "sweep.csv").string() << '\n';
        } else if (tc_cmd->parsed()) {
            ExperimentConfig config;
            config.layout_kind = two_scatter ? LayoutKind::TwoScatter : LayoutKind::Cantor;
            config.generation = generation;
            config.theta1 = parse_angle(theta1_text);
            config.theta2 = parse_angle(theta2_text);
            config.outputs = {OutputSink::Series, OutputSink::Transition};
            write_run_outputs(config, run(config, globals.threads), globals, out);
        } else if (layout_cmd->parsed()) {
            const CoinLayout layout =
                kind == "cantor" ? build_cantor(generation) : build_two_scatter(generation);
            out << layout.to_text();
        }
    } catch (const NumericalInconsistency& e) {
        err << "numerical invariant violated: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const ValidationError& e) {
        for (const auto& v : e.violations()) err << "error: " << v << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitSuccess;
}

}  // namespace cantorwalk
