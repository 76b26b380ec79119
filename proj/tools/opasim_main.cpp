#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "opasim/config.hpp"
#include "opasim/sampling.hpp"
#include "opasim/sweep.hpp"

namespace {

using namespace opasim;

Config load_config(const std::string& path) {
    if (path.empty()) return Config{};
    return Config::load(path);
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file " + path);
    return file;
}

int cmd_point(const std::string& config_path, std::optional<double> seed_mw,
              std::optional<double> pump_mw, std::optional<double> phase,
              bool no_gawbs, const std::string& out_path) {
    Config config = load_config(config_path);
    if (seed_mw) config.seed_mw = *seed_mw;
    if (pump_mw) config.pump_mw = *pump_mw;
    if (phase) config.relative_phase = *phase;
    PointReport rep = run_point(config, config.drive_config(), !no_gawbs);
    std::ofstream file;
    open_output(file, out_path) << rep.render(config);
    return 0;
}

int cmd_angle(const std::string& config_path, std::optional<double> total_mw,
              std::optional<int> grid, bool no_gawbs, int workers,
              const std::string& out_path) {
    Config config = load_config(config_path);
    SweepSpec spec;
    spec.mode = SweepMode::kAngle;
    spec.total_power_mw = total_mw.value_or(config.total_mw);
    spec.angle_min_pi = config.angle_min_pi;
    spec.angle_max_pi = config.angle_max_pi;
    spec.grid = grid.value_or(config.grid);
    spec.gawbs_enabled = !no_gawbs;
    spec.workers = workers;
    auto rows = run_angle_sweep(config, spec);
    std::ofstream file;
    write_angle_csv(open_output(file, out_path), config, spec, rows);
    return 0;
}

int cmd_map(const std::string& config_path, std::optional<int> grid,
            bool no_gawbs, double amp_max, int workers,
            const std::string& out_path) {
    Config config = load_config(config_path);
    SweepSpec spec;
    spec.mode = SweepMode::kMap;
    spec.grid = grid.value_or(config.grid);
    spec.gawbs_enabled = !no_gawbs;
    spec.amp_max = amp_max;
    spec.workers = workers;
    auto cells = run_map(config, spec);
    std::ofstream file;
    write_map_csv(open_output(file, out_path), config, spec, cells);
    return 0;
}

int cmd_synth(const std::string& config_path, const std::string& matrix_path,
              std::optional<std::uint64_t> n, std::optional<std::uint64_t> seed,
              bool no_gawbs, const std::string& out_prefix) {
    Config config = load_config(config_path);
    CorrelationMatrix m;
    if (!matrix_path.empty()) {
        m = CorrelationMatrix::load(matrix_path);
    } else {
        PointReport rep = run_point(config, config.drive_config(), !no_gawbs);
        m = rep.detected;
    }
    SynthesisOptions options;
    options.v_dark = config.dark_variance();
    options.v_excess = config.excess_variance;
    auto runs = synthesize_runs(m, n.value_or(config.n_samples),
                                seed.value_or(config.rng_seed), options);
    for (const MeasurementRun& run : runs) {
        const std::string path = out_prefix + "_" + setting_suffix(run) + ".txt";
        save_run(path, run);
        std::cerr << "wrote " << path << "\n";
    }
    return 0;
}

int cmd_estimate(const std::string& runs_prefix, const std::string& out_path) {
    std::array<MeasurementRun, 4> runs = {
        load_run(runs_prefix + "_pp.txt"), load_run(runs_prefix + "_pm.txt"),
        load_run(runs_prefix + "_mp.txt"), load_run(runs_prefix + "_mm.txt")};
    CorrelationMatrix m = estimate_correlation_matrix(runs);
    std::ofstream file;
    std::ostream& out = open_output(file, out_path);
    out << m.serialize();
    InseparabilityResult sf = standard_form(m);
    if (sf.status == CriterionStatus::kEvaluable) {
        out << "# inseparability: " << sf.value << " (k " << sf.k << ", r_a "
            << sf.r_a << ", r_b " << sf.r_b << ")\n";
    } else {
        out << "# inseparability: 1 (separable / not evaluable)\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"doubly-resonant OPA harmonic-entanglement simulator"};
    app.require_subcommand(1);

    std::string config_path, out_path, matrix_path, runs_prefix;
    std::optional<double> seed_mw, pump_mw, phase, total_mw;
    std::optional<int> grid;
    std::optional<std::uint64_t> n_samples, rng_seed;
    bool no_gawbs = false;
    int workers = 1;
    double amp_max = 1.2;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "configuration file");
        cmd->add_option("--out", out_path, "output path (default stdout)");
        cmd->add_flag("--no-gawbs", no_gawbs, "drop the GAWBS couplings");
    };

    CLI::App* point = app.add_subcommand("point", "single-drive analysis");
    add_common(point);
    point->add_option("--seed-mw", seed_mw, "seed power, mW");
    point->add_option("--pump-mw", pump_mw, "pump power, mW");
    point->add_option("--phase", phase, "pump relative phase, rad");

    CLI::App* angle = app.add_subcommand("angle", "constant-power angle sweep");
    add_common(angle);
    angle->add_option("--total-mw", total_mw, "total drive power, mW");
    angle->add_option("--grid", grid, "points across the angle interval");
    angle->add_option("--workers", workers, "worker threads (0 = hardware)");

    CLI::App* map = app.add_subcommand("map", "seed/pump amplitude map");
    add_common(map);
    map->add_option("--grid", grid, "points per axis");
    map->add_option("--amp-max", amp_max, "axis extent, threshold units");
    map->add_option("--workers", workers, "worker threads (0 = hardware)");

    CLI::App* synth = app.add_subcommand("synth", "synthesize measurement runs");
    synth->add_option("--config", config_path, "configuration file");
    synth->add_option("--out", runs_prefix,
                      "output path prefix (one file per setting)")
        ->required();
    synth->add_flag("--no-gawbs", no_gawbs, "drop the GAWBS couplings");
    synth->add_option("--matrix", matrix_path,
                      "target correlation matrix file (default: model at the "
                      "configured drive)");
    synth->add_option("--n", n_samples, "samples per run");
    synth->add_option("--rng-seed", rng_seed, "random seed");

    CLI::App* estimate =
        app.add_subcommand("estimate", "estimate a correlation matrix from runs");
    estimate->add_option("--runs", runs_prefix, "run file prefix")->required();
    estimate->add_option("--out", out_path, "output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (point->parsed()) {
            return cmd_point(config_path, seed_mw, pump_mw, phase, no_gawbs,
                             out_path);
        }
        if (angle->parsed()) {
            return cmd_angle(config_path, total_mw, grid, no_gawbs, workers,
                             out_path);
        }
        if (map->parsed()) {
            return cmd_map(config_path, grid, no_gawbs, amp_max, workers,
                           out_path);
        }
        if (synth->parsed()) {
            return cmd_synth(config_path, matrix_path, n_samples, rng_seed,
                             no_gawbs, runs_prefix);
        }
        if (estimate->parsed()) {
            return cmd_estimate(runs_prefix, out_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
