#include "opasim/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "opasim/units.hpp"

namespace opasim {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Deterministic order-preserving parallel for: results land by index.
void parallel_for(int count, int workers, const std::function<void(int)>& body) {
    if (workers == 0) {
        workers = static_cast<int>(std::thread::hardware_concurrency());
        if (workers <= 0) workers = 1;
    }
    if (workers <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                body(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

void csv_preamble(std::ostream& out, const Config& config,
                  const SweepSpec& spec) {
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(config.hash()));
    out << "# config_hash: " << hash << "\n";
    out << "# omega_mhz: " << fmt(config.omega_mhz) << "\n";
    out << "# xi_a: " << fmt(spec.gawbs_enabled ? config.xi_a : 0.0)
        << " xi_b: " << fmt(spec.gawbs_enabled ? config.xi_b : 0.0) << "\n";
    out << "# grid: " << spec.grid << "\n";
}

}  // namespace

void SweepSpec::validate() const {
    // a one-point angle "sweep" degenerates to run_point; the map needs at
    // least two points per axis
    if (mode == SweepMode::kMap && grid < 2) {
        throw std::domain_error("SweepSpec: map grid must be >= 2");
    }
    if (grid < 1) throw std::domain_error("SweepSpec: grid must be >= 1");
    if (!(total_power_mw > 0.0)) {
        throw std::domain_error("SweepSpec: total power must be > 0");
    }
    if (!(angle_max_pi >= angle_min_pi)) {
        throw std::domain_error("SweepSpec: empty angle interval");
    }
    if (!(amp_max > 0.0)) {
        throw std::domain_error("SweepSpec: map extent must be > 0");
    }
}

DriveConfig angle_parameterization(double phi, double total_power_mw,
                                   double p_threshold_mw) {
    if (!(total_power_mw > 0.0)) {
        throw std::domain_error("angle_parameterization: total power must be > 0");
    }
    const double c = std::cos(phi), s = std::sin(phi);
    DriveConfig d;
    d.seed_power_mw = total_power_mw * c * c;
    d.pump_power_mw = total_power_mw * s * s;
    d.relative_phase = s >= 0.0 ? kPi : 0.0;  // amplification : de-amplification
    d.p_threshold_mw = p_threshold_mw;
    return d;
}

PointReport run_point(const Config& config, const DriveConfig& drive,
                      bool gawbs_enabled) {
    const CavityParams params = config.cavity_params(gawbs_enabled);
    PointReport rep;
    rep.drive = drive;
    rep.state = solve_steady_state(params, drive);
    const TransferMatrix t = reflected_transfer(params, rep.state, params.omega);
    rep.raw = correlation_from_transfer(t);
    rep.detected =
        apply_detection_efficiency(rep.raw, params.eta_a, params.eta_b);
    rep.insep = standard_form(rep.detected);
    rep.means = mean_reflected_fields(params, rep.state, drive);
    rep.reflected_seed_mw =
        flux_to_mw(std::norm(rep.means.fundamental), params.lambda_a);
    rep.reflected_pump_mw =
        flux_to_mw(std::norm(rep.means.harmonic), params.lambda_b);
    // passive reflection sets the gain reference; impedance-matched cavities
    // reflect nothing and the gain is left 0
    const double refl_coeff =
        2.0 * params.kappa_a1 / params.kappa_a() - 1.0;
    const double passive_mw =
        drive.seed_power_mw * refl_coeff * refl_coeff;
    rep.parametric_gain =
        passive_mw > 0.0 ? rep.reflected_seed_mw / passive_mw : 0.0;
    return rep;
}

std::string PointReport::render(const Config& config) const {
    std::ostringstream out;
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(config.hash()));
    out << "config_hash: " << hash << "\n";
    out << "drive: seed " << fmt(drive.seed_power_mw) << " mW, pump "
        << fmt(drive.pump_power_mw) << " mW, relative phase "
        << fmt(drive.relative_phase) << " rad\n";
    out << "steady state: |alpha| = " << fmt(std::abs(state.alpha))
        << ", theta_alpha = " << fmt(state.theta_alpha)
        << ", |beta| = " << fmt(std::abs(state.beta))
        << ", theta_beta = " << fmt(state.theta_beta) << "\n";
    out << "stable: " << (state.stable ? "yes" : "no") << "\n";
    out << "reflected: seed " << fmt(reflected_seed_mw) << " mW, harmonic "
        << fmt(reflected_pump_mw) << " mW\n";
    out << "parametric gain (vs passive reflection): " << fmt(parametric_gain)
        << "\n";
    out << "detected correlation matrix:\n" << detected.serialize();
    if (insep.status == CriterionStatus::kEvaluable) {
        out << "inseparability: " << fmt(insep.value) << "\n";
        out << "k: " << fmt(insep.k) << "\n";
        out << "r_a: " << fmt(insep.r_a) << ", r_b: " << fmt(insep.r_b) << "\n";
    } else {
        out << "inseparability: 1 (separable / not evaluable)\n";
        if (!insep.diagnostic.empty()) {
            out << "diagnostic: " << insep.diagnostic << "\n";
        }
    }
    return out.str();
}

std::vector<AngleRow> run_angle_sweep(const Config& config,
                                      const SweepSpec& spec) {
    spec.validate();
    const int n = spec.grid;
    std::vector<AngleRow> rows(n);
    parallel_for(n, spec.workers, [&](int i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        const double phi_pi =
            spec.angle_min_pi + t * (spec.angle_max_pi - spec.angle_min_pi);
        AngleRow& row = rows[i];
        row.phi_over_pi = phi_pi;
        const DriveConfig drive = angle_parameterization(
            phi_pi * kPi, spec.total_power_mw, config.p_threshold_mw);
        row.seed_mw = drive.seed_power_mw;
        row.pump_mw = drive.pump_power_mw;
        try {
            PointReport rep = run_point(config, drive, spec.gawbs_enabled);
            if (spec.gawbs_enabled) {
                row.insep_gawbs = plot_value(rep.insep);
                PointReport off = run_point(config, drive, false);
                row.insep_no_gawbs = plot_value(off.insep);
            } else {
                row.insep_no_gawbs = plot_value(rep.insep);
            }
            row.caa_pp = rep.detected(kXaPlus, kXaPlus);
            row.caa_mm = rep.detected(kXaMinus, kXaMinus);
            row.cbb_pp = rep.detected(kXbPlus, kXbPlus);
            row.cbb_mm = rep.detected(kXbMinus, kXbMinus);
            row.stable = rep.state.stable;
            row.evaluable = rep.insep.status == CriterionStatus::kEvaluable;
        } catch (const std::exception&) {
            row.failed = true;  // gap row, sweep continues
        }
    });
    return rows;
}

std::vector<MapCell> run_map(const Config& config, const SweepSpec& spec) {
    spec.validate();
    const int n = spec.grid;
    std::vector<MapCell> cells(n * n);
    parallel_for(n * n, spec.workers, [&](int idx) {
        const int i = idx / n;  // seed index
        const int j = idx % n;  // pump index
        MapCell& cell = cells[idx];
        cell.seed_amp = spec.amp_max * static_cast<double>(i) / (n - 1);
        cell.pump_amp =
            -spec.amp_max + 2.0 * spec.amp_max * static_cast<double>(j) / (n - 1);
        DriveConfig drive;
        drive.seed_power_mw =
            cell.seed_amp * cell.seed_amp * config.p_threshold_mw;
        drive.pump_power_mw =
            cell.pump_amp * cell.pump_amp * config.p_threshold_mw;
        drive.relative_phase = cell.pump_amp >= 0.0 ? kPi : 0.0;
        drive.p_threshold_mw = config.p_threshold_mw;
        try {
            PointReport rep = run_point(config, drive, spec.gawbs_enabled);
            cell.stable = rep.state.stable;
            cell.evaluable = rep.insep.status == CriterionStatus::kEvaluable;
            cell.insep =
                cell.stable && cell.evaluable ? rep.insep.value : 1.0;
        } catch (const std::exception&) {
            cell.failed = true;
            cell.insep = 1.0;
        }
    });
    return cells;
}

void write_angle_csv(std::ostream& out, const Config& config,
                     const SweepSpec& spec, const std::vector<AngleRow>& rows) {
    csv_preamble(out, config, spec);
    out << "# total_mw: " << fmt(spec.total_power_mw) << "\n";
    if (spec.gawbs_enabled) {
        out << "phi_over_pi,seed_mw,pump_mw,insep_gawbs,insep_no_gawbs,"
               "caa_pp,caa_mm,cbb_pp,cbb_mm,stable,evaluable,failed\n";
    } else {
        out << "phi_over_pi,seed_mw,pump_mw,insep_no_gawbs,"
               "caa_pp,caa_mm,cbb_pp,cbb_mm,stable,evaluable,failed\n";
    }
    int failures = 0;
    for (const AngleRow& r : rows) {
        failures += r.failed ? 1 : 0;
        out << fmt(r.phi_over_pi) << ',' << fmt(r.seed_mw) << ','
            << fmt(r.pump_mw) << ',';
        if (spec.gawbs_enabled) {
            out << fmt(r.insep_gawbs.value_or(1.0)) << ',';
        }
        out << fmt(r.insep_no_gawbs) << ',' << fmt(r.caa_pp) << ','
            << fmt(r.caa_mm) << ',' << fmt(r.cbb_pp) << ',' << fmt(r.cbb_mm)
            << ',' << (r.stable ? 1 : 0) << ',' << (r.evaluable ? 1 : 0) << ','
            << (r.failed ? 1 : 0) << "\n";
    }
    out << "# failed_points: " << failures << " of " << rows.size() << "\n";
}

void write_map_csv(std::ostream& out, const Config& config,
                   const SweepSpec& spec, const std::vector<MapCell>& cells) {
    csv_preamble(out, config, spec);
    out << "# amplitude unit: sqrt(p_threshold); pump sign selects the "
           "phase branch\n";
    out << "seed_amp,pump_amp,insep,stable,evaluable,failed\n";
    int failures = 0;
    for (const MapCell& c : cells) {
        failures += c.failed ? 1 : 0;
        out << fmt(c.seed_amp) << ',' << fmt(c.pump_amp) << ',' << fmt(c.insep)
            << ',' << (c.stable ? 1 : 0) << ',' << (c.evaluable ? 1 : 0) << ','
            << (c.failed ? 1 : 0) << "\n";
    }
    out << "# failed_points: " << failures << " of " << cells.size() << "\n";
}

}  // namespace opasim
