#ifndef OPASIM_SWEEP_HPP
#define OPASIM_SWEEP_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "opasim/config.hpp"
#include "opasim/inseparability.hpp"
#include "opasim/transfer.hpp"

namespace opasim {

enum class SweepMode { kPoint, kMap, kAngle, kSynth, kEstimate };

struct SweepSpec {
    SweepMode mode = SweepMode::kPoint;
    double total_power_mw = 65.0;   // angle sweeps
    double angle_min_pi = -0.5;     // closed interval, units of pi
    double angle_max_pi = 0.5;
    int grid = 201;                 // resolution per axis
    bool gawbs_enabled = true;      // false drops the xi couplings
    std::string output_path;
    double amp_max = 1.2;           // map extent in threshold-amplitude units
    int workers = 1;                // 0 = hardware concurrency

    void validate() const;
};

// Drive on the constant-total-power circle. Seed amplitude ~ cos(phi),
// pump amplitude ~ sin(phi); the sign of sin(phi) selects the pump phase
// branch (negative: de-amplification, positive: amplification). phi = 0 is
// pure SHG, phi = ±pi/2 pure OPO.
DriveConfig angle_parameterization(double phi, double total_power_mw,
                                   double p_threshold_mw);

// Full single-point pipeline: steady state, reflected transfer at the
// analysis sideband, detection losses, standard form.
struct PointReport {
    DriveConfig drive;
    SteadyState state;
    CorrelationMatrix raw;       // at the cavity output
    CorrelationMatrix detected;  // after detection efficiencies
    InseparabilityResult insep;  // standard form of the detected matrix
    ReflectedMeans means;
    double reflected_seed_mw = 0.0;
    double reflected_pump_mw = 0.0;
    double parametric_gain = 0.0;  // reflected seed power over its passive value

    std::string render(const Config& config) const;
};

PointReport run_point(const Config& config, const DriveConfig& drive,
                      bool gawbs_enabled = true);

struct AngleRow {
    double phi_over_pi = 0.0;
    double seed_mw = 0.0;
    double pump_mw = 0.0;
    // with the configured xi (absent when the sweep runs GAWBS-free only)
    std::optional<double> insep_gawbs;
    double insep_no_gawbs = 1.0;
    double caa_pp = 0.0, caa_mm = 0.0, cbb_pp = 0.0, cbb_mm = 0.0;
    bool stable = false;
    bool evaluable = false;
    bool failed = false;  // solver failure at this point; sweep continues
};

std::vector<AngleRow> run_angle_sweep(const Config& config,
                                      const SweepSpec& spec);

struct MapCell {
    double seed_amp = 0.0;  // units of the threshold pump amplitude
    double pump_amp = 0.0;  // signed; sign selects the phase branch
    double insep = 1.0;     // sentinel 1 when unstable/non-evaluable
    bool stable = false;
    bool evaluable = false;
    bool failed = false;
};

std::vector<MapCell> run_map(const Config& config, const SweepSpec& spec);

void write_angle_csv(std::ostream& out, const Config& config,
                     const SweepSpec& spec, const std::vector<AngleRow>& rows);
void write_map_csv(std::ostream& out, const Config& config,
                   const SweepSpec& spec, const std::vector<MapCell>& cells);

}  // namespace opasim

#endif
