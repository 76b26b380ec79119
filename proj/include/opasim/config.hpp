#ifndef OPASIM_CONFIG_HPP
#define OPASIM_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include "opasim/params.hpp"

namespace opasim {

// The versioned physical configuration: sectioned key-value text holding
// the characterized parameter set. Defaults carry the full setup
// (linewidths 18//60 MHz, escape efficiencies 92//86%, detection 87//88%,
// threshold 85 mW, analysis sideband 7.8 MHz, fitted GAWBS couplings).
struct Config {
    // [cavity]
    double linewidth_a_mhz = 18.0;
    double linewidth_b_mhz = 60.0;
    double escape_a = 0.92;
    double escape_b = 0.86;
    double lambda_a_nm = 1064.0;
    double p_threshold_mw = 85.0;
    double omega_mhz = 7.8;

    // [detection]
    double eta_a = 0.87;
    double eta_b = 0.88;
    double dark_clearance_db = 15.0;
    double excess_variance = 0.0;

    // [gawbs]
    double xi_a = 7.0e-17;
    double xi_b = 4.6e-17;

    // [drive]
    double seed_mw = 81.0;
    double pump_mw = 9.0;
    double relative_phase = 0.0;

    // [sweep]
    double total_mw = 65.0;
    int grid = 201;
    double angle_min_pi = -0.5;
    double angle_max_pi = 0.5;
    std::uint64_t n_samples = 260000;
    std::uint64_t rng_seed = 1;
    int workers = 1;

    static Config load(const std::string& path);
    static Config parse(std::istream& in);

    // Canonical text form (fixed section and key order); also what the
    // config hash is computed over.
    std::string serialize() const;
    std::uint64_t hash() const;  // FNV-1a over serialize()

    // Physical parameters with epsilon calibrated against p_threshold.
    // gawbs_enabled = false zeroes both xi couplings.
    CavityParams cavity_params(bool gawbs_enabled = true) const;
    DriveConfig drive_config() const;
    double dark_variance() const;  // from the clearance in dB
};

}  // namespace opasim

#endif
