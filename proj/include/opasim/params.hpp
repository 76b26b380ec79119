#ifndef OPASIM_PARAMS_HPP
#define OPASIM_PARAMS_HPP

#include <complex>

namespace opasim {

// Fixed physical constants of the doubly-resonant cavity and detection chain.
// Total decay rates are always derived, never stored.
struct CavityParams {
    double kappa_a1 = 0.0;  // fundamental input-output mirror coupling, rad/s
    double kappa_a2 = 0.0;  // fundamental intracavity-loss coupling, rad/s
    double kappa_b1 = 0.0;  // second-harmonic mirror coupling, rad/s
    double kappa_b2 = 0.0;  // second-harmonic loss coupling, rad/s
    double epsilon = 0.0;   // nonlinear coupling strength
    double lambda_a = 0.0;  // fundamental wavelength, m (= 2*lambda_b)
    double lambda_b = 0.0;  // second-harmonic wavelength, m
    double xi_a = 0.0;      // GAWBS coupling, fundamental (dimensionless)
    double xi_b = 0.0;      // GAWBS coupling, second harmonic
    double eta_a = 1.0;     // total detection efficiency, fundamental
    double eta_b = 1.0;     // total detection efficiency, second harmonic
    double omega = 0.0;     // analysis sideband angular frequency, rad/s

    double kappa_a() const { return kappa_a1 + kappa_a2; }
    double kappa_b() const { return kappa_b1 + kappa_b2; }

    // Throws std::domain_error on violated invariants (rates > 0,
    // lambda_a = 2*lambda_b exactly, eta in [0,1], epsilon >= 0).
    void validate() const;
};

// Coherent seed/pump drive. relative_phase = 0 is the de-amplification
// operating point of the seed; pi is maximal amplification. The sign is
// frozen inside pump_amplitude().
struct DriveConfig {
    double seed_power_mw = 0.0;
    double pump_power_mw = 0.0;
    double relative_phase = 0.0;   // radians
    double p_threshold_mw = 85.0;  // measured OPO threshold, calibration anchor

    void validate() const;

    // Seed drive amplitude, real non-negative by convention. sqrt(photons/s).
    std::complex<double> seed_amplitude(const CavityParams& p) const;
    // Pump drive amplitude: |beta_in| exp(i(relative_phase + pi)).
    std::complex<double> pump_amplitude(const CavityParams& p) const;
};

}  // namespace opasim

#endif
