#ifndef OPASIM_UNITS_HPP
#define OPASIM_UNITS_HPP

#include <cmath>

namespace opasim {

inline constexpr double kPlanck = 6.62607015e-34;       // J s
inline constexpr double kSpeedOfLight = 299792458.0;    // m/s
inline constexpr double kPi = 3.14159265358979323846;

// Photon flux (photons/s) carried by an optical power given in mW.
inline double photon_flux(double power_mw, double wavelength_m) {
    return power_mw * 1e-3 * wavelength_m / (kPlanck * kSpeedOfLight);
}

// Inverse of photon_flux.
inline double flux_to_mw(double flux, double wavelength_m) {
    return flux * kPlanck * kSpeedOfLight / wavelength_m * 1e3;
}

// Cavity amplitude decay rate (rad/s) from a full linewidth in MHz.
// Half-width-at-half-maximum convention: kappa = 2*pi*linewidth/2.
inline double kappa_from_linewidth_mhz(double fwhm_mhz) {
    return kPi * fwhm_mhz * 1e6;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace opasim

#endif
