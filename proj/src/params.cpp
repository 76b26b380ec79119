#include "opasim/params.hpp"

#include <cmath>
#include <stdexcept>

#include "opasim/units.hpp"

namespace opasim {

void CavityParams::validate() const {
    if (!(kappa_a1 > 0.0) || !(kappa_a2 > 0.0) || !(kappa_b1 > 0.0) ||
        !(kappa_b2 > 0.0)) {
        throw std::domain_error("CavityParams: all decay rates must be > 0");
    }
    if (!(lambda_a > 0.0) || lambda_a != 2.0 * lambda_b) {
        throw std::domain_error("CavityParams: lambda_a must equal 2*lambda_b");
    }
    if (eta_a < 0.0 || eta_a > 1.0 || eta_b < 0.0 || eta_b > 1.0) {
        throw std::domain_error("CavityParams: eta must lie in [0,1]");
    }
    if (epsilon < 0.0) {
        throw std::domain_error("CavityParams: epsilon must be >= 0");
    }
    if (!std::isfinite(omega)) {
        throw std::domain_error("CavityParams: omega must be finite");
    }
}

void DriveConfig::validate() const {
    if (!(seed_power_mw >= 0.0) || !(pump_power_mw >= 0.0)) {
        throw std::domain_error("DriveConfig: powers must be >= 0");
    }
    if (!(p_threshold_mw > 0.0)) {
        throw std::domain_error("DriveConfig: p_threshold must be > 0");
    }
    if (!std::isfinite(seed_power_mw) || !std::isfinite(pump_power_mw) ||
        !std::isfinite(relative_phase)) {
        throw std::domain_error("DriveConfig: drive values must be finite");
    }
}

std::complex<double> DriveConfig::seed_amplitude(const CavityParams& p) const {
    return {std::sqrt(photon_flux(seed_power_mw, p.lambda_a)), 0.0};
}

std::complex<double> DriveConfig::pump_amplitude(const CavityParams& p) const {
    double mag = std::sqrt(photon_flux(pump_power_mw, p.lambda_b));
    return std::polar(mag, relative_phase + kPi);
}

}  // namespace opasim
