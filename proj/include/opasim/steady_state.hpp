#ifndef OPASIM_STEADY_STATE_HPP
#define OPASIM_STEADY_STATE_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include "opasim/params.hpp"

namespace opasim {

// Classical intracavity mean fields of the driven cavity.
struct SteadyState {
    std::complex<double> alpha;  // intracavity fundamental mean field
    std::complex<double> beta;   // intracavity second-harmonic mean field
    double theta_alpha = 0.0;    // Arg(alpha), 0 for vanishing amplitude
    double theta_beta = 0.0;     // Arg(beta)
    bool stable = false;         // all drift eigenvalues in the left half-plane
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double last_residual)
        : std::runtime_error(what), last_residual_(last_residual) {}
    double last_residual() const { return last_residual_; }

private:
    double last_residual_;
};

// Nonlinearity such that with zero seed and pump power equal to
// p_threshold_mw the below-threshold branch sits exactly at the
// instability boundary epsilon*|beta| = kappa_a. epsilon in params is
// ignored; all other fields must be valid.
double calibrate_epsilon(const CavityParams& params, double p_threshold_mw);

// Scale-normalized residual norm of the two steady-state equations.
double steady_state_residual(const CavityParams& params,
                             const DriveConfig& drive, const SteadyState& ss);

// Stability of a candidate mean field: the 4x4 quadrature block of the
// system matrix at Omega = 0 equals minus the drift matrix, so all of its
// eigenvalues must have positive real part.
bool drift_stable(const CavityParams& params, std::complex<double> alpha,
                  std::complex<double> beta);

// Root of the coupled steady-state equations. Newton with analytic
// Jacobian from the passive-cavity guess, drive-ramp homotopy as fallback,
// and the analytic zero-seed branch above threshold. Returns the stable
// root when one exists, preferring the branch continuously connected to
// the below-threshold solution; an unstable root is returned flagged, not
// thrown. Throws SolverError when no root converges.
SteadyState solve_steady_state(const CavityParams& params,
                               const DriveConfig& drive);

}  // namespace opasim

#endif
