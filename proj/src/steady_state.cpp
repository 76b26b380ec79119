#include "opasim/steady_state.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "opasim/transfer.hpp"
#include "opasim/units.hpp"

namespace opasim {

namespace {

using complexd = std::complex<double>;

struct Residual {
    complexd f1, f2;
};

Residual residual_of(const CavityParams& p, complexd a, complexd b,
                     complexd a_in, complexd b_in) {
    const double e = p.epsilon;
    Residual r;
    r.f1 = p.kappa_a() * a - e * std::conj(a) * b -
           std::sqrt(2.0 * p.kappa_a1) * a_in;
    r.f2 = p.kappa_b() * b + 0.5 * e * a * a -
           std::sqrt(2.0 * p.kappa_b1) * b_in;
    return r;
}

double residual_scale(const CavityParams& p, complexd a, complexd b,
                      complexd a_in, complexd b_in) {
    double drive = std::abs(std::sqrt(2.0 * p.kappa_a1) * a_in) +
                   std::abs(std::sqrt(2.0 * p.kappa_b1) * b_in);
    double field = p.kappa_a() * std::abs(a) + p.kappa_b() * std::abs(b);
    return std::max({drive, field, 1.0});
}

constexpr int kMaxNewtonIterations = 200;
constexpr double kNewtonTolerance = 1e-12;  // relative to the drive scale

// Newton on the four real unknowns (Re/Im alpha, Re/Im beta).
bool newton(const CavityParams& p, complexd a_in, complexd b_in, complexd& a,
            complexd& b, double& residual_out) {
    const double e = p.epsilon;
    for (int it = 0; it < kMaxNewtonIterations; ++it) {
        Residual r = residual_of(p, a, b, a_in, b_in);
        Eigen::Vector4d f(r.f1.real(), r.f1.imag(), r.f2.real(), r.f2.imag());
        double scale = residual_scale(p, a, b, a_in, b_in);
        residual_out = f.norm() / scale;
        if (residual_out < kNewtonTolerance) return true;

        const double xa = a.real(), ya = a.imag();
        const double xb = b.real(), yb = b.imag();
        Eigen::Matrix4d J;
        J << p.kappa_a() - e * xb, -e * yb, -e * xa, -e * ya,
             -e * yb, p.kappa_a() + e * xb, e * ya, -e * xa,
             e * xa, -e * ya, p.kappa_b(), 0.0,
             e * ya, e * xa, 0.0, p.kappa_b();
        Eigen::FullPivLU<Eigen::Matrix4d> lu(J);
        if (!lu.isInvertible()) return false;
        Eigen::Vector4d d = lu.solve(-f);
        if (!d.allFinite()) return false;
        a = complexd(xa + d(0), ya + d(1));
        b = complexd(xb + d(2), yb + d(3));
    }
    Residual r = residual_of(p, a, b, a_in, b_in);
    residual_out = std::hypot(std::abs(r.f1), std::abs(r.f2)) /
                   residual_scale(p, a, b, a_in, b_in);
    return residual_out < kNewtonTolerance;
}

SteadyState make_state(const CavityParams& p, complexd a, complexd b) {
    SteadyState ss;
    ss.alpha = a;
    ss.beta = b;
    ss.theta_alpha = (a == complexd(0.0, 0.0)) ? 0.0 : std::arg(a);
    ss.theta_beta = (b == complexd(0.0, 0.0)) ? 0.0 : std::arg(b);
    ss.stable = drift_stable(p, a, b);
    return ss;
}

}  // namespace

double calibrate_epsilon(const CavityParams& params, double p_threshold_mw) {
    if (!(p_threshold_mw > 0.0)) {
        throw std::domain_error("calibrate_epsilon: p_threshold must be > 0");
    }
    CavityParams check = params;
    check.epsilon = 0.0;
    check.validate();
    double beta_in = std::sqrt(photon_flux(p_threshold_mw, params.lambda_b));
    double beta = std::sqrt(2.0 * params.kappa_b1) * beta_in / params.kappa_b();
    return params.kappa_a() / beta;
}

double steady_state_residual(const CavityParams& params,
                             const DriveConfig& drive, const SteadyState& ss) {
    complexd a_in = drive.seed_amplitude(params);
    complexd b_in = drive.pump_amplitude(params);
    Residual r = residual_of(params, ss.alpha, ss.beta, a_in, b_in);
    return std::sqrt(std::norm(r.f1) + std::norm(r.f2)) /
           residual_scale(params, ss.alpha, ss.beta, a_in, b_in);
}

bool drift_stable(const CavityParams& params, complexd alpha, complexd beta) {
    SteadyState probe;
    probe.alpha = alpha;
    probe.beta = beta;
    probe.theta_alpha = (alpha == complexd(0.0, 0.0)) ? 0.0 : std::arg(alpha);
    probe.theta_beta = (beta == complexd(0.0, 0.0)) ? 0.0 : std::arg(beta);
    Eigen::Matrix<complexd, 5, 5> m = system_matrix(params, probe, 0.0);
    Eigen::Matrix4cd quad = m.topLeftCorner<4, 4>();
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(quad, false);
    for (int i = 0; i < 4; ++i) {
        if (!(solver.eigenvalues()(i).real() > 0.0)) return false;
    }
    return true;
}

SteadyState solve_steady_state(const CavityParams& params,
                               const DriveConfig& drive) {
    params.validate();
    drive.validate();
    complexd a_in = drive.seed_amplitude(params);
    complexd b_in = drive.pump_amplitude(params);

    // passive-cavity guess
    complexd a0 = std::sqrt(2.0 * params.kappa_a1) * a_in / params.kappa_a();
    complexd b0 = std::sqrt(2.0 * params.kappa_b1) * b_in / params.kappa_b();

    complexd a = a0, b = b0;
    double res = 0.0;
    bool ok = newton(params, a_in, b_in, a, b, res);

    if (!ok) {
        // homotopy: ramp the drives up from zero, tracking the branch
        // connected to the trivial solution
        a = complexd(0.0, 0.0);
        b = complexd(0.0, 0.0);
        ok = true;
        const int steps = 25;
        for (int i = 1; i <= steps; ++i) {
            double t = static_cast<double>(i) / steps;
            if (!newton(params, t * a_in, t * b_in, a, b, res)) {
                ok = false;
                break;
            }
        }
    }
    if (!ok) {
        throw SolverError("solve_steady_state: no convergent root", res);
    }

    SteadyState ss = make_state(params, a, b);

    // Above threshold with zero seed the tracked branch is the (now
    // unstable) alpha = 0 solution; switch to the analytic oscillation
    // branch. Phase tie-break: theta_alpha in (-pi/2, pi/2].
    if (!ss.stable && drive.seed_power_mw == 0.0 && params.epsilon > 0.0) {
        double bin_mag = std::abs(b_in);
        double phase = std::arg(b_in);
        double amp2 = (2.0 / params.epsilon) *
                      (std::sqrt(2.0 * params.kappa_b1) * bin_mag -
                       params.kappa_a() * params.kappa_b() / params.epsilon);
        if (amp2 > 0.0) {
            double theta = 0.5 * phase;
            if (theta <= -0.5 * kPi) theta += kPi;
            if (theta > 0.5 * kPi) theta -= kPi;
            complexd ac = std::polar(std::sqrt(amp2), theta);
            complexd bc = std::polar(params.kappa_a() / params.epsilon, phase);
            complexd aa = ac, bb = bc;
            if (newton(params, a_in, b_in, aa, bb, res)) {
                SteadyState cand = make_state(params, aa, bb);
                if (cand.stable) return cand;
            }
        }
    }
    return ss;
}

}  // namespace opasim
