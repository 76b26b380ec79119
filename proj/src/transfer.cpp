#include "opasim/transfer.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "opasim/units.hpp"

namespace opasim {

using complexd = std::complex<double>;

Eigen::Matrix<complexd, 5, 5> system_matrix(const CavityParams& p,
                                            const SteadyState& ss,
                                            double omega) {
    const double e = p.epsilon;
    const double ra = std::abs(ss.alpha);
    const double rb = std::abs(ss.beta);
    const double ca = std::cos(ss.theta_alpha), sa = std::sin(ss.theta_alpha);
    const double cb = std::cos(ss.theta_beta), sb = std::sin(ss.theta_beta);

    const complexd i(0.0, 1.0);
    const complexd a_minus = p.kappa_a() - i * omega - e * rb * cb;
    const complexd a_plus = p.kappa_a() - i * omega + e * rb * cb;
    const double b_ = -e * rb * sb;
    const double c_ = -e * ra * ca;
    const double d_ = -e * ra * sa;
    const complexd e_ = p.kappa_b() - i * omega;

    // detuning-noise weights (-2 pi c / lambda) xi
    const double wa = (-2.0 * kPi * kSpeedOfLight / p.lambda_a) * p.xi_a;
    const double wb = (-2.0 * kPi * kSpeedOfLight / p.lambda_b) * p.xi_b;
    const complexd fa = 2.0 * i * ra * sa * wa;
    const double ga = 2.0 * ra * ca * wa;
    const complexd fb = 2.0 * i * rb * sb * wb;
    const double gb = 2.0 * rb * cb * wb;

    Eigen::Matrix<complexd, 5, 5> m;
    m << a_minus, b_, c_, d_, fa,
         b_, a_plus, -d_, c_, ga,
         -c_, d_, e_, 0.0, fb,
         -d_, -c_, 0.0, e_, gb,
         0.0, 0.0, 0.0, 0.0, 1.0;
    return m;
}

TransferMatrix reflected_transfer(const CavityParams& p, const SteadyState& ss,
                                  double omega) {
    Eigen::Matrix<complexd, 5, 5> m = system_matrix(p, ss, omega);
    Eigen::FullPivLU<Eigen::Matrix<complexd, 5, 5>> lu(m);
    if (!lu.isInvertible()) {
        Eigen::JacobiSVD<Eigen::Matrix<complexd, 5, 5>> svd(m);
        std::ostringstream msg;
        msg << "reflected_transfer: singular system matrix at omega=" << omega
            << " (condition estimate "
            << svd.singularValues()(0) / svd.singularValues()(4) << ")";
        throw std::runtime_error(msg.str());
    }
    Eigen::Matrix<complexd, 5, 5> minv = lu.inverse();

    const double oa = std::sqrt(2.0 * p.kappa_a1);
    const double la = std::sqrt(2.0 * p.kappa_a2);
    const double ob = std::sqrt(2.0 * p.kappa_b1);
    const double lb = std::sqrt(2.0 * p.kappa_b2);

    // port injection: accumulated inputs as weighted sums of the
    // independent channels
    Eigen::Matrix<double, 5, 9> inject = Eigen::Matrix<double, 5, 9>::Zero();
    inject(0, kA1Plus) = oa;
    inject(0, kA2Plus) = la;
    inject(1, kA1Minus) = oa;
    inject(1, kA2Minus) = la;
    inject(2, kB1Plus) = ob;
    inject(2, kB2Plus) = lb;
    inject(3, kB1Minus) = ob;
    inject(3, kB2Minus) = lb;
    inject(4, kGawbs) = 1.0;

    // out-coupling through the input-output mirrors; the dP column carries
    // no field
    Eigen::Matrix<double, 4, 5> out = Eigen::Matrix<double, 4, 5>::Zero();
    out(kXaPlusRef, 0) = oa;
    out(kXaMinusRef, 1) = oa;
    out(kXbPlusRef, 2) = ob;
    out(kXbMinusRef, 3) = ob;

    // direct reflection of the mirror-port inputs
    Eigen::Matrix<double, 4, 9> sel = Eigen::Matrix<double, 4, 9>::Zero();
    sel(kXaPlusRef, kA1Plus) = 1.0;
    sel(kXaMinusRef, kA1Minus) = 1.0;
    sel(kXbPlusRef, kB1Plus) = 1.0;
    sel(kXbMinusRef, kB1Minus) = 1.0;

    TransferMatrix t;
    t.entries = out * minv * inject - sel.cast<complexd>();
    t.omega = omega;
    if (!t.entries.allFinite()) {
        throw std::runtime_error("reflected_transfer: non-finite entries");
    }
    return t;
}

ReflectedMeans mean_reflected_fields(const CavityParams& p,
                                     const SteadyState& ss,
                                     const DriveConfig& drive) {
    ReflectedMeans r;
    r.fundamental = std::sqrt(2.0 * p.kappa_a1) * ss.alpha -
                    drive.seed_amplitude(p);
    r.harmonic = std::sqrt(2.0 * p.kappa_b1) * ss.beta -
                 drive.pump_amplitude(p);
    return r;
}

}  // namespace opasim
