#ifndef OPASIM_TRANSFER_HPP
#define OPASIM_TRANSFER_HPP

#include <Eigen/Dense>
#include <complex>

#include "opasim/params.hpp"
#include "opasim/steady_state.hpp"

namespace opasim {

// Row order of reflected quadratures in a TransferMatrix.
enum ReflectedRow { kXaPlusRef = 0, kXaMinusRef, kXbPlusRef, kXbMinusRef };

// Column order of the nine independent input channels.
enum InputChannel {
    kA1Plus = 0,
    kA1Minus,
    kA2Plus,
    kA2Minus,
    kB1Plus,
    kB1Minus,
    kB2Plus,
    kB2Minus,
    kGawbs
};

// Linear frequency-domain map from all input noise ports to the reflected
// fundamental and second-harmonic quadratures.
struct TransferMatrix {
    Eigen::Matrix<std::complex<double>, 4, 9> entries;
    double omega = 0.0;  // rad/s sideband frequency the map is valid at
};

// The 5x5 matrix M with M * [dXa+, dXa-, dXb+, dXb-, dP]^T =
// [dXA+in, dXA-in, dXB+in, dXB-in, dP']^T, laid out row by row exactly as
// the linearized intracavity dynamics dictate, including the trivial last
// row that identifies dP' with dP.
Eigen::Matrix<std::complex<double>, 5, 5> system_matrix(
    const CavityParams& params, const SteadyState& ss, double omega);

// T = O M^{-1} P - S with P injecting sqrt(2 kappa) port weights (unit
// weight on the GAWBS channel), O out-coupling the mirror ports and S
// selecting the direct reflection of the A1/B1 inputs. Throws
// std::runtime_error carrying a condition estimate when M is singular.
TransferMatrix reflected_transfer(const CavityParams& params,
                                  const SteadyState& ss, double omega);

// Mean reflected fields (sqrt(2 kappa_1) * field - drive amplitude).
struct ReflectedMeans {
    std::complex<double> fundamental;
    std::complex<double> harmonic;
};
ReflectedMeans mean_reflected_fields(const CavityParams& params,
                                     const SteadyState& ss,
                                     const DriveConfig& drive);

}  // namespace opasim

#endif
