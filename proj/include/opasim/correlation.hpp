#ifndef OPASIM_CORRELATION_HPP
#define OPASIM_CORRELATION_HPP

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

#include "opasim/transfer.hpp"

namespace opasim {

// Quadrature ordering shared by every 4x4 correlation object.
enum QuadratureIndex { kXaPlus = 0, kXaMinus, kXbPlus, kXbMinus };

// Real symmetric 4x4 matrix of symmetrized quadrature correlations, vacuum
// variance normalized to 1. Symmetry (1e-12) and positive diagonal are
// enforced on construction; physicality is a query because estimated
// matrices may violate it marginally.
class CorrelationMatrix {
public:
    // vacuum (identity) by default
    CorrelationMatrix() : m_(Eigen::Matrix4d::Identity()) {}

    static CorrelationMatrix from_matrix(const Eigen::Matrix4d& m);

    const Eigen::Matrix4d& m() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }

    // Smallest eigenvalue of m + iJ with J the two-mode symplectic form
    // normalized so the identity (vacuum) is exactly physical.
    double min_physicality_eigenvalue() const;
    bool is_physical(double tol = 1e-9) const {
        return min_physicality_eigenvalue() >= -tol;
    }

    // Plain-text interchange block: one '#' header line naming the
    // quadrature order, then 4 rows of 17-significant-digit decimals.
    std::string serialize() const;
    static CorrelationMatrix parse(std::istream& in);
    static CorrelationMatrix load(const std::string& path);

private:
    explicit CorrelationMatrix(const Eigen::Matrix4d& m) : m_(m) {}
    Eigen::Matrix4d m_;
};

// m = Re(T T^H): all eight vacuum ports and the GAWBS channel carry unit
// symmetrized spectral density.
CorrelationMatrix correlation_from_transfer(const TransferMatrix& t);

// Beam-splitter vacuum admixture: same-color blocks eta*C + (1-eta)*I,
// cross-color blocks sqrt(eta_a eta_b)*C.
CorrelationMatrix apply_detection_efficiency(const CorrelationMatrix& m,
                                             double eta_a, double eta_b);

}  // namespace opasim

#endif
