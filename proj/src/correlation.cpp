#include "opasim/correlation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace opasim {

CorrelationMatrix CorrelationMatrix::from_matrix(const Eigen::Matrix4d& m) {
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw std::domain_error("CorrelationMatrix: not symmetric");
    }
    for (int i = 0; i < 4; ++i) {
        if (!(m(i, i) > 0.0)) {
            throw std::domain_error(
                "CorrelationMatrix: diagonal entries must be > 0");
        }
    }
    if (!m.allFinite()) {
        throw std::domain_error("CorrelationMatrix: non-finite entries");
    }
    // exact symmetry from here on
    Eigen::Matrix4d sym = 0.5 * (m + m.transpose());
    return CorrelationMatrix(sym);
}

double CorrelationMatrix::min_physicality_eigenvalue() const {
    Eigen::Matrix4cd h = m_.cast<std::complex<double>>();
    const std::complex<double> i(0.0, 1.0);
    h(0, 1) += i;
    h(1, 0) -= i;
    h(2, 3) += i;
    h(3, 2) -= i;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(h);
    return solver.eigenvalues()(0);
}

std::string CorrelationMatrix::serialize() const {
    std::ostringstream out;
    out << "# quadrature order: Xa+ Xa- Xb+ Xb-\n";
    char buf[32];
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", m_(i, j));
            out << buf << (j == 3 ? "\n" : " ");
        }
    }
    return out.str();
}

CorrelationMatrix CorrelationMatrix::parse(std::istream& in) {
    Eigen::Matrix4d m;
    int got = 0;
    std::string line;
    while (got < 16 && std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') continue;
        std::istringstream ls(line);
        double v;
        while (got < 16 && ls >> v) {
            m(got / 4, got % 4) = v;
            ++got;
        }
    }
    if (got != 16) {
        throw std::runtime_error("CorrelationMatrix::parse: expected 16 values");
    }
    return from_matrix(m);
}

CorrelationMatrix CorrelationMatrix::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("CorrelationMatrix::load: cannot open " + path);
    }
    return parse(in);
}

CorrelationMatrix correlation_from_transfer(const TransferMatrix& t) {
    Eigen::Matrix4cd prod = t.entries * t.entries.adjoint();
    return CorrelationMatrix::from_matrix(prod.real());
}

CorrelationMatrix apply_detection_efficiency(const CorrelationMatrix& m,
                                             double eta_a, double eta_b) {
    if (!(eta_a >= 0.0 && eta_a <= 1.0 && eta_b >= 0.0 && eta_b <= 1.0)) {
        throw std::domain_error(
            "apply_detection_efficiency: eta must lie in [0,1]");
    }
    Eigen::Matrix4d out = m.m();
    out.topLeftCorner<2, 2>() =
        eta_a * m.m().topLeftCorner<2, 2>() +
        (1.0 - eta_a) * Eigen::Matrix2d::Identity();
    out.bottomRightCorner<2, 2>() =
        eta_b * m.m().bottomRightCorner<2, 2>() +
        (1.0 - eta_b) * Eigen::Matrix2d::Identity();
    double cross = std::sqrt(eta_a * eta_b);
    out.topRightCorner<2, 2>() = cross * m.m().topRightCorner<2, 2>();
    out.bottomLeftCorner<2, 2>() = cross * m.m().bottomLeftCorner<2, 2>();
    return CorrelationMatrix::from_matrix(out);
}

}  // namespace opasim
