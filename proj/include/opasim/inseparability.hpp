#ifndef OPASIM_INSEPARABILITY_HPP
#define OPASIM_INSEPARABILITY_HPP

#include <string>

#include "opasim/correlation.hpp"

namespace opasim {

enum class CriterionStatus { kEvaluable, kNotEvaluable };

// Literal evaluation of the inseparability definition on a correlation
// matrix as-is. k_plus/k_minus are the two gain ratios; value uses
// k = k_plus. Not evaluable when either gain ratio is undefined (a
// variance equal to 1, or the two deviations from vacuum have opposite
// signs).
struct RawCriterion {
    CriterionStatus status = CriterionStatus::kNotEvaluable;
    double value = 0.0;
    double k_plus = 0.0;
    double k_minus = 0.0;
};

RawCriterion inseparability_raw(const CorrelationMatrix& m);

// Result of the constrained standard-form minimization.
struct InseparabilityResult {
    CriterionStatus status = CriterionStatus::kNotEvaluable;
    double value = 1.0;  // inseparability at standard form when evaluable
    double k = 0.0;      // common gain ratio at standard form
    double r_a = 0.0;    // local symplectic parameter, mode a
    double r_b = 0.0;    // local symplectic parameter, mode b
    CorrelationMatrix standard_form;
    std::string diagnostic;
};

// Local scaling X_a^± -> e^{±r_a} X_a^± (and likewise for b) applied to a
// correlation matrix.
CorrelationMatrix local_scaling(const CorrelationMatrix& m, double r_a,
                                double r_b);

// Minimizes the inseparability over (r_a, r_b) in [-1,1]^2 subject to
// k+ = k-: bracketed scan + golden-section over r_a with a nested
// root-find in r_b on the constraint. When the constraint manifold is
// empty the verdict is separable (not evaluable) with a diagnostic.
InseparabilityResult standard_form(const CorrelationMatrix& m);

// value when evaluable, 1.0 otherwise (the plotting convention).
inline double plot_value(const InseparabilityResult& r) {
    return r.status == CriterionStatus::kEvaluable ? r.value : 1.0;
}
inline double plot_value(const RawCriterion& r) {
    return r.status == CriterionStatus::kEvaluable ? r.value : 1.0;
}

// Standard-deviation contour of a 2x2 marginal: semi-axes are the square
// roots of the eigenvalues, orientation the angle of the principal
// eigenvector in (-pi/2, pi/2] (0 for a circle). The vacuum contour is the
// unit circle.
struct EllipseContour {
    double semi_major = 0.0;
    double semi_minor = 0.0;
    double orientation = 0.0;  // radians
};

EllipseContour ellipse_contour(const CorrelationMatrix& m, QuadratureIndex x,
                               QuadratureIndex y);

}  // namespace opasim

#endif
