#include "opasim/inseparability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "opasim/units.hpp"

namespace opasim {

namespace {

// Transformed matrix entries that the criterion reads, kept as plain
// numbers so the minimizer does not churn CorrelationMatrix objects.
struct CriterionEntries {
    double app, amm, bpp, bmm;  // diagonal variances
    double cpp, cmm;            // |cross-color same-quadrature| entries
};

CriterionEntries entries_of(const CorrelationMatrix& m) {
    return {m(kXaPlus, kXaPlus),   m(kXaMinus, kXaMinus),
            m(kXbPlus, kXbPlus),   m(kXbMinus, kXbMinus),
            std::abs(m(kXaPlus, kXbPlus)), std::abs(m(kXaMinus, kXbMinus))};
}

CriterionEntries scaled_entries(const CriterionEntries& e, double r_a,
                                double r_b) {
    const double ua = std::exp(2.0 * r_a), ub = std::exp(2.0 * r_b);
    const double g = std::exp(r_a + r_b);
    return {e.app * ua, e.amm / ua, e.bpp * ub,
            e.bmm / ub, e.cpp * g,  e.cmm / g};
}

struct RawEval {
    bool evaluable;
    double value, k_plus, k_minus;
};

RawEval evaluate(const CriterionEntries& e) {
    RawEval r{false, 0.0, 0.0, 0.0};
    const double dp = e.app - 1.0, dm = e.amm - 1.0;
    if (dp == 0.0 || dm == 0.0) return r;
    const double ratio_p = (e.bpp - 1.0) / dp;
    const double ratio_m = (e.bmm - 1.0) / dm;
    if (!(ratio_p > 0.0) || !(ratio_m > 0.0)) return r;
    r.k_plus = std::sqrt(ratio_p);
    r.k_minus = std::sqrt(ratio_m);
    if (!std::isfinite(r.k_plus) || !std::isfinite(r.k_minus)) return r;
    const double k = r.k_plus;
    const double ci_p = k * e.app + e.bpp / k - 2.0 * e.cpp;
    const double ci_m = k * e.amm + e.bmm / k - 2.0 * e.cmm;
    r.value = (ci_p + ci_m) / (2.0 * k + 2.0 / k);
    r.evaluable = std::isfinite(r.value);
    return r;
}

// k+ - k- at scaled (r_a, r_b); nullopt where either gain is undefined.
std::optional<double> k_gap(const CriterionEntries& e, double r_a,
                            double r_b) {
    RawEval r = evaluate(scaled_entries(e, r_a, r_b));
    if (!r.evaluable) return std::nullopt;
    return r.k_plus - r.k_minus;
}

constexpr double kDomain = 1.0;   // search box is [-kDomain, kDomain]^2
constexpr int kScanPoints = 241;  // bracketing resolution per axis
constexpr double kRootGapTolerance = 1e-8;

// All r_b roots of k+ = k- at fixed r_a, found by a bracketing scan plus
// bisection. Brackets that converge onto a pole of the gap are discarded.
std::vector<double> constraint_roots(const CriterionEntries& e, double r_a) {
    std::vector<double> roots;
    const double step = 2.0 * kDomain / (kScanPoints - 1);
    std::optional<double> prev;
    double prev_rb = 0.0;
    for (int i = 0; i < kScanPoints; ++i) {
        const double rb = -kDomain + i * step;
        std::optional<double> d = k_gap(e, r_a, rb);
        if (d && prev && *prev * *d <= 0.0) {
            double lo = prev_rb, hi = rb, dlo = *prev;
            for (int it = 0; it < 90; ++it) {
                const double mid = 0.5 * (lo + hi);
                std::optional<double> dm = k_gap(e, r_a, mid);
                if (!dm) break;
                if (dlo * *dm <= 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    dlo = *dm;
                }
            }
            const double root = 0.5 * (lo + hi);
            std::optional<double> dr = k_gap(e, r_a, root);
            if (dr && std::abs(*dr) < kRootGapTolerance) {
                roots.push_back(root);
            }
        }
        prev = d;
        prev_rb = rb;
    }
    return roots;
}

struct SectionPoint {
    double value = std::numeric_limits<double>::infinity();
    double r_b = 0.0;
};

// Minimum of the criterion over the constraint roots at fixed r_a.
SectionPoint best_on_section(const CriterionEntries& e, double r_a) {
    SectionPoint best;
    for (double rb : constraint_roots(e, r_a)) {
        RawEval r = evaluate(scaled_entries(e, r_a, rb));
        if (r.evaluable && r.value < best.value) {
            best.value = r.value;
            best.r_b = rb;
        }
    }
    return best;
}

}  // namespace

RawCriterion inseparability_raw(const CorrelationMatrix& m) {
    RawEval r = evaluate(entries_of(m));
    RawCriterion out;
    out.status = r.evaluable ? CriterionStatus::kEvaluable
                             : CriterionStatus::kNotEvaluable;
    out.value = r.value;
    out.k_plus = r.k_plus;
    out.k_minus = r.k_minus;
    return out;
}

CorrelationMatrix local_scaling(const CorrelationMatrix& m, double r_a,
                                double r_b) {
    Eigen::Vector4d d(std::exp(r_a), std::exp(-r_a), std::exp(r_b),
                      std::exp(-r_b));
    Eigen::Matrix4d scaled = d.asDiagonal() * m.m() * d.asDiagonal();
    return CorrelationMatrix::from_matrix(scaled);
}

InseparabilityResult standard_form(const CorrelationMatrix& m) {
    const CriterionEntries e = entries_of(m);

    InseparabilityResult out;
    out.standard_form = m;

    // no cross-color correlations: nothing to equalize, state separable
    const double cross = std::max(
        std::max(std::abs(m(kXaPlus, kXbPlus)), std::abs(m(kXaMinus, kXbMinus))),
        std::max(std::abs(m(kXaPlus, kXbMinus)), std::abs(m(kXaMinus, kXbPlus))));
    const double diag_scale = std::max(1.0, m.m().diagonal().maxCoeff());
    if (cross <= 1e-12 * diag_scale) {
        out.diagnostic = "no quadrature pair shows correlations";
        return out;
    }

    // bracketing scan over r_a
    const double step = 2.0 * kDomain / (kScanPoints - 1);
    int best_i = -1;
    SectionPoint best;
    std::vector<SectionPoint> section(kScanPoints);
    for (int i = 0; i < kScanPoints; ++i) {
        section[i] = best_on_section(e, -kDomain + i * step);
        if (section[i].value < best.value) {
            best = section[i];
            best_i = i;
        }
    }
    if (best_i < 0) {
        out.diagnostic =
            "constraint manifold empty: no local scaling equalizes the two "
            "gain ratios; state treated as separable";
        return out;
    }

    // golden-section refinement around every sampled local minimum; the
    // section can carry narrow dips near manifold folds, so refining only
    // the single best cell is not enough. Cells with no constraint root
    // act as +infinity.
    auto refine = [&](int i) -> std::pair<double, SectionPoint> {
        double lo = std::max(-kDomain, -kDomain + (i - 1) * step);
        double hi = std::min(kDomain, -kDomain + (i + 1) * step);
        const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = hi - golden * (hi - lo);
        double d = lo + golden * (hi - lo);
        SectionPoint fc = best_on_section(e, c);
        SectionPoint fd = best_on_section(e, d);
        for (int it = 0; it < 200 && hi - lo > 1e-11; ++it) {
            if (fc.value < fd.value) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - golden * (hi - lo);
                fc = best_on_section(e, c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + golden * (hi - lo);
                fd = best_on_section(e, d);
            }
        }
        const double mid = 0.5 * (lo + hi);
        return {mid, best_on_section(e, mid)};
    };

    double r_a = -kDomain + best_i * step;
    SectionPoint fin = best;
    for (int i = 0; i < kScanPoints; ++i) {
        const double here = section[i].value;
        if (!std::isfinite(here)) continue;
        const double left =
            i > 0 ? section[i - 1].value
                  : std::numeric_limits<double>::infinity();
        const double right = i + 1 < kScanPoints
                                 ? section[i + 1].value
                                 : std::numeric_limits<double>::infinity();
        if (here > left || here > right) continue;  // not a local minimum
        auto [ra_cand, sp] = refine(i);
        if (sp.value < fin.value) {
            r_a = ra_cand;
            fin = sp;
        }
    }

    RawEval r = evaluate(scaled_entries(e, r_a, fin.r_b));
    out.status = CriterionStatus::kEvaluable;
    out.value = r.value;
    out.k = r.k_plus;
    out.r_a = r_a;
    out.r_b = fin.r_b;
    out.standard_form = local_scaling(m, r_a, fin.r_b);
    return out;
}

EllipseContour ellipse_contour(const CorrelationMatrix& m, QuadratureIndex x,
                               QuadratureIndex y) {
    if (x == y) {
        throw std::domain_error("ellipse_contour: need two distinct quadratures");
    }
    Eigen::Matrix2d sub;
    sub << m(x, x), m(x, y), m(y, x), m(y, y);
    if (!(sub(0, 0) > 0.0) || !(sub.determinant() > 0.0)) {
        throw std::domain_error(
            "ellipse_contour: marginal covariance not positive definite");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(sub);
    EllipseContour out;
    const double lmin = solver.eigenvalues()(0);
    const double lmax = solver.eigenvalues()(1);
    out.semi_minor = std::sqrt(lmin);
    out.semi_major = std::sqrt(lmax);
    if (lmax - lmin <= 1e-14 * lmax) {
        out.orientation = 0.0;  // circle, orientation arbitrary
    } else {
        Eigen::Vector2d v = solver.eigenvectors().col(1);
        double angle = std::atan2(v(1), v(0));
        if (angle <= -0.5 * kPi) angle += kPi;
        if (angle > 0.5 * kPi) angle -= kPi;
        out.orientation = angle;
    }
    return out;
}

}  // namespace opasim
