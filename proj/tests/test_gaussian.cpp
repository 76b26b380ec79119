#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "opasim/config.hpp"
#include "opasim/correlation.hpp"
#include "opasim/inseparability.hpp"
#include "opasim/steady_state.hpp"
#include "opasim/sweep.hpp"
#include "opasim/units.hpp"

using namespace opasim;

namespace {

// Simplified published matrix: diagonal variances, amplitude and phase
// cross-color correlations, single-color cross terms zero.
CorrelationMatrix measured_matrix() {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m.diagonal() << 0.71, 2.45, 0.83, 2.56;
    m(0, 2) = m(2, 0) = -0.25;
    m(1, 3) = m(3, 1) = 1.42;
    return CorrelationMatrix::from_matrix(m);
}

CorrelationMatrix two_mode_squeezed(double r) {
    const double ch = std::cosh(2.0 * r), sh = std::sinh(2.0 * r);
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m.diagonal() << ch, ch, ch, ch;
    m(0, 2) = m(2, 0) = sh;
    m(1, 3) = m(3, 1) = -sh;
    return CorrelationMatrix::from_matrix(m);
}

// Random physical matrix: two-mode squeezing, local squeezes, losses and
// optional classical noise, all of which preserve physicality.
CorrelationMatrix random_physical(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    CorrelationMatrix m = two_mode_squeezed(0.1 + 1.0 * uni(rng));
    m = local_scaling(m, 0.6 * (uni(rng) - 0.5), 0.6 * (uni(rng) - 0.5));
    m = apply_detection_efficiency(m, 0.5 + 0.5 * uni(rng),
                                   0.5 + 0.5 * uni(rng));
    if (uni(rng) < 0.5) {
        Eigen::Vector4d g;
        g << uni(rng), uni(rng), uni(rng), uni(rng);
        g *= 0.6;
        Eigen::Matrix4d noisy = m.m() + g * g.transpose();
        m = CorrelationMatrix::from_matrix(noisy);
    }
    return m;
}

}  // namespace

TEST_CASE("correlation from transfer: passive cavity reflects vacuum") {
    CavityParams p = Config{}.cavity_params(false);
    p.epsilon = 0.0;
    SteadyState ss;
    for (double scale : {0.0, 1.0, 10.0}) {
        CorrelationMatrix m = correlation_from_transfer(
            reflected_transfer(p, ss, scale * p.kappa_a()));
        CHECK((m.m() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() <
              1e-10);
    }
}

TEST_CASE("correlation from transfer: GAWBS adds positive phase noise only "
          "with a bright intracavity field") {
    Config config;
    CavityParams p = config.cavity_params(true);
    p.epsilon = 0.0;  // passive but bright and with GAWBS couplings

    // dark cavity: still vacuum
    SteadyState dark;
    CorrelationMatrix m0 =
        correlation_from_transfer(reflected_transfer(p, dark, p.omega));
    CHECK((m0.m() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() <
          1e-10);

    // bright cavity: rank-one positive semidefinite addition
    DriveConfig d;
    d.seed_power_mw = 60.0;
    SteadyState bright = solve_steady_state(p, d);
    CorrelationMatrix m1 =
        correlation_from_transfer(reflected_transfer(p, bright, p.omega));
    Eigen::Matrix4d delta = m1.m() - Eigen::Matrix4d::Identity();
    CHECK(delta.cwiseAbs().maxCoeff() > 1e-3);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(delta);
    CHECK(solver.eigenvalues()(0) > -1e-12);
    // real steady state couples the detuning noise into the phase rows only
    CHECK(std::abs(delta(kXaPlus, kXaPlus)) < 1e-12);
    CHECK(delta(kXaMinus, kXaMinus) > 0.0);
}

TEST_CASE("correlation from transfer: zero-seed closed form at dc") {
    // hand-derived from the decoupled fundamental block at alpha = 0,
    // theta_beta = 0: V± = 1 ± 4 (kappa_a1/kappa_a) x / (1 ∓ x)^2
    Config config;
    CavityParams p = config.cavity_params(false);
    const double escape = p.kappa_a1 / p.kappa_a();
    for (double x : {0.05, 0.3, 0.6, 0.9}) {
        DriveConfig d;
        d.pump_power_mw = x * x * config.p_threshold_mw;
        d.relative_phase = kPi;  // beta real positive
        SteadyState ss = solve_steady_state(p, d);
        REQUIRE(ss.stable);
        CorrelationMatrix m =
            correlation_from_transfer(reflected_transfer(p, ss, 0.0));
        const double vp = 1.0 + 4.0 * escape * x / ((1.0 - x) * (1.0 - x));
        const double vm = 1.0 - 4.0 * escape * x / ((1.0 + x) * (1.0 + x));
        CHECK(std::abs(m(kXaPlus, kXaPlus) - vp) <= 1e-9 * vp);
        CHECK(std::abs(m(kXaMinus, kXaMinus) - vm) <= 1e-9 * vm);
    }
}

TEST_CASE("detection efficiency: limits and the half-loss example") {
    CorrelationMatrix m = measured_matrix();
    CorrelationMatrix same = apply_detection_efficiency(m, 1.0, 1.0);
    CHECK((same.m() - m.m()).cwiseAbs().maxCoeff() < 1e-15);

    CorrelationMatrix vac = apply_detection_efficiency(m, 0.0, 0.0);
    CHECK((vac.m() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() <
          1e-15);

    Eigen::Matrix4d half = Eigen::Matrix4d::Identity();
    half(0, 0) = 0.5;
    CorrelationMatrix h =
        apply_detection_efficiency(CorrelationMatrix::from_matrix(half), 0.5,
                                   1.0);
    CHECK(h(0, 0) == doctest::Approx(0.75).epsilon(1e-15));

    CHECK_THROWS_AS(apply_detection_efficiency(m, -0.1, 0.5),
                    std::domain_error);
    CHECK_THROWS_AS(apply_detection_efficiency(m, 0.5, 1.1),
                    std::domain_error);
}

TEST_CASE("detection efficiency preserves physicality") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        CorrelationMatrix m = random_physical(rng);
        REQUIRE(m.is_physical(1e-9));
        CorrelationMatrix lossy = apply_detection_efficiency(m, 0.7, 0.9);
        CHECK(lossy.is_physical(1e-9));
    }
}

TEST_CASE("raw criterion: vacuum is not evaluable") {
    CorrelationMatrix id;
    RawCriterion r = inseparability_raw(id);
    CHECK(r.status == CriterionStatus::kNotEvaluable);
    CHECK(plot_value(r) == 1.0);
}

TEST_CASE("raw criterion: ideal two-mode squeezed state") {
    for (double r : {0.2, 0.5, 1.0}) {
        RawCriterion raw = inseparability_raw(two_mode_squeezed(r));
        REQUIRE(raw.status == CriterionStatus::kEvaluable);
        CHECK(raw.k_plus == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(raw.k_minus == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(raw.value == doctest::Approx(std::exp(-2.0 * r)).epsilon(1e-12));
    }
}

TEST_CASE("raw criterion: measured matrix before standard form") {
    RawCriterion raw = inseparability_raw(measured_matrix());
    REQUIRE(raw.status == CriterionStatus::kEvaluable);
    // frozen from an independent evaluation of Eqs. (5)-(7)
    CHECK(raw.k_plus == doctest::Approx(0.76564149).epsilon(1e-7));
    CHECK(raw.k_minus == doctest::Approx(1.03723771).epsilon(1e-7));
    CHECK(raw.value == doctest::Approx(0.84641266).epsilon(1e-7));
}

TEST_CASE("raw criterion: opposite deviations from vacuum are not evaluable") {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.diagonal() << 0.8, 1.3, 1.2, 0.9;  // signs disagree per quadrature
    RawCriterion r =
        inseparability_raw(CorrelationMatrix::from_matrix(m));
    CHECK(r.status == CriterionStatus::kNotEvaluable);
}

TEST_CASE("standard form: symmetric state needs no transformation") {
    CorrelationMatrix tms = two_mode_squeezed(0.4);
    InseparabilityResult sf = standard_form(tms);
    REQUIRE(sf.status == CriterionStatus::kEvaluable);
    CHECK(std::abs(sf.r_a) < 1e-6);
    CHECK(std::abs(sf.r_b) < 1e-6);
    CHECK(sf.value == doctest::Approx(std::exp(-0.8)).epsilon(1e-9));
    CHECK(sf.k == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("standard form: measured matrix regression") {
    InseparabilityResult sf = standard_form(measured_matrix());
    REQUIRE(sf.status == CriterionStatus::kEvaluable);
    // frozen from the prototype pipeline (grid oracle agrees to 1e-6);
    // the published r_a = 0.11 is not reproducible from the rounded
    // public matrix -- see the acceptance suite output
    CHECK(sf.value == doctest::Approx(0.74908538).epsilon(1e-5));
    CHECK(sf.r_a == doctest::Approx(0.21588).epsilon(1e-3));
    CHECK(sf.r_b == doctest::Approx(0.15746).epsilon(1e-3));
    // the constraint holds on the transformed matrix
    RawCriterion raw = inseparability_raw(sf.standard_form);
    REQUIRE(raw.status == CriterionStatus::kEvaluable);
    CHECK(std::abs(raw.k_plus - raw.k_minus) < 1e-6);
    CHECK(raw.value == doctest::Approx(sf.value).epsilon(1e-9));
}

TEST_CASE("standard form: invariant under prior local scalings") {
    CorrelationMatrix m = measured_matrix();
    double base = standard_form(m).value;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(-0.3, 0.3);
    for (int i = 0; i < 10; ++i) {
        double sa = uni(rng), sb = uni(rng);
        InseparabilityResult sf = standard_form(local_scaling(m, sa, sb));
        REQUIRE(sf.status == CriterionStatus::kEvaluable);
        CHECK(sf.value == doctest::Approx(base).epsilon(1e-6));
        // the optimal parameters absorb the applied scaling
        CHECK(sf.r_a + sa == doctest::Approx(0.21588).epsilon(2e-3));
        CHECK(sf.r_b + sb == doctest::Approx(0.15746).epsilon(2e-3));
    }
}

TEST_CASE("standard form: separable classical states stay at or above one") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 30; ++i) {
        // vacuum plus classical correlated displacement noise
        Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
        int terms = 1 + static_cast<int>(3.0 * uni(rng));
        for (int t = 0; t < terms; ++t) {
            Eigen::Vector4d g;
            g << 2.0 * uni(rng) - 1.0, 2.0 * uni(rng) - 1.0,
                2.0 * uni(rng) - 1.0, 2.0 * uni(rng) - 1.0;
            m += g * g.transpose();
        }
        m(0, 1) = m(1, 0) = 0.0;  // keep the measured-structure zeros
        m(2, 3) = m(3, 2) = 0.0;
        InseparabilityResult sf =
            standard_form(CorrelationMatrix::from_matrix(m));
        if (sf.status == CriterionStatus::kEvaluable) {
            CHECK(sf.value >= 1.0 - 1e-6);
        }
    }
}

TEST_CASE("standard form: losses never improve the criterion") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        CorrelationMatrix m = random_physical(rng);
        double eta_a = 0.5 + 0.5 * uni(rng);
        double eta_b = 0.5 + 0.5 * uni(rng);
        double shrink = 0.5 + 0.5 * uni(rng);
        double i_hi = std::min(
            plot_value(standard_form(apply_detection_efficiency(m, eta_a, eta_b))),
            1.0);
        double i_lo = std::min(
            plot_value(standard_form(apply_detection_efficiency(
                m, shrink * eta_a, shrink * eta_b))),
            1.0);
        CHECK(i_lo >= i_hi - 1e-9);
    }
}

TEST_CASE("standard form: empty constraint manifold yields a diagnostic") {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.diagonal() << 10.0, 10.0, 0.1, 0.1;
    InseparabilityResult sf =
        standard_form(CorrelationMatrix::from_matrix(m));
    CHECK(sf.status == CriterionStatus::kNotEvaluable);
    CHECK(plot_value(sf) == 1.0);
    CHECK(!sf.diagnostic.empty());
}

TEST_CASE("ellipse contour: vacuum circle and the measured amplitude pair") {
    CorrelationMatrix id;
    EllipseContour circle = ellipse_contour(id, kXaPlus, kXbPlus);
    CHECK(circle.semi_major == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(circle.semi_minor == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(circle.orientation == 0.0);

    CorrelationMatrix m = measured_matrix();
    EllipseContour amp = ellipse_contour(m, kXaPlus, kXbPlus);
    // closed-form 2x2 eigenvalues from trace and determinant
    const double tr = 0.71 + 0.83;
    const double det = 0.71 * 0.83 - 0.25 * 0.25;
    const double disc = std::sqrt(tr * tr - 4.0 * det);
    CHECK(amp.semi_major ==
          doctest::Approx(std::sqrt(0.5 * (tr + disc))).epsilon(1e-12));
    CHECK(amp.semi_minor ==
          doctest::Approx(std::sqrt(0.5 * (tr - disc))).epsilon(1e-12));
    // amplitude quantum correlation: contour dips inside the vacuum circle
    CHECK(amp.semi_minor < 1.0);

    CHECK_THROWS_AS(ellipse_contour(m, kXaPlus, kXaPlus), std::domain_error);
    Eigen::Matrix4d bad = Eigen::Matrix4d::Identity();
    bad(0, 2) = bad(2, 0) = 2.0;  // indefinite 2x2 marginal
    CHECK_THROWS_AS(
        ellipse_contour(CorrelationMatrix::from_matrix(bad), kXaPlus, kXbPlus),
        std::domain_error);
}

TEST_CASE("correlation matrix: construction guards and physicality") {
    Eigen::Matrix4d asym = Eigen::Matrix4d::Identity();
    asym(0, 1) = 1e-6;
    CHECK_THROWS_AS(CorrelationMatrix::from_matrix(asym), std::domain_error);
    Eigen::Matrix4d neg = Eigen::Matrix4d::Identity();
    neg(2, 2) = -1.0;
    CHECK_THROWS_AS(CorrelationMatrix::from_matrix(neg), std::domain_error);

    CHECK(CorrelationMatrix().is_physical(0.0));
    CHECK(measured_matrix().min_physicality_eigenvalue() ==
          doctest::Approx(0.0390314).epsilon(1e-4));
}

TEST_CASE("correlation matrix: serialization round trip is exact") {
    std::mt19937_64 rng(29);
    CorrelationMatrix m = random_physical(rng);
    std::string text = m.serialize();
    std::istringstream in(text);
    CorrelationMatrix back = CorrelationMatrix::parse(in);
    CHECK((back.m() - m.m()).cwiseAbs().maxCoeff() == 0.0);

    std::istringstream bad("# header only\n1 2 3\n");
    CHECK_THROWS(CorrelationMatrix::parse(bad));
}
