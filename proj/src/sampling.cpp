#include "opasim/sampling.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "opasim/rng.hpp"

namespace opasim {

namespace {

double sample_mean(const std::vector<std::array<double, 2>>& v, int c) {
    double s = 0.0;
    for (const auto& p : v) s += p[c];
    return s / static_cast<double>(v.size());
}

double sample_variance(const std::vector<std::array<double, 2>>& v, int c) {
    const double mu = sample_mean(v, c);
    double s = 0.0;
    for (const auto& p : v) s += (p[c] - mu) * (p[c] - mu);
    return s / static_cast<double>(v.size() - 1);
}

double sample_covariance(const std::vector<std::array<double, 2>>& v) {
    const double mu0 = sample_mean(v, 0);
    const double mu1 = sample_mean(v, 1);
    double s = 0.0;
    for (const auto& p : v) s += (p[0] - mu0) * (p[1] - mu1);
    return s / static_cast<double>(v.size() - 1);
}

int channel_of(Quadrature q, int color) {
    // color 0 = fundamental, 1 = second harmonic
    return 2 * color + (q == Quadrature::kPlus ? 0 : 1);
}

void write_section(std::ostream& out, const char* name,
                   const std::vector<std::array<double, 2>>& v) {
    out << "# section: " << name << "\n";
    char buf[80];
    for (const auto& p : v) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", p[0], p[1]);
        out << buf;
    }
}

}  // namespace

std::array<MeasurementRun, 4> synthesize_runs(const CorrelationMatrix& m,
                                              std::size_t n,
                                              std::uint64_t seed,
                                              const SynthesisOptions& options) {
    if (n < 2) {
        throw std::domain_error("synthesize_runs: need at least two samples");
    }
    if (!m.is_physical(1e-9)) {
        throw std::domain_error("synthesize_runs: target matrix not physical");
    }
    if (options.v_dark < 0.0 || options.v_excess < 0.0) {
        throw std::domain_error("synthesize_runs: negative noise variance");
    }

    // square root of the covariance; clamp the tiny negative eigenvalues a
    // physical-but-singular matrix can carry
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(m.m());
    Eigen::Vector4d ev = solver.eigenvalues().cwiseMax(0.0);
    Eigen::Matrix4d root =
        solver.eigenvectors() * ev.cwiseSqrt().asDiagonal();

    GaussianSource gauss(seed);
    std::vector<std::array<double, 4>> quad(n);
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::Vector4d z(gauss(), gauss(), gauss(), gauss());
        Eigen::Vector4d x = root * z;
        quad[i] = {x(0), x(1), x(2), x(3)};
    }

    const double s_dark = std::sqrt(options.v_dark);
    const double s_excess = std::sqrt(options.v_excess);

    const std::array<std::array<Quadrature, 2>, 4> settings = {{
        {Quadrature::kPlus, Quadrature::kPlus},
        {Quadrature::kPlus, Quadrature::kMinus},
        {Quadrature::kMinus, Quadrature::kPlus},
        {Quadrature::kMinus, Quadrature::kMinus},
    }};

    std::array<MeasurementRun, 4> runs;
    for (int r = 0; r < 4; ++r) {
        MeasurementRun& run = runs[r];
        run.setting_a = settings[r][0];
        run.setting_b = settings[r][1];
        run.seed = seed;
        run.v_dark = options.v_dark;
        run.v_excess = options.v_excess;
        const int ca = channel_of(run.setting_a, 0);
        const int cb = channel_of(run.setting_b, 1);
        run.samples.resize(n);
        run.vacuum_reference.resize(n);
        run.dark_reference.resize(n);
        run.excess_reference.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double sig_a = quad[i][ca];
            double sig_b = quad[i][cb];
            if (s_excess > 0.0) {
                sig_a += s_excess * gauss();
                sig_b += s_excess * gauss();
            }
            if (s_dark > 0.0) {
                sig_a += s_dark * gauss();
                sig_b += s_dark * gauss();
            }
            run.samples[i] = {sig_a, sig_b};

            double vac_a = gauss();
            double vac_b = gauss();
            if (s_dark > 0.0) {
                vac_a += s_dark * gauss();
                vac_b += s_dark * gauss();
            }
            run.vacuum_reference[i] = {vac_a, vac_b};

            run.dark_reference[i] = {s_dark > 0.0 ? s_dark * gauss() : 0.0,
                                     s_dark > 0.0 ? s_dark * gauss() : 0.0};

            double exc_a = s_excess > 0.0 ? s_excess * gauss() : 0.0;
            double exc_b = s_excess > 0.0 ? s_excess * gauss() : 0.0;
            if (s_dark > 0.0) {
                exc_a += s_dark * gauss();
                exc_b += s_dark * gauss();
            }
            run.excess_reference[i] = {exc_a, exc_b};
        }
    }
    return runs;
}

CorrelationMatrix estimate_correlation_matrix(
    const std::array<MeasurementRun, 4>& runs) {
    bool seen[2][2] = {{false, false}, {false, false}};
    const std::size_t n = runs[0].samples.size();
    for (const MeasurementRun& run : runs) {
        if (run.samples.empty() || run.vacuum_reference.empty() ||
            run.dark_reference.empty() || run.excess_reference.empty()) {
            throw std::domain_error(
                "estimate_correlation_matrix: empty sequence in a run");
        }
        if (run.samples.size() != n) {
            throw std::domain_error(
                "estimate_correlation_matrix: mismatched sample lengths");
        }
        seen[static_cast<int>(run.setting_a)][static_cast<int>(run.setting_b)] =
            true;
    }
    if (!(seen[0][0] && seen[0][1] && seen[1][0] && seen[1][1])) {
        throw std::domain_error(
            "estimate_correlation_matrix: need all four settings");
    }

    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    Eigen::Vector4d diag_sum = Eigen::Vector4d::Zero();
    Eigen::Vector4i diag_count = Eigen::Vector4i::Zero();

    for (const MeasurementRun& run : runs) {
        double denom[2];
        double vnorm[2];
        for (int c = 0; c < 2; ++c) {
            const double v_sig = sample_variance(run.samples, c);
            const double v_vac = sample_variance(run.vacuum_reference, c);
            const double v_dark = sample_variance(run.dark_reference, c);
            const double v_exc = sample_variance(run.excess_reference, c);
            denom[c] = v_vac - v_dark;
            if (!(denom[c] > 0.0)) {
                throw std::runtime_error(
                    "estimate_correlation_matrix: vacuum reference does not "
                    "clear dark noise");
            }
            vnorm[c] =
                (v_sig - v_dark) / denom[c] - (v_exc - v_dark) / denom[c];
        }
        const int ca = channel_of(run.setting_a, 0);
        const int cb = channel_of(run.setting_b, 1);
        diag_sum(ca) += vnorm[0];
        diag_count(ca) += 1;
        diag_sum(cb) += vnorm[1];
        diag_count(cb) += 1;
        const double cov = sample_covariance(run.samples) /
                           std::sqrt(denom[0] * denom[1]);
        m(ca, cb) = cov;
        m(cb, ca) = cov;
    }
    for (int i = 0; i < 4; ++i) m(i, i) = diag_sum(i) / diag_count(i);
    // single-color cross-quadrature entries are never jointly measured
    m(0, 1) = m(1, 0) = 0.0;
    m(2, 3) = m(3, 2) = 0.0;

    CorrelationMatrix out = CorrelationMatrix::from_matrix(m);
    if (!out.is_physical(1e-9)) {
        std::cerr << "estimate_correlation_matrix: warning: estimated matrix "
                     "is marginally non-physical (min eig "
                  << out.min_physicality_eigenvalue() << ")\n";
    }
    return out;
}

std::string setting_suffix(const MeasurementRun& run) {
    std::string s;
    s += run.setting_a == Quadrature::kPlus ? 'p' : 'm';
    s += run.setting_b == Quadrature::kPlus ? 'p' : 'm';
    return s;
}

void write_run(std::ostream& out, const MeasurementRun& run) {
    out << "# setting: " << quadrature_label(run.setting_a)
        << quadrature_label(run.setting_b) << "\n";
    out << "# seed: " << run.seed << "\n";
    out << "# n: " << run.samples.size() << "\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", run.v_dark);
    out << "# v_dark: " << buf << "\n";
    std::snprintf(buf, sizeof(buf), "%.17g", run.v_excess);
    out << "# v_excess: " << buf << "\n";
    write_section(out, "samples", run.samples);
    write_section(out, "vacuum", run.vacuum_reference);
    write_section(out, "dark", run.dark_reference);
    write_section(out, "excess", run.excess_reference);
}

MeasurementRun read_run(std::istream& in) {
    MeasurementRun run;
    std::vector<std::array<double, 2>>* section = nullptr;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string key;
            ls >> key;
            if (key == "setting:") {
                std::string v;
                ls >> v;
                if (v.size() != 2 || (v[0] != '+' && v[0] != '-') ||
                    (v[1] != '+' && v[1] != '-')) {
                    throw std::runtime_error("read_run: bad setting " + v);
                }
                run.setting_a =
                    v[0] == '+' ? Quadrature::kPlus : Quadrature::kMinus;
                run.setting_b =
                    v[1] == '+' ? Quadrature::kPlus : Quadrature::kMinus;
            } else if (key == "seed:") {
                ls >> run.seed;
            } else if (key == "v_dark:") {
                ls >> run.v_dark;
            } else if (key == "v_excess:") {
                ls >> run.v_excess;
            } else if (key == "section:") {
                std::string name;
                ls >> name;
                if (name == "samples") section = &run.samples;
                else if (name == "vacuum") section = &run.vacuum_reference;
                else if (name == "dark") section = &run.dark_reference;
                else if (name == "excess") section = &run.excess_reference;
                else throw std::runtime_error("read_run: bad section " + name);
            }
            continue;
        }
        if (section == nullptr) {
            throw std::runtime_error("read_run: data before any section");
        }
        std::istringstream ls(line);
        std::array<double, 2> p{};
        if (!(ls >> p[0] >> p[1])) {
            throw std::runtime_error("read_run: bad sample line: " + line);
        }
        section->push_back(p);
    }
    return run;
}

void save_run(const std::string& path, const MeasurementRun& run) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_run: cannot open " + path);
    write_run(out, run);
}

MeasurementRun load_run(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_run: cannot open " + path);
    return read_run(in);
}

}  // namespace opasim
