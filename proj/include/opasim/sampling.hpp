#ifndef OPASIM_SAMPLING_HPP
#define OPASIM_SAMPLING_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "opasim/correlation.hpp"

namespace opasim {

// Which quadrature each homodyne detector locked to, one entry per color.
enum class Quadrature : int { kPlus = 0, kMinus = 1 };

inline char quadrature_label(Quadrature q) {
    return q == Quadrature::kPlus ? '+' : '-';
}

// One homodyne acquisition: demodulated signal pairs plus the calibration
// references recorded alongside (shot noise, detector dark noise, and the
// signal-without-LO excess reference used for carrier-rejection artifact
// correction).
struct MeasurementRun {
    Quadrature setting_a = Quadrature::kPlus;
    Quadrature setting_b = Quadrature::kPlus;
    std::vector<std::array<double, 2>> samples;
    std::vector<std::array<double, 2>> vacuum_reference;
    std::vector<std::array<double, 2>> dark_reference;
    std::vector<std::array<double, 2>> excess_reference;
    // synthesis metadata, carried through serialization
    std::uint64_t seed = 0;
    double v_dark = 0.0;
    double v_excess = 0.0;
};

struct SynthesisOptions {
    // 15 dB shot-noise-to-dark-noise clearance by default
    double v_dark = 0.03162277660168379;
    double v_excess = 0.0;
};

constexpr std::size_t kDefaultSampleCount = 260000;

// Draws n samples of the 4-variate zero-mean Gaussian with covariance m
// (matrix square root via eigendecomposition) and emits the coordinate
// pair of each of the four detector settings (++, +-, -+, --), in that
// order. Dark noise of variance v_dark is added independently to every
// recorded channel, including the references. Deterministic for a fixed
// seed. Throws std::domain_error for a non-physical target matrix.
std::array<MeasurementRun, 4> synthesize_runs(const CorrelationMatrix& m,
                                              std::size_t n,
                                              std::uint64_t seed,
                                              const SynthesisOptions& options =
                                                  SynthesisOptions{});

// Vacuum-normalized, dark-offset- and excess-corrected correlation matrix
// from the four settings. Single-color cross-quadrature entries are zero
// by construction (never jointly measured).
CorrelationMatrix estimate_correlation_matrix(
    const std::array<MeasurementRun, 4>& runs);

// Columnar plain-text run format ('#' headers with setting, seed, n and
// calibration variances; sections of one sample pair per line).
void write_run(std::ostream& out, const MeasurementRun& run);
MeasurementRun read_run(std::istream& in);
void save_run(const std::string& path, const MeasurementRun& run);
MeasurementRun load_run(const std::string& path);

// Canonical file suffix per setting, e.g. "pp", "pm", "mp", "mm".
std::string setting_suffix(const MeasurementRun& run);

}  // namespace opasim

#endif
