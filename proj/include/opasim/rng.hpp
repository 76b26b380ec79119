#ifndef OPASIM_RNG_HPP
#define OPASIM_RNG_HPP

#include <cstdint>
#include <random>

namespace opasim {

// Standard-normal deviates that are byte-identical across platforms for a
// fixed seed: mt19937_64 (standardized output) + explicit Box-Muller.
// std::normal_distribution is implementation-defined and unsuitable here.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

    double operator()();

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace opasim

#endif
