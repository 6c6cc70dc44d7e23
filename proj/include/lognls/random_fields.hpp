#pragma once
#include <cstdint>
#include <random>

#include "lognls/grid.hpp"

namespace lognls {

// Deterministic normal deviates: mt19937_64 is fully specified by the
// standard; Box-Muller is hand-rolled because std::normal_distribution is
// implementation-defined and would break cross-toolchain reproducibility.
class NormalRng {
  public:
    explicit NormalRng(std::uint64_t seed) : eng_(seed) {}
    double next();
    double uniform();  // in [0, 1)

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Band-limited complex field under a bulk Gaussian envelope: random plane
// waves with per-axis integer frequencies |m| <= band_limit, multiplied by
// exp(-|x|^2 / (2 sigma^2)) so the samples stay away from the boundary.
Field random_bandlimited_field(const Grid& g, std::uint64_t seed, int band_limit,
                               double envelope_sigma);

}  // namespace lognls
