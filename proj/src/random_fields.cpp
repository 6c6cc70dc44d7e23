#include "lognls/random_fields.hpp"

#include <cmath>
#include <stdexcept>

namespace lognls {

double NormalRng::uniform() {
    // 53-bit mantissa draw in [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double NormalRng::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    const double two_pi = 6.283185307179586476925286766559;
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(two_pi * u2);
    have_spare_ = true;
    return r * std::cos(two_pi * u2);
}

Field random_bandlimited_field(const Grid& g, std::uint64_t seed, int band_limit,
                               double envelope_sigma) {
    if (band_limit < 0 || band_limit >= g.points / 2)
        throw std::invalid_argument("random_bandlimited_field: band_limit out of range");
    if (!(envelope_sigma > 0.0))
        throw std::invalid_argument("random_bandlimited_field: envelope_sigma must be positive");

    NormalRng rng(seed);
    const int B = band_limit;
    const int nb = 2 * B + 1;
    const int M = g.points;

    // Coefficients drawn in a fixed mode order (axis 0 slowest, frequency
    // -B..B per axis), placed in the DFT spectrum. The sample value at
    // x_j = -L + j*h of mode m is e^{i(pi/L) m x_j} = (-1)^m e^{2*pi*i*m*j/M},
    // so the sign is folded into the coefficient and one inverse transform
    // synthesizes the sum of plane waves exactly.
    std::size_t n_modes = 1;
    for (int d = 0; d < g.dim; ++d) n_modes *= static_cast<std::size_t>(nb);

    std::vector<cplx> spectrum(g.size(), cplx(0.0, 0.0));
    const auto Msz = static_cast<std::size_t>(M);
    for (std::size_t m = 0; m < n_modes; ++m) {
        cplx c(rng.next(), rng.next());
        std::size_t rem = m;
        int mv[3] = {0, 0, 0};
        for (int d = g.dim - 1; d >= 0; --d) {
            mv[d] = static_cast<int>(rem % static_cast<std::size_t>(nb)) - B;
            rem /= static_cast<std::size_t>(nb);
        }
        int msum = 0;
        std::size_t flat = 0;
        for (int d = 0; d < g.dim; ++d) {
            msum += mv[d];
            std::size_t bin = static_cast<std::size_t>((mv[d] + M) % M);
            flat = flat * Msz + bin;
        }
        if (msum & 1) c = -c;
        spectrum[flat] = c * static_cast<double>(g.size());  // cancel inverse 1/M^N
    }

    Field f;
    f.grid = g;
    f.values = fft_inverse(g, spectrum);

    const double inv2s2 = 1.0 / (2.0 * envelope_sigma * envelope_sigma);
    int idx[3];
    for (std::size_t i = 0; i < f.size(); ++i) {
        unflatten(g, i, idx);
        double r2 = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            double x = g.coord(static_cast<std::size_t>(idx[d]));
            r2 += x * x;
        }
        f.values[i] *= std::exp(-r2 * inv2s2);
    }
    return f;
}

}  // namespace lognls
