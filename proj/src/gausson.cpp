#include "lognls/gausson.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lognls {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kModFloor = 1e-300;
}  // namespace

Field gausson_field(const GaussonParams& p, const Grid& g) {
    if (p.dim != g.dim) throw std::invalid_argument("gausson_field: dimension mismatch");
    const double amp = std::exp(0.5 * (p.omega + static_cast<double>(p.dim)));
    Field f = make_field(g);
    int idx[3];
    for (std::size_t i = 0; i < f.size(); ++i) {
        unflatten(g, i, idx);
        double r2 = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            double x = g.coord(static_cast<std::size_t>(idx[d]));
            r2 += x * x;
        }
        f.values[i] = cplx(amp * std::exp(-0.5 * r2), 0.0);
    }
    return f;
}

double d_closed(double omega, int dim) {
    if (dim < 1) throw std::invalid_argument("d_closed: dim must be >= 1");
    return 0.5 * std::pow(kPi, 0.5 * dim) * std::exp(omega + static_cast<double>(dim));
}

double elliptic_residual(const Field& f, double omega) {
    double q = 0.0;
    for (const cplx& v : f.values) q += std::norm(v);
    if (q == 0.0) throw std::invalid_argument("elliptic_residual: zero field");

    Field lap = laplacian(f);
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double m2 = std::norm(f.values[i]);
        double lg = (m2 >= kModFloor) ? std::log(m2) : 0.0;
        cplx r = -lap.values[i] + omega * f.values[i] - f.values[i] * lg;
        sum += std::norm(r);
    }
    return std::sqrt(sum / q);  // cell volume cancels in the ratio
}

Field orbit_element(const GaussonParams& p, double theta, const std::vector<double>& y,
                    const Grid& g) {
    if (p.dim != g.dim) throw std::invalid_argument("orbit_element: dimension mismatch");
    if (static_cast<int>(y.size()) != g.dim)
        throw std::invalid_argument("orbit_element: offset dimension mismatch");
    double ymax = 0.0;
    for (double c : y) {
        if (!std::isfinite(c)) throw std::invalid_argument("orbit_element: offset not finite");
        ymax = std::max(ymax, std::abs(c));
    }
    if (ymax > 0.5 * g.half_width)
        throw std::invalid_argument("orbit_element: offset too close to the boundary");

    const double amp = std::exp(0.5 * (p.omega + static_cast<double>(p.dim)));
    const cplx phase(std::cos(theta), std::sin(theta));
    Field f = make_field(g);
    int idx[3];
    for (std::size_t i = 0; i < f.size(); ++i) {
        unflatten(g, i, idx);
        double r2 = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            double x = g.coord(static_cast<std::size_t>(idx[d])) - y[d];
            r2 += x * x;
        }
        f.values[i] = phase * (amp * std::exp(-0.5 * r2));
    }
    return f;
}

}  // namespace lognls
