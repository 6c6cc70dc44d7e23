#pragma once
#include <complex>
#include <cstddef>
#include <vector>

namespace lognls {

using cplx = std::complex<double>;

// Uniform periodic tensor grid on [-L, L)^dim, M points per axis.
// Sample coordinates x_i = -L + i*h with h = 2L/M. Wavenumbers follow the
// standard DFT layout: k[m] = (pi/L)*m for m in {0..M/2-1, -M/2..-1}.
struct Grid {
    int dim = 1;
    double half_width = 0.0;
    int points = 0;
    double spacing = 0.0;
    std::vector<double> wavenumbers;  // per-axis, length points, DFT order

    std::size_t size() const {
        std::size_t n = 1;
        for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(points);
        return n;
    }
    double coord(std::size_t i) const { return -half_width + spacing * static_cast<double>(i); }
    double cell_volume() const {
        double v = 1.0;
        for (int d = 0; d < dim; ++d) v *= spacing;
        return v;
    }
    bool operator==(const Grid& o) const {
        return dim == o.dim && half_width == o.half_width && points == o.points;
    }
};

struct Field {
    Grid grid;
    std::vector<cplx> values;

    std::size_t size() const { return values.size(); }
    cplx& operator[](std::size_t i) { return values[i]; }
    const cplx& operator[](std::size_t i) const { return values[i]; }
};

Grid make_grid(int dim, double half_width, int points);
Field make_field(const Grid& g);  // zero-initialized

// Decompose a flat row-major index into per-axis indices (idx[0] slowest).
void unflatten(const Grid& g, std::size_t flat, int idx[3]);

// Unnormalized forward DFT / inverse divides by M^dim.
std::vector<cplx> fft_forward(const Grid& g, const std::vector<cplx>& in);
std::vector<cplx> fft_inverse(const Grid& g, const std::vector<cplx>& in);

double integrate(const Grid& g, const std::vector<double>& samples);
double kinetic(const Field& f);          // integral of |grad u|^2 (unhalved)
Field laplacian(const Field& f);
Field shift_field(const Field& f, const std::vector<double>& offset);

void check_finite(const Field& f, const char* where);

}  // namespace lognls
