#include "lognls/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "lognls/errors.hpp"

namespace lognls {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// FFTW's planner is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    std::size_t n = 0;

    PlanPair(int dim, int M) {
        n = 1;
        int dims[3] = {M, M, M};
        for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(M);
        std::lock_guard<std::mutex> lock(planner_mutex());
        in = fftw_alloc_complex(n);
        out = fftw_alloc_complex(n);
        fwd = fftw_plan_dft(dim, dims, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft(dim, dims, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!fwd || !bwd) throw numerical_error("fftw plan creation failed");
    }
    ~PlanPair() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        fftw_free(in);
        fftw_free(out);
    }
    PlanPair(const PlanPair&) = delete;
    PlanPair& operator=(const PlanPair&) = delete;
};

// One plan cache per thread: workers transform concurrently without locking
// around execution.
PlanPair& plans_for(int dim, int M) {
    thread_local std::map<std::pair<int, int>, std::unique_ptr<PlanPair>> cache;
    auto key = std::make_pair(dim, M);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<PlanPair>(dim, M)).first;
    return *it->second;
}

std::vector<cplx> run_plan(const Grid& g, const std::vector<cplx>& in, bool forward) {
    if (in.size() != g.size()) throw std::invalid_argument("fft: size mismatch");
    PlanPair& p = plans_for(g.dim, g.points);
    for (std::size_t i = 0; i < p.n; ++i) {
        p.in[i][0] = in[i].real();
        p.in[i][1] = in[i].imag();
    }
    fftw_execute(forward ? p.fwd : p.bwd);
    std::vector<cplx> out(p.n);
    if (forward) {
        for (std::size_t i = 0; i < p.n; ++i) out[i] = cplx(p.out[i][0], p.out[i][1]);
    } else {
        const double s = 1.0 / static_cast<double>(p.n);
        for (std::size_t i = 0; i < p.n; ++i)
            out[i] = cplx(p.out[i][0] * s, p.out[i][1] * s);
    }
    return out;
}

bool power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

Grid make_grid(int dim, double half_width, int points) {
    // Grid parameters always originate in user configuration (or a snapshot
    // header), so they get the config error class.
    if (dim < 1 || dim > 3) throw config_error("make_grid: dim must be 1, 2 or 3");
    if (!(half_width > 0.0)) throw config_error("make_grid: half_width must be positive");
    if (!power_of_two(points) || points < 16)
        throw config_error("make_grid: points must be a power of two >= 16");
    Grid g;
    g.dim = dim;
    g.half_width = half_width;
    g.points = points;
    g.spacing = 2.0 * half_width / static_cast<double>(points);
    g.wavenumbers.resize(points);
    const double base = kPi / half_width;
    for (int m = 0; m < points; ++m) {
        int freq = (m < points / 2) ? m : m - points;
        g.wavenumbers[m] = base * static_cast<double>(freq);
    }
    return g;
}

Field make_field(const Grid& g) {
    Field f;
    f.grid = g;
    f.values.assign(g.size(), cplx(0.0, 0.0));
    return f;
}

void unflatten(const Grid& g, std::size_t flat, int idx[3]) {
    idx[0] = idx[1] = idx[2] = 0;
    const auto M = static_cast<std::size_t>(g.points);
    for (int d = g.dim - 1; d >= 0; --d) {
        idx[d] = static_cast<int>(flat % M);
        flat /= M;
    }
}

std::vector<cplx> fft_forward(const Grid& g, const std::vector<cplx>& in) {
    return run_plan(g, in, true);
}

std::vector<cplx> fft_inverse(const Grid& g, const std::vector<cplx>& in) {
    return run_plan(g, in, false);
}

double integrate(const Grid& g, const std::vector<double>& samples) {
    if (samples.size() != g.size()) throw std::invalid_argument("integrate: size mismatch");
    double sum = 0.0;
    for (double s : samples) sum += s;
    return sum * g.cell_volume();
}

double kinetic(const Field& f) {
    const Grid& g = f.grid;
    std::vector<cplx> hat = fft_forward(g, f.values);
    double sum = 0.0;
    int idx[3];
    for (std::size_t i = 0; i < hat.size(); ++i) {
        unflatten(g, i, idx);
        double k2 = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            double k = g.wavenumbers[idx[d]];
            k2 += k * k;
        }
        sum += k2 * std::norm(hat[i]);
    }
    // Parseval: h^N * sum|u|^2 = h^N/M^N * sum|u_hat|^2 for the unnormalized DFT.
    return sum * g.cell_volume() / static_cast<double>(g.size());
}

Field laplacian(const Field& f) {
    const Grid& g = f.grid;
    std::vector<cplx> hat = fft_forward(g, f.values);
    int idx[3];
    for (std::size_t i = 0; i < hat.size(); ++i) {
        unflatten(g, i, idx);
        double k2 = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            double k = g.wavenumbers[idx[d]];
            k2 += k * k;
        }
        hat[i] *= -k2;
    }
    Field out;
    out.grid = g;
    out.values = fft_inverse(g, hat);
    return out;
}

Field shift_field(const Field& f, const std::vector<double>& offset) {
    const Grid& g = f.grid;
    if (static_cast<int>(offset.size()) != g.dim)
        throw std::invalid_argument("shift_field: offset dimension mismatch");
    for (double y : offset)
        if (!std::isfinite(y)) throw std::invalid_argument("shift_field: offset not finite");

    // Integer-cell offsets are realized as exact index rotation.
    bool integral = true;
    std::vector<long> cells(g.dim);
    for (int d = 0; d < g.dim; ++d) {
        double c = offset[d] / g.spacing;
        double r = std::round(c);
        if (std::abs(c - r) > 1e-12) {
            integral = false;
            break;
        }
        long m = static_cast<long>(r) % g.points;
        if (m < 0) m += g.points;
        cells[d] = m;
    }

    Field out;
    out.grid = g;
    if (integral) {
        out.values.resize(g.size());
        const auto M = static_cast<std::size_t>(g.points);
        int idx[3];
        for (std::size_t i = 0; i < g.size(); ++i) {
            unflatten(g, i, idx);
            std::size_t src = 0;
            for (int d = 0; d < g.dim; ++d) {
                // out(x) = u(x - y): source index is (i - cells) mod M
                std::size_t s = (static_cast<std::size_t>(idx[d]) + M -
                                 static_cast<std::size_t>(cells[d])) % M;
                src = src * M + s;
            }
            out.values[i] = f.values[src];
        }
        return out;
    }

    std::vector<cplx> hat = fft_forward(g, f.values);
    int idx[3];
    for (std::size_t i = 0; i < hat.size(); ++i) {
        unflatten(g, i, idx);
        double phase = 0.0;
        for (int d = 0; d < g.dim; ++d) phase -= g.wavenumbers[idx[d]] * offset[d];
        hat[i] *= cplx(std::cos(phase), std::sin(phase));
    }
    out.values = fft_inverse(g, hat);
    return out;
}

void check_finite(const Field& f, const char* where) {
    for (const cplx& v : f.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw numerical_error(std::string(where) + ": non-finite field value");
}

}  // namespace lognls
