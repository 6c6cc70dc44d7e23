#include "lognls/functionals.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "lognls/errors.hpp"

namespace lognls {

namespace {

const double kSeam = std::exp(-3.0);      // branch point of A
const double kE3 = std::exp(-3.0);
const double kE6 = std::exp(-6.0);
constexpr double kModFloor = 1e-300;      // 0*log0 convention on |u|^2

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

double charge(const Field& f) {
    double sum = 0.0;
    for (const cplx& v : f.values) sum += std::norm(v);
    return sum * f.grid.cell_volume();
}

double entropy_term(const Field& f) {
    double sum = 0.0;
    for (const cplx& v : f.values) {
        double m2 = std::norm(v);
        if (m2 >= kModFloor) sum += m2 * std::log(m2);
    }
    return sum * f.grid.cell_volume();
}

double energy(const Field& f) { return 0.5 * kinetic(f) - 0.5 * entropy_term(f); }

double action(const Field& f, double omega) {
    return energy(f) + 0.5 * (omega + 1.0) * charge(f);
}

double nehari(const Field& f, double omega) {
    return kinetic(f) + omega * charge(f) - entropy_term(f);
}

double a_branch_small(double s) {
    if (s <= 0.0) return 0.0;
    return -2.0 * s * s * std::log(s);
}

double a_branch_large(double s) { return 3.0 * s * s + 4.0 * kE3 * s - kE6; }

double a_prime_branch_small(double s) {
    if (s <= 0.0) return 0.0;
    return -4.0 * s * std::log(s) - 2.0 * s;
}

double a_prime_branch_large(double s) { return 6.0 * s + 4.0 * kE3; }

double a_pointwise(double s) {
    if (s < 0.0) throw std::invalid_argument("a_pointwise: negative argument");
    return (s <= kSeam) ? a_branch_small(s) : a_branch_large(s);
}

double b_pointwise(double s) {
    if (s < 0.0) throw std::invalid_argument("b_pointwise: negative argument");
    if (s <= kSeam) return 0.0;  // B = F + A and A = -F on [0, e^-3]
    double F = 2.0 * s * s * std::log(s);
    return F + a_branch_large(s);
}

double orlicz_modular(const Field& f) {
    double sum = 0.0;
    for (const cplx& v : f.values) sum += a_pointwise(std::abs(v));
    return sum * f.grid.cell_volume();
}

namespace {

double modular_at(const Field& f, double k) {
    double sum = 0.0;
    const double inv = 1.0 / k;
    for (const cplx& v : f.values) sum += a_pointwise(std::abs(v) * inv);
    return sum * f.grid.cell_volume();
}

}  // namespace

double luxemburg_norm(const Field& f) {
    double q = charge(f);
    if (q == 0.0) return 0.0;
    // Start near the scale where the quadratic branch alone would give 1,
    // then bracket geometrically. modular_at is strictly decreasing in k.
    double k = std::sqrt(3.0 * q);
    if (!(k > 0.0) || !std::isfinite(k)) k = 1.0;
    double lo = k, hi = k;
    if (modular_at(f, k) > 1.0) {
        while (modular_at(f, hi) > 1.0) {
            hi *= 2.0;
            if (hi > 1e300) throw numerical_error("luxemburg_norm: bracket overflow");
        }
    } else {
        while (modular_at(f, lo) < 1.0) {
            lo *= 0.5;
            if (lo < 1e-300) return 0.0;
        }
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (modular_at(f, mid) > 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double h1_norm(const Field& f) { return std::sqrt(charge(f) + kinetic(f)); }

double w_norm(const Field& f) { return h1_norm(f) + luxemburg_norm(f); }

double log_sobolev_gap(const Field& f, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("log_sobolev_gap: alpha must be positive");
    double q = charge(f);
    if (q == 0.0) throw std::invalid_argument("log_sobolev_gap: zero field");
    double pi = 3.141592653589793238462643383279502884;
    double N = static_cast<double>(f.grid.dim);
    return (alpha * alpha / pi) * kinetic(f) +
           (std::log(q) - N * (1.0 + std::log(alpha))) * q - entropy_term(f);
}

Field nehari_rescale(const Field& f, double omega) {
    double q = charge(f);
    if (q == 0.0) throw std::invalid_argument("nehari_rescale: zero field");
    double expo = nehari(f, omega) / (2.0 * q);
    if (expo > 700.0 || expo < -700.0)
        throw numerical_error("nehari_rescale: scaling exponent out of range");
    double rho = std::exp(expo);
    Field out = f;
    for (cplx& v : out.values) v *= rho;
    return out;
}

FunctionalReport functional_report(const Field& f, double omega) {
    FunctionalReport r;
    r.omega = omega;
    r.charge = charge(f);
    r.kinetic = kinetic(f);
    r.entropy = entropy_term(f);
    r.energy = 0.5 * r.kinetic - 0.5 * r.entropy;
    r.action = r.energy + 0.5 * (omega + 1.0) * r.charge;
    r.nehari = r.kinetic + omega * r.charge - r.entropy;
    r.luxemburg = luxemburg_norm(f);
    r.h1_norm = std::sqrt(r.charge + r.kinetic);
    r.w_norm = r.h1_norm + r.luxemburg;
    return r;
}

std::string FunctionalReport::csv_header() const {
    return "omega,charge,kinetic,entropy,energy,action,nehari,luxemburg,h1_norm,w_norm\n";
}

std::string FunctionalReport::csv_row() const {
    std::string s;
    const double vals[10] = {omega,  charge, kinetic,   entropy, energy,
                             action, nehari, luxemburg, h1_norm, w_norm};
    for (int i = 0; i < 10; ++i) {
        if (i) s += ',';
        s += fmt17(vals[i]);
    }
    s += '\n';
    return s;
}

std::string FunctionalReport::to_json() const {
    std::string s = "{";
    const char* names[10] = {"omega",  "charge", "kinetic",   "entropy", "energy",
                             "action", "nehari", "luxemburg", "h1_norm", "w_norm"};
    const double vals[10] = {omega,  charge, kinetic,   entropy, energy,
                             action, nehari, luxemburg, h1_norm, w_norm};
    for (int i = 0; i < 10; ++i) {
        if (i) s += ',';
        s += '"';
        s += names[i];
        s += "\":";
        s += fmt17(vals[i]);
    }
    s += '}';
    return s;
}

double l2_norm(const Field& f) { return std::sqrt(charge(f)); }

double l2_distance(const Field& a, const Field& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("l2_distance: grid mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) sum += std::norm(a.values[i] - b.values[i]);
    return std::sqrt(sum * a.grid.cell_volume());
}

}  // namespace lognls
