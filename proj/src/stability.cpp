#include "lognls/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "lognls/errors.hpp"
#include "lognls/functionals.hpp"
#include "lognls/random_fields.hpp"

namespace lognls {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Field scaled(const Field& f, double a) {
    Field out = f;
    for (cplx& v : out.values) v *= a;
    return out;
}

Field added(const Field& a, const Field& b) {
    Field out = a;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += b.values[i];
    return out;
}

Field subtracted(const Field& a, const Field& b) {
    Field out = a;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= b.values[i];
    return out;
}

// u0 as a function of the scalar search parameter, per perturbation kind.
struct PerturbationFamily {
    const GaussonParams& base;
    const PerturbationSpec& spec;
    const Grid& g;
    Field phi;
    Field shape;  // additive kinds only

    PerturbationFamily(const GaussonParams& b, const PerturbationSpec& s, const Grid& gr)
        : base(b), spec(s), g(gr), phi(gausson_field(b, gr)) {
        if (spec.kind == "radial_bump") {
            shape = make_field(g);
            fill_shape([](const double* x, int dim) {
                double r2 = 0.0;
                for (int d = 0; d < dim; ++d) r2 += x[d] * x[d];
                return cplx(std::exp(-r2), 0.0);
            });
        } else if (spec.kind == "anisotropic_bump") {
            shape = make_field(g);
            fill_shape([](const double* x, int dim) {
                const double c[3] = {0.9, 1.7, 1.3};
                const double o[3] = {0.7, -0.4, 0.2};
                double e = 0.0;
                for (int d = 0; d < dim; ++d) e += c[d] * (x[d] - o[d]) * (x[d] - o[d]);
                return cplx((x[0] - 0.3) * std::exp(-e), 0.0);
            });
        } else if (spec.kind == "random_bandlimited") {
            shape = random_bandlimited_field(g, spec.seed, spec.band_limit, g.half_width / 4.0);
        } else if (spec.kind != "translation_offset" && spec.kind != "phase_ramp") {
            throw config_error("perturbation: unknown kind '" + spec.kind + "'");
        }
        if (!shape.values.empty()) {
            double w = w_norm(shape);
            if (!(w > 0.0))
                throw config_error("perturbation: requested shape is not representable");
        }
    }

    template <typename F>
    void fill_shape(F f) {
        int idx[3];
        for (std::size_t i = 0; i < shape.size(); ++i) {
            unflatten(g, i, idx);
            double x[3] = {0.0, 0.0, 0.0};
            for (int d = 0; d < g.dim; ++d) x[d] = g.coord(static_cast<std::size_t>(idx[d]));
            shape.values[i] = f(x, g.dim);
        }
    }

    Field u0_at(double a) const {
        if (spec.kind == "translation_offset") {
            std::vector<double> y(g.dim, 0.0);
            y[0] = a;
            return shift_field(phi, y);
        }
        if (spec.kind == "phase_ramp") {
            Field out = phi;
            int idx[3];
            for (std::size_t i = 0; i < out.size(); ++i) {
                unflatten(g, i, idx);
                double x0 = g.coord(static_cast<std::size_t>(idx[0]));
                double ph = a * x0;
                out.values[i] *= cplx(std::cos(ph), std::sin(ph));
            }
            return out;
        }
        return added(phi, scaled(shape, a));
    }

    double deviation_at(double a) const { return w_norm(subtracted(u0_at(a), phi)); }
};

}  // namespace

void PerturbationSpec::validate() const {
    // delta == 0 is allowed as the unperturbed control run
    if (!(delta >= 0.0)) throw config_error("perturbation: delta must be nonnegative");
    if (band_limit < 0) throw config_error("perturbation: band_limit must be >= 0");
    if (kind != "radial_bump" && kind != "anisotropic_bump" && kind != "random_bandlimited" &&
        kind != "translation_offset" && kind != "phase_ramp")
        throw config_error("perturbation: unknown kind '" + kind + "'");
}

Field make_perturbation(const GaussonParams& base, const PerturbationSpec& spec, const Grid& g) {
    spec.validate();
    if (spec.delta == 0.0) return gausson_field(base, g);
    PerturbationFamily fam(base, spec, g);

    // Monotone bracket and bisect on the scalar parameter until the W-norm of
    // the deviation hits delta within 1 percent.
    double hi;
    if (!fam.shape.values.empty()) {
        hi = spec.delta / w_norm(fam.shape) * 2.0;
    } else {
        hi = 0.125;
    }
    double f_hi = fam.deviation_at(hi);
    int grow = 0;
    while (f_hi < spec.delta) {
        hi *= 2.0;
        f_hi = fam.deviation_at(hi);
        if (++grow > 60) throw numerical_error("perturbation: delta unreachable for this kind");
    }
    double lo = 0.0;
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        double f = fam.deviation_at(mid);
        if (std::abs(f - spec.delta) <= 0.01 * spec.delta) {
            lo = hi = mid;
            break;
        }
        if (f < spec.delta)
            lo = mid;
        else
            hi = mid;
    }
    return fam.u0_at(0.5 * (lo + hi));
}

OrbitFit orbit_distance(const Field& f, double omega, const std::string& norm_kind) {
    return align_to_orbit(f, omega, norm_kind);
}

std::string StabilityReport::csv_header(int dim) const {
    std::string s = "t,dist_w,dist_l2,theta";
    for (int d = 0; d < dim; ++d) s += ",y" + std::to_string(d + 1);
    s += ",charge_drift,energy_drift\n";
    return s;
}

// data rows only; callers prepend csv_header(dim)
std::string StabilityReport::csv(int dim) const {
    std::string s;
    for (std::size_t i = 0; i < times.size(); ++i) {
        s += fmt17(times[i]);
        s += ',';
        s += fmt17(orbit_distance_w[i]);
        s += ',';
        s += fmt17(orbit_distance_l2[i]);
        s += ',';
        s += fmt17(theta[i]);
        for (int d = 0; d < dim; ++d) {
            s += ',';
            s += fmt17(y[i][static_cast<std::size_t>(d)]);
        }
        s += ',';
        s += fmt17(charge_drift[i]);
        s += ',';
        s += fmt17(energy_drift[i]);
        s += '\n';
    }
    return s;
}

StabilityReport stability_experiment(double omega, const Grid& grid, const PerturbationSpec& spec,
                                     const EvolveOptions& eopts) {
    eopts.validate();
    GaussonParams params{omega, grid.dim};
    Field phi = gausson_field(params, grid);
    const double phi_w = w_norm(phi);
    if (spec.delta > 0.1 * phi_w)
        throw config_error("stability: delta exceeds 0.1 * w_norm(phi)");

    Field u0 = make_perturbation(params, spec, grid);

    StabilityReport rep;
    rep.spec = spec;
    rep.omega = omega;
    rep.initial_distance_w = w_norm(subtracted(u0, phi));

    const long nsteps = std::llround(eopts.t_final / eopts.dt);
    const double q0 = charge(u0);
    const double e0 = energy(u0);
    const double e_den = std::max(1.0, std::abs(e0));

    auto sample = [&](const Field& u, long step) -> bool {
        double t = static_cast<double>(step) * eopts.dt;
        double q = charge(u);
        double e = energy(u);
        if (!std::isfinite(q) || !std::isfinite(e)) {
            rep.aborted = true;
            rep.abort_reason = "non-finite state at t=" + fmt17(t);
            return false;
        }
        OrbitFit fit = orbit_distance(u, omega, "W");
        rep.times.push_back(t);
        rep.orbit_distance_w.push_back(fit.distance);
        rep.orbit_distance_l2.push_back(fit.distance_l2);
        rep.theta.push_back(fit.theta);
        rep.y.push_back(fit.y);
        rep.charge_drift.push_back(std::abs(q - q0) / q0);
        rep.energy_drift.push_back(std::abs(e - e0) / e_den);
        if (fit.polish_moved_far) rep.polish_drift_flag = true;
        rep.max_distance_w = std::max(rep.max_distance_w, fit.distance);
        rep.max_charge_drift = std::max(rep.max_charge_drift, rep.charge_drift.back());
        rep.max_energy_drift = std::max(rep.max_energy_drift, rep.energy_drift.back());
        rep.max_boundary_mass = std::max(rep.max_boundary_mass, boundary_mass_fraction(u));
        return true;
    };

    Field u = u0;
    sample(u, 0);
    for (long step = 1; step <= nsteps && !rep.aborted; ++step) {
        u = strang_step(u, eopts.dt, eopts);
        if (step % eopts.diagnostics_every == 0 || step == nsteps)
            if (!sample(u, step)) break;
    }
    return rep;
}

std::vector<double> brezis_lieb_demo(const Field& base, const Field& bump,
                                     const std::vector<double>& shifts) {
    if (!(base.grid == bump.grid)) throw std::invalid_argument("brezis_lieb_demo: grid mismatch");
    for (std::size_t i = 1; i < shifts.size(); ++i)
        if (!(shifts[i] > shifts[i - 1]))
            throw std::invalid_argument("brezis_lieb_demo: shifts must be increasing");
    if (!shifts.empty() && std::abs(shifts.back()) > base.grid.half_width / 2.0)
        throw std::invalid_argument("brezis_lieb_demo: max shift exceeds the bulk region");

    const double e_base = entropy_term(base);
    std::vector<double> residuals;
    residuals.reserve(shifts.size());
    for (double s : shifts) {
        std::vector<double> y(base.grid.dim, 0.0);
        y[0] = s;
        Field bn = shift_field(bump, y);
        Field un = added(base, bn);
        residuals.push_back(std::abs(entropy_term(un) - entropy_term(bn) - e_base));
    }
    return residuals;
}

}  // namespace lognls
