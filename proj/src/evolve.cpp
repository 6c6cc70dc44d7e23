#include "lognls/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "lognls/errors.hpp"
#include "lognls/functionals.hpp"

namespace lognls {

void EvolveOptions::validate() const {
    if (!(dt > 0.0)) throw config_error("evolve: dt must be positive");
    if (!(t_final >= dt)) throw config_error("evolve: t_final must be >= dt");
    if (!(amp_floor > 0.0)) throw config_error("evolve: amp_floor must be positive");
    if (snapshot_every < 0) throw config_error("evolve: snapshot_every must be >= 0");
    if (diagnostics_every < 1) throw config_error("evolve: diagnostics_every must be >= 1");
}

Field nonlinear_phase_step(const Field& f, double dt, double amp_floor) {
    if (dt == 0.0) return f;
    Field out = f;
    for (cplx& v : out.values) {
        double m2 = std::norm(v);
        if (m2 < amp_floor) continue;
        double phase = dt * std::log(m2);
        v *= cplx(std::cos(phase), std::sin(phase));
    }
    return out;
}

namespace {

Field kinetic_half_step(const Field& f, double half_dt) {
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
        double phase = -k2 * half_dt;
        hat[i] *= cplx(std::cos(phase), std::sin(phase));
    }
    Field out;
    out.grid = g;
    out.values = fft_inverse(g, hat);
    return out;
}

}  // namespace

Field strang_step(const Field& f, double dt, const EvolveOptions& opts) {
    if (dt == 0.0) return f;
    Field u = kinetic_half_step(f, 0.5 * dt);
    u = nonlinear_phase_step(u, dt, opts.amp_floor);
    return kinetic_half_step(u, 0.5 * dt);
}

double boundary_mass_fraction(const Field& f) {
    const Grid& g = f.grid;
    double total = 0.0, edge = 0.0;
    int idx[3];
    for (std::size_t i = 0; i < f.size(); ++i) {
        double m2 = std::norm(f.values[i]);
        total += m2;
        unflatten(g, i, idx);
        for (int d = 0; d < g.dim; ++d) {
            if (std::abs(g.coord(static_cast<std::size_t>(idx[d]))) >= g.half_width - 1.0) {
                edge += m2;
                break;
            }
        }
    }
    return total > 0.0 ? edge / total : 0.0;
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

double TrajectoryDiagnostics::max_charge_drift() const {
    double m = 0.0;
    for (double v : charge_drift) m = std::max(m, v);
    return m;
}

double TrajectoryDiagnostics::max_energy_drift() const {
    double m = 0.0;
    for (double v : energy_drift) m = std::max(m, v);
    return m;
}

double TrajectoryDiagnostics::max_boundary_mass() const {
    double m = 0.0;
    for (double v : boundary_mass) m = std::max(m, v);
    return m;
}

std::string TrajectoryDiagnostics::csv_header() const {
    return "t,charge,energy,charge_drift,energy_drift,boundary_mass\n";
}

// data rows only; callers prepend csv_header()
std::string TrajectoryDiagnostics::csv() const {
    std::string s;
    for (std::size_t i = 0; i < times.size(); ++i) {
        s += fmt17(times[i]);
        s += ',';
        s += fmt17(charge[i]);
        s += ',';
        s += fmt17(energy[i]);
        s += ',';
        s += fmt17(charge_drift[i]);
        s += ',';
        s += fmt17(energy_drift[i]);
        s += ',';
        s += fmt17(boundary_mass[i]);
        s += '\n';
    }
    return s;
}

TrajectoryDiagnostics evolve_run(const Field& init, const EvolveOptions& opts, double omega_ref) {
    opts.validate();
    check_finite(init, "evolve_run");

    TrajectoryDiagnostics diag;
    diag.omega_ref = omega_ref;

    const long nsteps = std::llround(opts.t_final / opts.dt);
    const double q0 = charge(init);
    if (q0 <= 0.0) throw std::invalid_argument("evolve_run: zero initial field");
    const double e0 = energy(init);
    const double e_den = std::max(1.0, std::abs(e0));

    auto sample = [&](const Field& u, long step) -> bool {
        double t = static_cast<double>(step) * opts.dt;
        double q = charge(u);
        double e = energy(u);
        if (!std::isfinite(q) || !std::isfinite(e)) {
            diag.aborted = true;
            diag.abort_reason = "non-finite diagnostics at t=" + fmt17(t) +
                                " (dt too large or boundary contamination)";
            return false;
        }
        diag.times.push_back(t);
        diag.charge.push_back(q);
        diag.energy.push_back(e);
        diag.charge_drift.push_back(std::abs(q - q0) / q0);
        diag.energy_drift.push_back(std::abs(e - e0) / e_den);
        diag.boundary_mass.push_back(boundary_mass_fraction(u));
        return true;
    };

    Field u = init;
    sample(u, 0);
    if (opts.snapshot_every > 0) {
        diag.snapshots.push_back(u);
        diag.snapshot_times.push_back(0.0);
    }

    for (long step = 1; step <= nsteps; ++step) {
        u = strang_step(u, opts.dt, opts);
        bool at_diag = (step % opts.diagnostics_every == 0) || step == nsteps;
        if (at_diag && !sample(u, step)) return diag;
        if (opts.snapshot_every > 0 && (step % opts.snapshot_every == 0 || step == nsteps)) {
            diag.snapshots.push_back(u);
            diag.snapshot_times.push_back(static_cast<double>(step) * opts.dt);
        }
    }
    return diag;
}

}  // namespace lognls
