#pragma once
#include <string>
#include <vector>

#include "lognls/grid.hpp"

namespace lognls {

struct EvolveOptions {
    double dt = 1e-3;
    double t_final = 1.0;
    double amp_floor = 1e-30;   // on |u|^2; below it the log phase is frozen
    int snapshot_every = 0;     // 0 disables snapshots
    int diagnostics_every = 100;

    void validate() const;
};

struct TrajectoryDiagnostics {
    double omega_ref = 0.0;
    std::vector<double> times;
    std::vector<double> charge;
    std::vector<double> energy;
    std::vector<double> charge_drift;   // |Q(t)-Q(0)| / Q(0)
    std::vector<double> energy_drift;   // |E(t)-E(0)| / max(1, |E(0)|)
    std::vector<double> boundary_mass;  // charge fraction within 1 of the box edge
    std::vector<Field> snapshots;
    std::vector<double> snapshot_times;
    bool aborted = false;
    std::string abort_reason;

    double max_charge_drift() const;
    double max_energy_drift() const;
    double max_boundary_mass() const;
    std::string csv_header() const;  // t,charge,energy,charge_drift,energy_drift,boundary_mass
    std::string csv() const;
};

// Exact flow of i u_t = -u log|u|^2: u -> u * exp(i dt log|u|^2), pointwise
// modulus preserved. Points with |u|^2 < amp_floor pass through unchanged.
Field nonlinear_phase_step(const Field& f, double dt, double amp_floor);

// Strang composition: half-step spectral free flow, full nonlinear phase
// step, half-step free flow. dt = 0 returns the input unchanged.
Field strang_step(const Field& f, double dt, const EvolveOptions& opts);

// Fraction of total charge within distance 1 of the boundary.
double boundary_mass_fraction(const Field& f);

TrajectoryDiagnostics evolve_run(const Field& init, const EvolveOptions& opts, double omega_ref);

}  // namespace lognls
