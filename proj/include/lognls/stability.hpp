#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "lognls/evolve.hpp"
#include "lognls/gausson.hpp"
#include "lognls/grid.hpp"
#include "lognls/ground_state.hpp"

namespace lognls {

struct PerturbationSpec {
    std::string kind;  // radial_bump | anisotropic_bump | random_bandlimited |
                       // translation_offset | phase_ramp
    double delta = 0.01;  // target W-norm of u0 - phi
    std::uint64_t seed = 1;
    int band_limit = 8;

    void validate() const;
};

struct StabilityReport {
    PerturbationSpec spec;
    double omega = 0.0;
    std::vector<double> times;
    std::vector<double> orbit_distance_w;
    std::vector<double> orbit_distance_l2;
    std::vector<double> theta;
    std::vector<std::vector<double>> y;
    std::vector<double> charge_drift;
    std::vector<double> energy_drift;
    double max_distance_w = 0.0;
    double initial_distance_w = 0.0;  // plain |u0 - phi|_W before any orbit alignment
    bool polish_drift_flag = false;   // polish left the correlation cell at some sample
    bool aborted = false;
    std::string abort_reason;
    double max_charge_drift = 0.0;
    double max_energy_drift = 0.0;
    double max_boundary_mass = 0.0;

    std::string csv_header(int dim) const;
    std::string csv(int dim) const;
};

// u0 = phi_omega + p with p scaled by monotone 1-D search so that
// w_norm(u0 - phi_omega) hits spec.delta within 5 percent.
Field make_perturbation(const GaussonParams& base, const PerturbationSpec& spec, const Grid& g);

// Definition of the orbit distance: infimum over global phase and translation
// of the norm distance to e^{i theta} phi_omega(. - y).
OrbitFit orbit_distance(const Field& f, double omega, const std::string& norm_kind);

StabilityReport stability_experiment(double omega, const Grid& grid, const PerturbationSpec& spec,
                                     const EvolveOptions& eopts);

// Residual sequence r_n = |E(base + bump_n) - E(bump_n) - E(base)| with
// E the entropy integral and bump_n the bump translated by shifts[n] along
// the first axis.
std::vector<double> brezis_lieb_demo(const Field& base, const Field& bump,
                                     const std::vector<double>& shifts);

}  // namespace lognls
