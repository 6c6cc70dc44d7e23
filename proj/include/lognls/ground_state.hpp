#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "lognls/gausson.hpp"
#include "lognls/grid.hpp"

namespace lognls {

struct MinimizeOptions {
    int max_iters = 2000;
    double grad_tol = 1e-7;  // on the L2 norm of the tangential gradient
    double step_init = 0.1;
    double backtrack_factor = 0.5;
    std::uint64_t seed = 1;

    void validate() const;
};

struct TraceEntry {
    int iteration = 0;
    double action = 0.0;
    double nehari_residual = 0.0;
};

struct GroundStateResult {
    Field minimizer;
    double omega = 0.0;
    double action_value = 0.0;
    double d_closed_ref = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<TraceEntry> trace;
    double orbit_distance_l2 = 0.0;  // relative to |phi_omega|_L2
    double theta = 0.0;              // orbit alignment of the minimizer
    std::vector<double> y;
    double elliptic_residual_value = 0.0;
    double grad_norm = 0.0;
};

// Minimize the action over the Nehari manifold by projected descent:
// H1-preconditioned tangential gradient steps with backtracking, followed by
// the exact rescale projection after every trial. init may be a Field, or
// one of the named initializers "random" / "gausson-perturbed".
GroundStateResult minimize_action(double omega, const Grid& grid, const Field& init,
                                  const MinimizeOptions& opts);
GroundStateResult minimize_action(double omega, const Grid& grid, const std::string& init_kind,
                                  const MinimizeOptions& opts);

// Best-fit phase and translation onto the Gausson orbit; returns the residual
// distance in the requested norm ("L2" or "W").
struct OrbitFit {
    double theta = 0.0;
    std::vector<double> y;
    double distance = 0.0;
    double distance_l2 = 0.0;       // L2 distance at the L2-optimal fit
    bool polish_moved_far = false;  // polish left the correlation cell
};

OrbitFit align_to_orbit(const Field& f, double omega, const std::string& norm_kind);

}  // namespace lognls
