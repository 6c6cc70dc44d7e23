#pragma once
#include <vector>

#include "lognls/grid.hpp"

namespace lognls {

struct GaussonParams {
    double omega = 0.0;
    int dim = 1;
};

// phi_omega(x) = exp((omega+N)/2) * exp(-|x|^2/2), the exact standing-wave
// profile for every omega and N.
Field gausson_field(const GaussonParams& p, const Grid& g);

// Ground-state action level: pi^(N/2) * exp(omega+N) / 2.
double d_closed(double omega, int dim);

// Relative L2 residual of -laplacian(u) + omega*u - u*log|u|^2.
double elliptic_residual(const Field& f, double omega);

// exp(i theta) * phi_omega(. - y), sampled in closed form.
Field orbit_element(const GaussonParams& p, double theta, const std::vector<double>& y,
                    const Grid& g);

}  // namespace lognls
