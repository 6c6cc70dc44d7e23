#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "lognls/errors.hpp"
#include "lognls/evolve.hpp"
#include "lognls/functionals.hpp"
#include "lognls/gausson.hpp"
#include "lognls/grid.hpp"
#include "lognls/random_fields.hpp"

using namespace lognls;

namespace {

Field perturbed_gausson(const Grid& g) {
    Field f = gausson_field({0.0, g.dim}, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double x = g.coord(i % static_cast<std::size_t>(g.points));
        f.values[i] += 0.01 * std::exp(-x * x);
    }
    return f;
}

}  // namespace

TEST_CASE("nonlinear phase step") {
    Grid g = make_grid(1, 12.0, 64);

    Field one = make_field(g);
    for (auto& v : one.values) v = 1.0;
    Field s = nonlinear_phase_step(one, 0.37, 1e-30);
    for (auto& v : s.values) CHECK(v == cplx(1.0, 0.0));  // log 1 = 0, exact

    // |c|^2 = e, so the phase advances by exactly dt
    Field c = make_field(g);
    for (auto& v : c.values) v = std::exp(0.5);
    const double dt = 0.27;
    Field sc = nonlinear_phase_step(c, dt, 1e-30);
    for (auto& v : sc.values) {
        CHECK(v.real() == doctest::Approx(std::exp(0.5) * std::cos(dt)).epsilon(1e-15));
        CHECK(v.imag() == doctest::Approx(std::exp(0.5) * std::sin(dt)).epsilon(1e-15));
    }

    // pointwise modulus preserved on random data
    Field u = random_bandlimited_field(g, 5, 8, 3.0);
    Field su = nonlinear_phase_step(u, 0.11, 1e-30);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(std::abs(su.values[i]) ==
              doctest::Approx(std::abs(u.values[i])).epsilon(1e-14));
}

TEST_CASE("strang step with dt = 0 is the identity") {
    Grid g = make_grid(1, 12.0, 64);
    Field u = random_bandlimited_field(g, 9, 8, 3.0);
    EvolveOptions opts;
    Field s = strang_step(u, 0.0, opts);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(s.values[i] == u.values[i]);
}

TEST_CASE("charge is conserved over ten thousand steps") {
    Grid g = make_grid(1, 12.0, 256);
    Field u = perturbed_gausson(g);
    EvolveOptions opts;
    opts.dt = 1e-3;
    opts.t_final = 10.0;
    opts.diagnostics_every = 500;
    TrajectoryDiagnostics d = evolve_run(u, opts, 0.0);
    CHECK(!d.aborted);
    CHECK(d.max_charge_drift() <= 1e-11);
}

TEST_CASE("standing wave: small error, second order in dt") {
    Grid g = make_grid(1, 12.0, 256);
    Field phi = gausson_field({0.0, 1}, g);
    const double T = 1.0;

    auto final_error = [&](double dt) {
        EvolveOptions opts;
        opts.dt = dt;
        opts.t_final = T;
        opts.diagnostics_every = 1000000;  // endpoints only
        Field u = phi;
        long n = std::lround(T / dt);
        for (long i = 0; i < n; ++i) u = strang_step(u, dt, opts);
        return l2_distance(u, phi);  // omega = 0: the exact solution is static
    };

    double e1 = final_error(1e-3);
    double e2 = final_error(5e-4);
    CHECK(e1 < 1e-4);
    CHECK(e1 / e2 > 3.0);
    CHECK(e1 / e2 < 5.0);
}

TEST_CASE("translation and phase equivariance of the diagnostics") {
    Grid g = make_grid(1, 12.0, 256);
    GaussonParams p{0.0, 1};
    EvolveOptions opts;
    opts.dt = 1e-3;
    opts.t_final = 1.0;
    opts.diagnostics_every = 200;

    TrajectoryDiagnostics center = evolve_run(gausson_field(p, g), opts, 0.0);
    // offset of exactly 10 cells plus a global phase
    TrajectoryDiagnostics moved =
        evolve_run(orbit_element(p, 0.5, {10.0 * g.spacing}, g), opts, 0.0);
    REQUIRE(center.times.size() == moved.times.size());
    for (std::size_t i = 0; i < center.times.size(); ++i) {
        CHECK(std::abs(center.charge[i] - moved.charge[i]) < 1e-10);
        CHECK(std::abs(center.energy[i] - moved.energy[i]) < 1e-10);
    }
}

TEST_CASE("conservation holds off the standing wave") {
    Grid g = make_grid(1, 12.0, 256);
    Field u = gausson_field({0.0, 1}, g);
    for (auto& v : u.values) v *= 1.05;
    EvolveOptions opts;
    opts.dt = 1e-3;
    opts.t_final = 2.0;
    opts.diagnostics_every = 200;
    TrajectoryDiagnostics d = evolve_run(u, opts, 0.0);
    CHECK(!d.aborted);
    CHECK(d.max_charge_drift() <= 1e-10);
    CHECK(d.max_energy_drift() <= 1e-5);
}

TEST_CASE("time reversal returns the initial field") {
    Grid g = make_grid(1, 12.0, 256);
    Field u0 = perturbed_gausson(g);
    EvolveOptions opts;
    opts.dt = 1e-3;
    Field u = u0;
    for (int i = 0; i < 200; ++i) u = strang_step(u, opts.dt, opts);
    for (int i = 0; i < 200; ++i) u = strang_step(u, -opts.dt, opts);
    CHECK(l2_distance(u, u0) < 1e-10);
}

TEST_CASE("diagnostics schedule and boundary monitor") {
    Grid g = make_grid(1, 12.0, 256);
    Field phi = gausson_field({0.0, 1}, g);
    EvolveOptions opts;
    opts.dt = 1e-2;
    opts.t_final = 1.0;
    opts.diagnostics_every = 10;
    opts.snapshot_every = 50;
    TrajectoryDiagnostics d = evolve_run(phi, opts, 0.0);
    REQUIRE(d.times.size() == 11);  // t = 0, 0.1, ..., 1.0
    CHECK(d.times.front() == 0.0);
    CHECK(std::abs(d.times.back() - 1.0) <= opts.dt);
    CHECK(d.snapshots.size() == 3);  // steps 0, 50, 100
    CHECK(d.max_boundary_mass() < 1e-12);
    CHECK(d.csv_header() == "t,charge,energy,charge_drift,energy_drift,boundary_mass\n");
}

TEST_CASE("non-finite diagnostics abort instead of throwing") {
    Grid g = make_grid(1, 12.0, 64);
    Field u = gausson_field({0.0, 1}, g);
    u.values[3] = cplx(1e200, 0.0);  // finite value, but |u|^2 overflows
    EvolveOptions opts;
    opts.dt = 1e-3;
    opts.t_final = 0.1;
    opts.diagnostics_every = 1;
    TrajectoryDiagnostics d = evolve_run(u, opts, 0.0);
    CHECK(d.aborted);
    CHECK(!d.abort_reason.empty());
    // the failure was already visible at the first sample, so the partial
    // record holds no rows; later-sample failures keep everything before them
    CHECK(d.times.empty());
}

TEST_CASE("option validation") {
    EvolveOptions opts;
    opts.dt = 0.0;
    CHECK_THROWS_AS(opts.validate(), config_error);
    opts.dt = 1e-3;
    opts.t_final = 1e-4;
    CHECK_THROWS_AS(opts.validate(), config_error);
    opts.t_final = 1.0;
    opts.amp_floor = 0.0;
    CHECK_THROWS_AS(opts.validate(), config_error);
    opts.amp_floor = 1e-30;
    opts.diagnostics_every = 0;
    CHECK_THROWS_AS(opts.validate(), config_error);
    opts.diagnostics_every = 1;
    opts.snapshot_every = -1;
    CHECK_THROWS_AS(opts.validate(), config_error);
    opts.snapshot_every = 0;
    CHECK_NOTHROW(opts.validate());
}
