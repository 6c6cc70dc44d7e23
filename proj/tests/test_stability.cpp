#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "lognls/errors.hpp"
#include "lognls/functionals.hpp"
#include "lognls/gausson.hpp"
#include "lognls/grid.hpp"
#include "lognls/stability.hpp"

using namespace lognls;

namespace {

// Frozen from an independent 50-digit quadrature of the translate sequence
// r_n for base = phi_0 and bump = 0.5*phi_0 on the line, shifts 1..8.
const double kWideBump[8] = {9.41354813,     3.54063678,     0.554364085,   2.17832669e-2,
                             1.89957630e-2,  2.56249564e-3,  1.62719851e-4, 5.58078861e-6};
// Same construction with the narrower bump 0.5*e^(1/2)*exp(-x^2).
const double kNarrowBump[8] = {6.92521236,    1.73107156,    7.71812906e-2, 2.58731807e-2,
                               3.39671091e-3, 1.51887067e-4, 2.98958309e-6, 2.77907539e-8};
const double kOverlap = 12.869758283648807672;  // shift 0, wide bump

Field half_gausson(const Grid& g) {
    Field f = gausson_field({0.0, 1}, g);
    for (auto& v : f.values) v *= 0.5;
    return f;
}

Field narrow_bump(const Grid& g) {
    Field f = make_field(g);
    const double amp = 0.5 * std::exp(0.5);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double x = g.coord(i);
        f.values[i] = amp * std::exp(-x * x);
    }
    return f;
}

}  // namespace

TEST_CASE("perturbation amplitude is calibrated in the W norm") {
    Grid g = make_grid(1, 12.0, 256);
    Field phi = gausson_field({0.0, 1}, g);
    const double delta = 0.01;
    for (const char* kind : {"radial_bump", "random_bandlimited", "translation_offset",
                             "phase_ramp"}) {
        PerturbationSpec spec;
        spec.kind = kind;
        spec.delta = delta;
        spec.seed = 3;
        Field u0 = make_perturbation({0.0, 1}, spec, g);
        Field diff = u0;
        for (std::size_t i = 0; i < g.size(); ++i) diff.values[i] -= phi.values[i];
        CHECK(w_norm(diff) == doctest::Approx(delta).epsilon(0.05));
    }

    Grid g2 = make_grid(2, 10.0, 128);
    PerturbationSpec spec;
    spec.kind = "anisotropic_bump";
    spec.delta = delta;
    Field u0 = make_perturbation({0.0, 2}, spec, g2);
    Field phi2 = gausson_field({0.0, 2}, g2);
    Field diff = u0;
    for (std::size_t i = 0; i < g2.size(); ++i) diff.values[i] -= phi2.values[i];
    CHECK(w_norm(diff) == doctest::Approx(delta).epsilon(0.05));

    // delta = 0 is the unperturbed control
    spec.kind = "radial_bump";
    spec.delta = 0.0;
    Field same = make_perturbation({0.0, 2}, spec, g2);
    for (std::size_t i = 0; i < g2.size(); ++i) CHECK(same.values[i] == phi2.values[i]);

    spec.delta = -0.1;
    CHECK_THROWS_AS(make_perturbation({0.0, 2}, spec, g2), config_error);
    spec.delta = 0.01;
    spec.kind = "sawtooth";
    CHECK_THROWS_AS(make_perturbation({0.0, 2}, spec, g2), config_error);
}

TEST_CASE("translation offset is an orbit member with nonzero plain distance") {
    Grid g = make_grid(1, 12.0, 256);
    PerturbationSpec spec;
    spec.kind = "translation_offset";
    spec.delta = 0.01;
    Field u0 = make_perturbation({0.0, 1}, spec, g);
    Field phi = gausson_field({0.0, 1}, g);
    Field diff = u0;
    for (std::size_t i = 0; i < g.size(); ++i) diff.values[i] -= phi.values[i];
    CHECK(w_norm(diff) > 0.005);
    OrbitFit fit = orbit_distance(u0, 0.0, "L2");
    CHECK(fit.distance < 1e-6);
}

TEST_CASE("anisotropic bump breaks radial symmetry in 2d") {
    Grid g = make_grid(2, 10.0, 128);
    PerturbationSpec spec;
    spec.kind = "anisotropic_bump";
    spec.delta = 0.01;
    Field u0 = make_perturbation({0.0, 2}, spec, g);
    const std::size_t M = static_cast<std::size_t>(g.points);
    const std::size_t c = M / 2;
    const std::size_t off = c + 10;
    // samples at (x, 0) and (0, x) differ
    CHECK(std::abs(u0.values[off * M + c] - u0.values[c * M + off]) > 1e-6);
}

TEST_CASE("orbit distance: gauge invariance and infimum bound") {
    Grid g = make_grid(1, 12.0, 256);
    PerturbationSpec spec;
    spec.kind = "radial_bump";
    spec.delta = 0.01;
    Field u = make_perturbation({0.0, 1}, spec, g);

    OrbitFit base = orbit_distance(u, 0.0, "W");
    Field v = shift_field(u, {0.53});
    const cplx ph(std::cos(1.1), std::sin(1.1));
    for (auto& z : v.values) z *= ph;
    OrbitFit moved = orbit_distance(v, 0.0, "W");
    CHECK(std::abs(moved.distance - base.distance) < 1e-7);

    // the infimum set contains the null gauge
    Field phi = gausson_field({0.0, 1}, g);
    Field diff = u;
    for (std::size_t i = 0; i < g.size(); ++i) diff.values[i] -= phi.values[i];
    CHECK(base.distance <= w_norm(diff) + 1e-14);

    CHECK_THROWS_AS(orbit_distance(make_field(g), 0.0, "W"), std::invalid_argument);
}

TEST_CASE("orbit distance vanishes on a lattice of orbit members") {
    Grid g = make_grid(1, 12.0, 256);
    GaussonParams p{0.0, 1};
    for (int it = -2; it <= 2; ++it) {
        for (int iy = -2; iy <= 2; ++iy) {
            Field e = orbit_element(p, 0.6 * it, {0.6 * iy}, g);
            OrbitFit fw = orbit_distance(e, 0.0, "W");
            CHECK(fw.distance <= 1e-8);
            OrbitFit fl = orbit_distance(e, 0.0, "L2");
            CHECK(fl.distance <= 1e-8);
        }
    }
}

TEST_CASE("unperturbed control run stays on the orbit") {
    Grid g = make_grid(1, 12.0, 256);
    PerturbationSpec spec;
    spec.kind = "radial_bump";
    spec.delta = 0.0;
    EvolveOptions eopts;
    eopts.dt = 1e-3;
    eopts.t_final = 2.0;
    eopts.diagnostics_every = 500;
    StabilityReport rep = stability_experiment(0.0, g, spec, eopts);
    CHECK(!rep.aborted);
    CHECK(rep.initial_distance_w == 0.0);
    // splitting error only; far below the smallest delta anyone sweeps
    CHECK(rep.max_distance_w <= 1e-4);
}

TEST_CASE("perturbed run: report invariants and conservation") {
    Grid g = make_grid(1, 12.0, 256);
    PerturbationSpec spec;
    spec.kind = "random_bandlimited";
    spec.delta = 0.01;
    spec.seed = 1;
    EvolveOptions eopts;
    eopts.dt = 1e-3;
    eopts.t_final = 1.0;
    eopts.diagnostics_every = 250;
    StabilityReport rep = stability_experiment(0.0, g, spec, eopts);
    CHECK(!rep.aborted);
    CHECK(rep.initial_distance_w == doctest::Approx(spec.delta).epsilon(0.05));
    double m = 0.0;
    for (double d : rep.orbit_distance_w) m = std::max(m, d);
    CHECK(rep.max_distance_w == m);
    CHECK(rep.max_charge_drift <= 1e-10);
    CHECK(rep.max_energy_drift <= 1e-5);
    REQUIRE(rep.times.size() == rep.orbit_distance_w.size());
    REQUIRE(rep.times.size() == rep.orbit_distance_l2.size());
    REQUIRE(rep.times.size() == rep.theta.size());
    REQUIRE(rep.times.size() == rep.y.size());

    CHECK(rep.csv_header(1) == "t,dist_w,dist_l2,theta,y1,charge_drift,energy_drift\n");
    CHECK(rep.csv_header(2) == "t,dist_w,dist_l2,theta,y1,y2,charge_drift,energy_drift\n");
}

TEST_CASE("oversized delta is rejected") {
    Grid g = make_grid(1, 12.0, 256);
    PerturbationSpec spec;
    spec.kind = "radial_bump";
    spec.delta = 1.0;  // > 0.1 * w_norm(phi)
    EvolveOptions eopts;
    eopts.dt = 1e-3;
    eopts.t_final = 1.0;
    CHECK_THROWS_AS(stability_experiment(0.0, g, spec, eopts), config_error);
}

TEST_CASE("entropy splitting residuals match the quadrature oracle") {
    Grid g = make_grid(1, 16.0, 256);
    Field base = gausson_field({0.0, 1}, g);
    std::vector<double> shifts = {1, 2, 3, 4, 5, 6, 7, 8};

    std::vector<double> wide = brezis_lieb_demo(base, half_gausson(g), shifts);
    REQUIRE(wide.size() == 8);
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(wide[i] == doctest::Approx(kWideBump[i]).epsilon(2e-8).scale(1.0));

    std::vector<double> narrow = brezis_lieb_demo(base, narrow_bump(g), shifts);
    REQUIRE(narrow.size() == 8);
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(narrow[i] == doctest::Approx(kNarrowBump[i]).epsilon(2e-8).scale(1.0));
    for (std::size_t i = 1; i < 8; ++i) CHECK(narrow[i] < narrow[i - 1]);
    CHECK(narrow.back() <= 1e-6);

    std::vector<double> overlap = brezis_lieb_demo(base, half_gausson(g), {0.0});
    CHECK(overlap[0] == doctest::Approx(kOverlap).epsilon(1e-9));

    // degenerate sequence: zero bump gives exactly zero residuals
    std::vector<double> zero = brezis_lieb_demo(base, make_field(g), shifts);
    for (double r : zero) CHECK(r == 0.0);

    CHECK_THROWS_AS(brezis_lieb_demo(base, half_gausson(g), {1.0, 9.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(brezis_lieb_demo(base, half_gausson(g), {2.0, 1.0}),
                    std::invalid_argument);
}
