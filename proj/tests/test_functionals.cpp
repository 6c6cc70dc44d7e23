#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "lognls/errors.hpp"
#include "lognls/functionals.hpp"
#include "lognls/gausson.hpp"
#include "lognls/grid.hpp"
#include "lognls/random_fields.hpp"

using namespace lognls;

namespace {

// Oracle values, frozen from an independent 50-digit quadrature run.
constexpr double kD01 = 2.4090145473493610286;       // sqrt(pi)*e/2
constexpr double kQ01 = 4.8180290946987220571;       // sqrt(pi)*e
constexpr double kQ02 = 23.213404357363387236;       // pi*e^2
constexpr double kE11 = -6.5483804685532603012;      // -1 * sqrt(pi)*e^2/2
constexpr double kSeamValue = 0.014872513059998150538;  // 6 e^-6
constexpr double kSeamDeriv = 0.49787068367863942979;   // 10 e^-3
constexpr double kB1 = 3.1966695212947894135;        // 3 + 4e^-3 - e^-6
constexpr double kLuxGausson = 4.2031202700378373;   // Luxemburg norm of phi_0, N=1
constexpr double kH1Gausson = 2.6883161350644911;    // sqrt(sqrt(pi)e + sqrt(pi)e/2)
constexpr double kWGausson = 6.8914364051023284;

Field bulk_field(const Grid& g, std::uint64_t seed) {
    return random_bandlimited_field(g, seed, 8, g.half_width / 4.0);
}

}  // namespace

TEST_CASE("charge on gaussons and zero field") {
    Grid g1 = make_grid(1, 12.0, 256);
    CHECK(charge(gausson_field({0.0, 1}, g1)) == doctest::Approx(kQ01).epsilon(1e-12));
    Grid g2 = make_grid(2, 10.0, 128);
    CHECK(charge(gausson_field({0.0, 2}, g2)) == doctest::Approx(kQ02).epsilon(1e-12));
    CHECK(charge(make_field(g1)) == 0.0);
}

TEST_CASE("entropy term: gausson, unit modulus, scaling law") {
    Grid g = make_grid(1, 12.0, 256);
    CHECK(entropy_term(gausson_field({0.0, 1}, g)) == doctest::Approx(kD01).epsilon(1e-12));

    Field one = make_field(g);
    for (auto& v : one.values) v = cplx(std::cos(0.4), std::sin(0.4));
    CHECK(entropy_term(one) == doctest::Approx(0.0).epsilon(1e-13));

    // entropy(a u) = a^2 entropy(u) + a^2 log(a^2) charge(u)
    Field u = bulk_field(g, 7);
    const double a = 2.0;
    Field au = u;
    for (auto& v : au.values) v *= a;
    double expected = a * a * entropy_term(u) + a * a * std::log(a * a) * charge(u);
    CHECK(entropy_term(au) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("energy values") {
    Grid g = make_grid(1, 12.0, 256);
    CHECK(std::abs(energy(gausson_field({0.0, 1}, g))) < 1e-8);
    CHECK(energy(gausson_field({1.0, 1}, g)) == doctest::Approx(kE11).epsilon(1e-10));
    CHECK(energy(make_field(g)) == 0.0);
    Grid g2 = make_grid(2, 10.0, 128);
    CHECK(std::abs(energy(gausson_field({0.0, 2}, g2))) < 1e-8);
}

TEST_CASE("action and nehari on the gausson family") {
    Grid g1 = make_grid(1, 12.0, 256);
    Grid g2 = make_grid(2, 10.0, 128);
    for (double om : {-1.0, 0.0, 1.0}) {
        Field p1 = gausson_field({om, 1}, g1);
        CHECK(action(p1, om) == doctest::Approx(d_closed(om, 1)).epsilon(1e-10));
        CHECK(std::abs(nehari(p1, om)) < 1e-7 * charge(p1));
        Field p2 = gausson_field({om, 2}, g2);
        CHECK(action(p2, om) == doctest::Approx(d_closed(om, 2)).epsilon(1e-10));
        CHECK(std::abs(nehari(p2, om)) < 1e-7 * charge(p2));
    }
}

TEST_CASE("action - nehari/2 = charge/2 on random fields") {
    Grid g = make_grid(1, 12.0, 128);
    for (std::uint64_t s = 0; s < 50; ++s) {
        Field u = bulk_field(g, 100 + s);
        double lhs = action(u, 0.3) - 0.5 * nehari(u, 0.3);
        CHECK(lhs == doctest::Approx(0.5 * charge(u)).epsilon(1e-12));
    }
}

TEST_CASE("young function pointwise values and seam") {
    const double s = std::exp(-3.0);
    CHECK(a_pointwise(s) == doctest::Approx(kSeamValue).epsilon(1e-15));
    CHECK(a_branch_small(s) == doctest::Approx(kSeamValue).epsilon(1e-15));
    CHECK(a_branch_large(s) == doctest::Approx(kSeamValue).epsilon(1e-15));
    CHECK(a_prime_branch_small(s) == doctest::Approx(kSeamDeriv).epsilon(1e-15));
    CHECK(a_prime_branch_large(s) == doctest::Approx(kSeamDeriv).epsilon(1e-15));

    CHECK(a_pointwise(0.0) == 0.0);
    CHECK(b_pointwise(0.0) == 0.0);
    CHECK(b_pointwise(1.0) == doctest::Approx(kB1).epsilon(1e-15));
    CHECK_THROWS_AS(a_pointwise(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(b_pointwise(-0.1), std::invalid_argument);
}

TEST_CASE("young function is nonnegative, increasing, convex") {
    std::vector<double> vals;
    for (int i = 0; i <= 400; ++i) vals.push_back(a_pointwise(0.01 * i));
    for (std::size_t i = 0; i < vals.size(); ++i) CHECK(vals[i] >= 0.0);
    for (std::size_t i = 1; i < vals.size(); ++i) CHECK(vals[i] >= vals[i - 1] - 1e-15);
    for (std::size_t i = 1; i + 1 < vals.size(); ++i)
        CHECK(vals[i + 1] - 2.0 * vals[i] + vals[i - 1] >= -1e-12);
}

TEST_CASE("F = B - A pointwise") {
    for (double s = 0.0025; s < 4.0; s *= 1.17) {
        double f = s * s * std::log(s * s);
        double diff = b_pointwise(s) - a_pointwise(s);
        CHECK(diff == doctest::Approx(f).epsilon(1e-13));
    }
}

TEST_CASE("luxemburg norm: zero, homogeneity, gausson oracle") {
    Grid g = make_grid(1, 12.0, 256);
    CHECK(luxemburg_norm(make_field(g)) == 0.0);

    Field u = bulk_field(g, 3);
    double k = luxemburg_norm(u);
    Field u3 = u;
    for (auto& v : u3.values) v *= 3.0;
    CHECK(luxemburg_norm(u3) == doctest::Approx(3.0 * k).epsilon(1e-10));

    Field phi = gausson_field({0.0, 1}, g);
    double kstar = luxemburg_norm(phi);
    CHECK(kstar == doctest::Approx(kLuxGausson).epsilon(1e-6));
    // the defining equation holds at the returned root
    Field scaled = phi;
    for (auto& v : scaled.values) v /= kstar;
    CHECK(orlicz_modular(scaled) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("modular sandwich between k and k^2") {
    Grid g = make_grid(1, 12.0, 128);
    for (std::uint64_t s = 0; s < 100; ++s) {
        Field u = bulk_field(g, 500 + s);
        double k = luxemburg_norm(u);
        double m = orlicz_modular(u);
        CHECK(m >= std::min(k, k * k) * (1.0 - 1e-8));
        CHECK(m <= std::max(k, k * k) * (1.0 + 1e-8));
    }
}

TEST_CASE("h1 and W norms of the gausson") {
    Grid g = make_grid(1, 12.0, 256);
    Field phi = gausson_field({0.0, 1}, g);
    CHECK(h1_norm(phi) == doctest::Approx(kH1Gausson).epsilon(1e-12));
    CHECK(w_norm(phi) == doctest::Approx(kWGausson).epsilon(1e-6));
    CHECK(w_norm(make_field(g)) == 0.0);
    for (std::uint64_t s = 0; s < 10; ++s) {
        Field u = bulk_field(g, 40 + s);
        CHECK(w_norm(u) >= h1_norm(u));
    }
}

TEST_CASE("log-sobolev gap: equality cases and random sweep") {
    Grid g = make_grid(1, 12.0, 256);

    // matched gaussian at alpha = 1
    Field f = make_field(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double x = g.coord(i);
        f.values[i] = std::exp(-0.5 * M_PI * x * x);
    }
    CHECK(std::abs(log_sobolev_gap(f, 1.0)) < 1e-9);

    // the gausson is the equality case at alpha = sqrt(pi)
    Field phi = gausson_field({0.0, 1}, g);
    CHECK(std::abs(log_sobolev_gap(phi, std::sqrt(M_PI))) < 1e-9);

    const double alphas[4] = {0.5, 1.0, std::sqrt(M_PI), 3.0};
    for (std::uint64_t s = 0; s < 25; ++s) {
        Field u = bulk_field(g, 900 + s);
        for (double a : alphas) CHECK(log_sobolev_gap(u, a) >= -1e-9);
    }

    CHECK_THROWS_AS(log_sobolev_gap(make_field(g), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(log_sobolev_gap(phi, 0.0), std::invalid_argument);
}

TEST_CASE("nehari rescale: gausson fixed point and projection property") {
    Grid g = make_grid(1, 12.0, 256);
    Field phi = gausson_field({0.5, 1}, g);
    Field back = nehari_rescale(phi, 0.5);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        worst = std::max(worst, std::abs(back.values[i] - phi.values[i]));
    CHECK(worst < 1e-13);

    for (double lam : {0.5, 2.0, 5.0}) {
        Field lp = phi;
        for (auto& v : lp.values) v *= lam;
        Field r = nehari_rescale(lp, 0.5);
        worst = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            worst = std::max(worst, std::abs(r.values[i] - phi.values[i]));
        CHECK(worst < 1e-12);
    }

    for (std::uint64_t s = 0; s < 100; ++s) {
        Field u = bulk_field(g, 700 + s);
        Field r = nehari_rescale(u, 0.0);
        CHECK(std::abs(nehari(r, 0.0)) <= 1e-10 * std::max(1.0, charge(r)));
    }
    CHECK_THROWS_AS(nehari_rescale(make_field(g), 0.0), std::invalid_argument);
}

TEST_CASE("functional report identities and csv layout") {
    Grid g = make_grid(1, 12.0, 128);
    Field u = bulk_field(g, 21);
    FunctionalReport r = functional_report(u, 0.7);
    CHECK(r.energy == doctest::Approx(0.5 * r.kinetic - 0.5 * r.entropy).epsilon(1e-12));
    CHECK(r.action == doctest::Approx(r.energy + 0.5 * (r.omega + 1.0) * r.charge)
                          .epsilon(1e-12));
    CHECK(r.nehari ==
          doctest::Approx(r.kinetic + r.omega * r.charge - r.entropy).epsilon(1e-12));
    CHECK(r.action - 0.5 * r.nehari == doctest::Approx(0.5 * r.charge).epsilon(1e-12));
    CHECK(r.w_norm == doctest::Approx(r.h1_norm + r.luxemburg).epsilon(1e-12));
    CHECK(r.csv_header() ==
          "omega,charge,kinetic,entropy,energy,action,nehari,luxemburg,h1_norm,w_norm\n");
    // one row, ten comma-separated columns
    std::string row = r.csv_row();
    CHECK(std::count(row.begin(), row.end(), ',') == 9);
    CHECK(row.back() == '\n');
}
