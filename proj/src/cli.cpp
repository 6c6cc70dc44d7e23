#include "lognls/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "lognls/errors.hpp"
#include "lognls/evolve.hpp"
#include "lognls/functionals.hpp"
#include "lognls/gausson.hpp"
#include "lognls/grid.hpp"
#include "lognls/ground_state.hpp"
#include "lognls/io.hpp"
#include "lognls/random_fields.hpp"
#include "lognls/stability.hpp"

namespace lognls {

namespace {

const std::set<std::string> kGridKeys = {"dim", "half_width", "points"};
const std::set<std::string> kOutputKeys = {"dir"};

std::string path_join(const std::string& dir, const std::string& name) {
    if (dir.empty()) return name;
    if (dir.back() == '/') return dir + name;
    return dir + "/" + name;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw config_error("cannot create output directory: " + dir + ": " + ec.message());
}

Grid grid_from_config(const Config& cfg) {
    return make_grid(static_cast<int>(cfg.get_int("grid", "dim")),
                     cfg.get_double("grid", "half_width"),
                     static_cast<int>(cfg.get_int("grid", "points")));
}

// Fixed-size pool over [0, n); the first exception wins and is rethrown after
// all workers drain.
void run_jobs(int jobs, int n, const std::function<void(int)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex err_mx;
    std::vector<std::thread> pool;
    const int nt = std::min(jobs, n);
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mx);
                    if (!err) err = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace

std::string resolve_out_dir(const std::string& flag_value, const Config& cfg) {
    if (!flag_value.empty()) return flag_value;
    if (cfg.has("output", "dir")) return cfg.get_string("output", "dir");
    if (const char* env = std::getenv("LOGNLS_OUT"); env && *env) return env;
    return "out";
}

// ---- groundstate -------------------------------------------------------------

int cmd_groundstate(const Config& cfg, const CliContext& ctx) {
    cfg.require_known({{"grid", kGridKeys},
                       {"groundstate", {"omega", "init"}},
                       {"minimize",
                        {"max_iters", "grad_tol", "step_init", "backtrack_factor", "seed"}},
                       {"output", kOutputKeys}});
    const Grid g = grid_from_config(cfg);
    const std::vector<double> omegas = cfg.get_double_list("groundstate", "omega");
    if (omegas.empty()) {
        std::fprintf(stderr, "groundstate: the omega list is empty; give at least one value\n");
        return 2;
    }
    const std::string init_kind = cfg.get_string("groundstate", "init", "random");

    MinimizeOptions mopts;
    mopts.max_iters = static_cast<int>(cfg.get_int("minimize", "max_iters", mopts.max_iters));
    mopts.grad_tol = cfg.get_double("minimize", "grad_tol", mopts.grad_tol);
    mopts.step_init = cfg.get_double("minimize", "step_init", mopts.step_init);
    mopts.backtrack_factor =
        cfg.get_double("minimize", "backtrack_factor", mopts.backtrack_factor);
    mopts.seed = cfg.get_u64("minimize", "seed", mopts.seed);
    if (ctx.seed_override) mopts.seed = *ctx.seed_override;
    mopts.validate();

    ensure_dir(ctx.out_dir);
    std::vector<GroundStateResult> results(omegas.size());
    run_jobs(ctx.jobs, static_cast<int>(omegas.size()), [&](int i) {
        GroundStateResult r = minimize_action(omegas[static_cast<std::size_t>(i)], g, init_kind,
                                              mopts);
        const std::string stem = path_join(ctx.out_dir, "groundstate_" + std::to_string(i));
        write_file_atomic(stem + ".json", ground_state_json(r, g));
        write_snapshot(stem + ".field", r.minimizer, 0.0);
        results[static_cast<std::size_t>(i)] = std::move(r);
    });

    std::string csv =
        "omega,dim,action,d_closed,rel_error,iterations,converged,grad_norm,"
        "elliptic_residual,orbit_distance_l2\n";
    bool all_converged = true;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const GroundStateResult& r = results[i];
        const double rel = std::abs(r.action_value - r.d_closed_ref) / r.d_closed_ref;
        csv += format_double(r.omega) + "," + std::to_string(g.dim) + "," +
               format_double(r.action_value) + "," + format_double(r.d_closed_ref) + "," +
               format_double(rel) + "," + std::to_string(r.iterations) + "," +
               (r.converged ? "1" : "0") + "," + format_double(r.grad_norm) + "," +
               format_double(r.elliptic_residual_value) + "," +
               format_double(r.orbit_distance_l2) + "\n";
        if (!r.converged) all_converged = false;
        if (r.elliptic_residual_value > 1e-3)
            std::fprintf(stderr,
                         "groundstate: omega=%g stationarity residual %.3e exceeds 1e-3\n",
                         r.omega, r.elliptic_residual_value);
    }
    write_file_atomic(path_join(ctx.out_dir, "groundstate_summary.csv"), csv);

    if (!ctx.quiet) {
        std::printf("%10s %12s %12s %10s %6s %5s\n", "omega", "action", "closed_form",
                    "rel_error", "iters", "conv");
        for (const GroundStateResult& r : results) {
            const double rel = std::abs(r.action_value - r.d_closed_ref) / r.d_closed_ref;
            std::printf("%10.4g %12.8g %12.8g %10.2e %6d %5s\n", r.omega, r.action_value,
                        r.d_closed_ref, rel, r.iterations, r.converged ? "yes" : "NO");
        }
    }
    return all_converged ? 0 : 1;
}

// ---- simulate ----------------------------------------------------------------

namespace {

Field simulate_initial_field(const Config& cfg, const Grid& g, double omega) {
    const std::string kind = cfg.get_string("simulate", "init", "gausson");
    const GaussonParams p{omega, g.dim};
    if (kind == "gausson") return gausson_field(p, g);
    if (kind == "gausson_bump") {
        // Gausson plus a small real radial bump: generic non-stationary data
        // whose conservation behavior is still easy to reason about.
        const double amp = cfg.get_double("simulate", "bump_amp", 0.01);
        Field f = gausson_field(p, g);
        int idx[3];
        for (std::size_t i = 0; i < f.size(); ++i) {
            unflatten(g, i, idx);
            double r2 = 0.0;
            for (int d = 0; d < g.dim; ++d) {
                const double x = g.coord(static_cast<std::size_t>(idx[d]));
                r2 += x * x;
            }
            f.values[i] += amp * std::exp(-r2);
        }
        return f;
    }
    if (kind == "orbit") {
        const double theta = cfg.get_double("simulate", "theta", 0.0);
        std::vector<double> y(static_cast<std::size_t>(g.dim), 0.0);
        if (cfg.has("simulate", "shift")) {
            y = cfg.get_double_list("simulate", "shift");
            if (y.size() != static_cast<std::size_t>(g.dim))
                throw config_error("simulate: shift needs one component per dimension");
        }
        return orbit_element(p, theta, y, g);
    }
    throw config_error("simulate: unknown init '" + kind + "'");
}

}  // namespace

int cmd_simulate(const Config& cfg, const CliContext& ctx) {
    cfg.require_known({{"grid", kGridKeys},
                       {"simulate", {"omega", "init", "bump_amp", "theta", "shift"}},
                       {"evolve",
                        {"dt", "t_final", "amp_floor", "snapshot_every", "diagnostics_every"}},
                       {"output", kOutputKeys}});
    const Grid g = grid_from_config(cfg);
    const double omega = cfg.get_double("simulate", "omega", 0.0);

    EvolveOptions eopts;
    eopts.dt = cfg.get_double("evolve", "dt");
    eopts.t_final = cfg.get_double("evolve", "t_final");
    eopts.amp_floor = cfg.get_double("evolve", "amp_floor", eopts.amp_floor);
    eopts.snapshot_every =
        static_cast<int>(cfg.get_int("evolve", "snapshot_every", eopts.snapshot_every));
    eopts.diagnostics_every =
        static_cast<int>(cfg.get_int("evolve", "diagnostics_every", eopts.diagnostics_every));
    eopts.validate();

    const Field u0 = simulate_initial_field(cfg, g, omega);
    ensure_dir(ctx.out_dir);
    TrajectoryDiagnostics diag = evolve_run(u0, eopts, omega);

    write_file_atomic(path_join(ctx.out_dir, "diagnostics.csv"),
                      diag.csv_header() + diag.csv());
    write_file_atomic(path_join(ctx.out_dir, "trajectory.json"), trajectory_json(diag, g));
    write_file_atomic(path_join(ctx.out_dir, "drift.gp"), drift_plot_script("diagnostics.csv"));
    for (std::size_t k = 0; k < diag.snapshots.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof(name), "snapshot_%04zu.field", k);
        write_snapshot(path_join(ctx.out_dir, name), diag.snapshots[k], diag.snapshot_times[k]);
    }

    if (diag.aborted) {
        std::fprintf(stderr, "simulate: aborted: %s\n", diag.abort_reason.c_str());
        return 3;
    }
    if (!ctx.quiet)
        std::printf("t_final=%g  charge_drift=%.3e  energy_drift=%.3e  boundary_mass=%.3e\n",
                    eopts.t_final, diag.max_charge_drift(), diag.max_energy_drift(),
                    diag.max_boundary_mass());
    return 0;
}

// ---- stability ---------------------------------------------------------------

int cmd_stability(const Config& cfg, const CliContext& ctx) {
    cfg.require_known({{"grid", kGridKeys},
                       {"stability", {"omega", "kind", "delta", "seed", "band_limit"}},
                       {"evolve",
                        {"dt", "t_final", "amp_floor", "snapshot_every", "diagnostics_every"}},
                       {"output", kOutputKeys}});
    const Grid g = grid_from_config(cfg);
    const double omega = cfg.get_double("stability", "omega", 0.0);
    const std::vector<double> deltas = cfg.get_double_list("stability", "delta");
    if (deltas.empty()) {
        std::fprintf(stderr, "stability: the delta list is empty; give at least one value\n");
        return 2;
    }

    PerturbationSpec base;
    base.kind = cfg.get_string("stability", "kind");
    base.seed = cfg.get_u64("stability", "seed", base.seed);
    base.band_limit = static_cast<int>(cfg.get_int("stability", "band_limit", base.band_limit));
    if (ctx.seed_override) base.seed = *ctx.seed_override;

    EvolveOptions eopts;
    eopts.dt = cfg.get_double("evolve", "dt");
    eopts.t_final = cfg.get_double("evolve", "t_final");
    eopts.amp_floor = cfg.get_double("evolve", "amp_floor", eopts.amp_floor);
    eopts.diagnostics_every =
        static_cast<int>(cfg.get_int("evolve", "diagnostics_every", eopts.diagnostics_every));
    eopts.snapshot_every = 0;
    eopts.validate();

    ensure_dir(ctx.out_dir);
    std::vector<StabilityReport> reports(deltas.size());
    run_jobs(ctx.jobs, static_cast<int>(deltas.size()), [&](int i) {
        PerturbationSpec spec = base;
        spec.delta = deltas[static_cast<std::size_t>(i)];
        StabilityReport rep = stability_experiment(omega, g, spec, eopts);
        const std::string stem = path_join(ctx.out_dir, "stability_" + std::to_string(i));
        write_file_atomic(stem + ".json", stability_json(rep, g));
        write_file_atomic(stem + ".csv", rep.csv_header(g.dim) + rep.csv(g.dim));
        write_file_atomic(stem + ".gp",
                          distance_plot_script("stability_" + std::to_string(i) + ".csv"));
        reports[static_cast<std::size_t>(i)] = std::move(rep);
    });

    std::string csv =
        "delta,kind,seed,initial_distance_w,max_distance_w,ratio,max_charge_drift,"
        "max_energy_drift,max_boundary_mass,polish_drift_flag,aborted\n";
    bool any_abort = false;
    for (const StabilityReport& r : reports) {
        csv += format_double(r.spec.delta) + "," + r.spec.kind + "," +
               std::to_string(r.spec.seed) + "," + format_double(r.initial_distance_w) + "," +
               format_double(r.max_distance_w) + "," +
               format_double(r.max_distance_w / r.spec.delta) + "," +
               format_double(r.max_charge_drift) + "," + format_double(r.max_energy_drift) +
               "," + format_double(r.max_boundary_mass) + "," +
               (r.polish_drift_flag ? "1" : "0") + "," + (r.aborted ? "1" : "0") + "\n";
        if (r.aborted) any_abort = true;
    }
    write_file_atomic(path_join(ctx.out_dir, "stability_summary.csv"), csv);

    if (!ctx.quiet) {
        std::printf("%10s %18s %16s %8s %6s\n", "delta", "initial_dist_w", "max_dist_w",
                    "ratio", "flag");
        for (const StabilityReport& r : reports)
            std::printf("%10.4g %18.6e %16.6e %8.3f %6s\n", r.spec.delta,
                        r.initial_distance_w, r.max_distance_w,
                        r.max_distance_w / r.spec.delta, r.polish_drift_flag ? "drift" : "-");
    }
    if (any_abort) {
        for (const StabilityReport& r : reports)
            if (r.aborted)
                std::fprintf(stderr, "stability: delta=%g aborted: %s\n", r.spec.delta,
                             r.abort_reason.c_str());
        return 3;
    }
    return 0;
}

// ---- checks ------------------------------------------------------------------

namespace {

struct CheckRow {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Gaussian c*exp(-pi |x|^2 / (2 alpha^2)), the equality case of the
// log-Sobolev inequality at parameter alpha.
Field matched_gaussian(const Grid& g, double alpha, double c) {
    Field f = make_field(g);
    const double rate = M_PI / (2.0 * alpha * alpha);
    int idx[3];
    for (std::size_t i = 0; i < g.size(); ++i) {
        unflatten(g, i, idx);
        double r2 = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            const double x = g.coord(static_cast<std::size_t>(idx[d]));
            r2 += x * x;
        }
        f.values[i] = c * std::exp(-rate * r2);
    }
    return f;
}

}  // namespace

int cmd_checks(const Config& cfg, const CliContext& ctx) {
    cfg.require_known({{"grid", kGridKeys},
                       {"checks", {"fields", "seeds", "band_limit"}},
                       {"output", kOutputKeys}});
    const Grid g = cfg.has_section("grid") ? grid_from_config(cfg) : make_grid(1, 12.0, 256);
    const int n_fields = static_cast<int>(cfg.get_int("checks", "fields", 100));
    const int n_seeds = static_cast<int>(cfg.get_int("checks", "seeds", 10));
    const int band = static_cast<int>(cfg.get_int("checks", "band_limit", 8));
    if (n_fields < 1 || n_seeds < 1) throw config_error("checks: fields and seeds must be >= 1");
    const std::uint64_t seed0 = ctx.seed_override ? *ctx.seed_override : 1;
    const double sigma = g.half_width / 4.0;  // keeps the mass in the bulk, away
                                              // from the periodic boundary
    std::vector<CheckRow> rows;
    char buf[160];

    {  // log-Sobolev gap on random band-limited fields, all four alphas
        const double alphas[4] = {0.5, 1.0, std::sqrt(M_PI), 3.0};
        double worst = 1e300;
        for (int i = 0; i < n_fields; ++i) {
            const Field u = random_bandlimited_field(g, seed0 + static_cast<std::uint64_t>(i),
                                                     band, sigma);
            for (double a : alphas) worst = std::min(worst, log_sobolev_gap(u, a));
        }
        std::snprintf(buf, sizeof(buf), "min gap %.3e over %d fields x 4 alphas (>= -1e-9)",
                      worst, n_fields);
        rows.push_back({"log_sobolev_random", worst >= -1e-9, buf});
    }
    {  // equality case: matched Gaussians over several seeds' worth of scales
        const double alphas[4] = {0.5, 1.0, std::sqrt(M_PI), 3.0};
        double worst = 0.0;
        for (int s = 0; s < n_seeds; ++s) {
            const double c = 0.5 + 0.25 * s;
            for (double a : alphas)
                worst = std::max(worst, std::abs(log_sobolev_gap(matched_gaussian(g, a, c), a)));
        }
        std::snprintf(buf, sizeof(buf), "max |gap| %.3e on matched Gaussians (<= 1e-8)", worst);
        rows.push_back({"log_sobolev_equality", worst <= 1e-8, buf});
    }
    {  // Young-function seam: value and derivative agree across branches
        const double s_star = std::exp(-3.0);
        const double value_ref = 6.0 * std::exp(-6.0);
        const double deriv_ref = 10.0 * std::exp(-3.0);
        double large_value = a_branch_large(s_star);
        if (ctx.inject_fault) large_value += 1e-12;  // sabotage knob: self-test of this table
        const double dv = std::max(std::abs(a_branch_small(s_star) - value_ref),
                                   std::abs(large_value - value_ref)) /
                          value_ref;
        const double dd = std::max(std::abs(a_prime_branch_small(s_star) - deriv_ref),
                                   std::abs(a_prime_branch_large(s_star) - deriv_ref)) /
                          deriv_ref;
        const double worst = std::max(dv, dd);
        std::snprintf(buf, sizeof(buf), "branch mismatch %.3e (<= 1e-15)%s", worst,
                      ctx.inject_fault ? " [fault injected]" : "");
        rows.push_back({"orlicz_seam", worst <= 1e-15, buf});
    }
    {  // modular sandwich min(k,k^2) <= integral A(|u|) <= max(k,k^2)
        double worst = 0.0;
        for (int i = 0; i < n_fields; ++i) {
            const Field u = random_bandlimited_field(
                g, seed0 + 1000 + static_cast<std::uint64_t>(i), band, sigma);
            const double k = luxemburg_norm(u);
            const double m = orlicz_modular(u);
            const double lo = std::min(k, k * k);
            const double hi = std::max(k, k * k);
            worst = std::max(worst, (lo - m) / std::max(1.0, lo));
            worst = std::max(worst, (m - hi) / std::max(1.0, hi));
        }
        std::snprintf(buf, sizeof(buf), "max sandwich violation %.3e over %d fields (<= 1e-8)",
                      worst, n_fields);
        rows.push_back({"orlicz_sandwich", worst <= 1e-8, buf});
    }
    {  // Luxemburg norm is a gauge: absolutely homogeneous
        const double scales[3] = {0.3, 2.0, 7.0};
        double worst = 0.0;
        const int n = std::min(n_fields, 20);
        for (int i = 0; i < n; ++i) {
            Field u = random_bandlimited_field(g, seed0 + 2000 + static_cast<std::uint64_t>(i),
                                               band, sigma);
            const double k = luxemburg_norm(u);
            for (double c : scales) {
                Field cu = u;
                for (cplx& v : cu.values) v *= c;
                worst = std::max(worst, std::abs(luxemburg_norm(cu) - c * k) / (c * k));
            }
        }
        std::snprintf(buf, sizeof(buf), "max |k(cu)-c k(u)|/ck %.3e (<= 1e-10)", worst);
        rows.push_back({"luxemburg_homogeneity", worst <= 1e-10, buf});
    }
    {  // exact projection onto the zero set of the constraint functional
        double worst = 0.0;
        const double omegas[3] = {-1.0, 0.0, 1.0};
        for (int i = 0; i < n_fields; ++i) {
            const Field u = random_bandlimited_field(
                g, seed0 + 3000 + static_cast<std::uint64_t>(i), band, sigma);
            const double w = omegas[i % 3];
            const Field v = nehari_rescale(u, w);
            worst = std::max(worst, std::abs(nehari(v, w)) / std::max(1.0, charge(v)));
        }
        double fixed_point = 0.0;
        const GaussonParams p{0.0, g.dim};
        const Field phi = gausson_field(p, g);
        for (double lam : {0.5, 2.0, 5.0}) {
            Field lp = phi;
            for (cplx& v : lp.values) v *= lam;
            const Field back = nehari_rescale(lp, 0.0);
            for (std::size_t j = 0; j < phi.size(); ++j)
                fixed_point = std::max(fixed_point, std::abs(back.values[j] - phi.values[j]));
        }
        const bool ok = worst <= 1e-10 && fixed_point <= 1e-12;
        std::snprintf(buf, sizeof(buf),
                      "max |I|/max(1,Q) %.3e (<= 1e-10), gausson fixed point %.3e (<= 1e-12)",
                      worst, fixed_point);
        rows.push_back({"nehari_rescale", ok, buf});
    }
    {  // entropy splitting under separation: residual decreasing, final tiny
        const Grid gb = make_grid(1, 16.0, 256);
        const GaussonParams p{0.0, 1};
        const Field base = gausson_field(p, gb);
        Field bump = make_field(gb);
        const double amp = 0.5 * std::exp(0.5);
        for (std::size_t i = 0; i < gb.size(); ++i) {
            const double x = gb.coord(i);
            bump.values[i] = amp * std::exp(-x * x);
        }
        const std::vector<double> shifts = {1, 2, 3, 4, 5, 6, 7, 8};
        const std::vector<double> res = brezis_lieb_demo(base, bump, shifts);
        bool monotone = true;
        for (std::size_t i = 1; i < res.size(); ++i)
            if (res[i] > res[i - 1]) monotone = false;
        const double last = res.back();
        std::snprintf(buf, sizeof(buf), "monotone=%s, final residual %.3e (<= 1e-6)",
                      monotone ? "yes" : "no", last);
        rows.push_back({"entropy_splitting", monotone && last <= 1e-6, buf});
    }

    bool all_pass = true;
    for (const CheckRow& r : rows) {
        if (!r.pass) all_pass = false;
        if (!ctx.quiet || !r.pass)
            std::printf("%-22s %s  %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                        r.detail.c_str());
    }
    if (!ctx.quiet)
        std::printf("%d/%zu checks passed\n",
                    static_cast<int>(std::count_if(rows.begin(), rows.end(),
                                                   [](const CheckRow& r) { return r.pass; })),
                    rows.size());
    return all_pass ? 0 : 1;
}

}  // namespace lognls
