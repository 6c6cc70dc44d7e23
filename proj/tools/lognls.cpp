#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "lognls/cli.hpp"
#include "lognls/config.hpp"
#include "lognls/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for the logarithmic Schrodinger equation"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_flag;
    std::uint64_t seed = 0;
    int jobs = 1;
    bool quiet = false;
    bool inject_fault = false;

    app.add_option("--config", config_path, "run configuration file");
    app.add_option("--out", out_flag, "output directory (overrides config and LOGNLS_OUT)");
    CLI::Option* seed_opt = app.add_option("--seed", seed, "override every configured seed");
    app.add_option("--jobs", jobs, "max concurrent experiments")->check(CLI::PositiveNumber);
    app.add_flag("--quiet", quiet, "suppress summary tables on stdout");

    CLI::App* gs = app.add_subcommand("groundstate",
                                      "minimize the action over an omega list, compare against "
                                      "the closed-form level");
    CLI::App* sim = app.add_subcommand("simulate",
                                       "integrate in time, record conservation diagnostics");
    CLI::App* st = app.add_subcommand("stability",
                                      "perturb the standing wave, evolve, track the orbit "
                                      "distance");
    CLI::App* ck = app.add_subcommand("checks",
                                      "property suites: inequalities, projections, splitting");
    ck->add_flag("--inject-fault", inject_fault,
                 "deliberately break one comparison; the table must catch it");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        lognls::Config cfg;
        if (!config_path.empty()) {
            cfg = lognls::Config::parse_file(config_path);
        } else if (!ck->parsed()) {
            throw lognls::config_error("this command needs --config");
        }
        lognls::CliContext ctx;
        ctx.out_dir = lognls::resolve_out_dir(out_flag, cfg);
        if (seed_opt->count() > 0) ctx.seed_override = seed;
        ctx.jobs = jobs;
        ctx.quiet = quiet;
        ctx.inject_fault = inject_fault;

        if (gs->parsed()) return lognls::cmd_groundstate(cfg, ctx);
        if (sim->parsed()) return lognls::cmd_simulate(cfg, ctx);
        if (st->parsed()) return lognls::cmd_stability(cfg, ctx);
        return lognls::cmd_checks(cfg, ctx);
    } catch (const lognls::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const lognls::numerical_error& e) {
        std::fprintf(stderr, "numerical abort: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
