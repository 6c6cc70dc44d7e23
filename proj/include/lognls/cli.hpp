#pragma once
#include <cstdint>
#include <optional>
#include <string>

#include "lognls/config.hpp"

namespace lognls {

struct CliContext {
    std::string out_dir;  // already resolved: --out > config > LOGNLS_OUT > ./out
    std::optional<std::uint64_t> seed_override;
    int jobs = 1;
    bool quiet = false;
    bool inject_fault = false;  // checks only: sabotage the A-seam comparison
};

// Resolve the output directory from flag, config, environment, in that order.
std::string resolve_out_dir(const std::string& flag_value, const Config& cfg);

// Exit codes: 0 success, 1 property failure, 2 config error, 3 numerical abort.
int cmd_groundstate(const Config& cfg, const CliContext& ctx);
int cmd_simulate(const Config& cfg, const CliContext& ctx);
int cmd_stability(const Config& cfg, const CliContext& ctx);
int cmd_checks(const Config& cfg, const CliContext& ctx);

}  // namespace lognls
