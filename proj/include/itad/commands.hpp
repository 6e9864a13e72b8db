#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "itad/run_config.hpp"

namespace itad {

struct CommandOptions {
    std::optional<std::string> out_dir;     // --out overrides output.directory
    std::optional<std::uint64_t> seed;      // --seed
    bool quiet = false;
};

// Each command writes its artifacts plus manifest.json into the output
// directory. Errors are thrown (ConfigError/NumericError/IoError) and
// mapped to exit codes by the CLI.
void cmd_field(const RunConfig& cfg, const CommandOptions& opts);
void cmd_orbit(const RunConfig& cfg, const CommandOptions& opts);
void cmd_sweep(const RunConfig& cfg, const CommandOptions& opts);
void cmd_chaos(const RunConfig& cfg, const CommandOptions& opts);
void cmd_graph_mc(const RunConfig& cfg, const CommandOptions& opts);
void cmd_calibrate(const RunConfig& cfg, const CommandOptions& opts);
void cmd_telegrapher_check(const RunConfig& cfg, const CommandOptions& opts);
void cmd_plot(const std::vector<std::string>& inputs, const CommandOptions& opts);

}  // namespace itad
