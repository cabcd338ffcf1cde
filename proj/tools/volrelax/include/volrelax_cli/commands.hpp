#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "volrelax_cli/run_config.hpp"

namespace volrelax::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitFit = 3;

/// Each command writes into config.out and returns an exit status. Library
/// errors are mapped: data problems -> 2, fit problems -> 3 (outputs written
/// so far are kept and failed fits are marked in the report).
int cmd_analyze(const RunConfig& config, std::ostream& log);
int cmd_omori(const RunConfig& config, std::ostream& log);
int cmd_pattern(const RunConfig& config, std::ostream& log);
int cmd_events(const RunConfig& config, std::ostream& log);
int cmd_synth(const SynthConfig& config, std::ostream& log);

/// Full entry point: parse, dispatch, map exceptions to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace volrelax::cli
