#pragma once

#include <iosfwd>

#include <nlohmann/json.hpp>

#include "run_config.hpp"

namespace cumadv::cli {

/// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRejected = 1;
inline constexpr int kExitInvalid = 2;

/// Effective configuration as echoed into every output file.
nlohmann::json config_json(const RunConfig& cfg);

/// Runs cfg.command. Prints a one-line summary (seed included) to `out` and
/// diagnostics to `err`; returns an exit status.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv (flags override any --config file) and runs.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cumadv::cli
