#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pulsepsd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDetection = 2;

// Runs one command. `args` excludes the program name. Output files go where
// the flags say; progress and notes go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Reads a flat key=value config file into `--key=value` tokens. Blank lines
// and lines starting with '#' are ignored.
std::vector<std::string> config_tokens(const std::string& path);

// Parses "lo:hi:step" (inclusive) or a comma-separated list.
std::vector<double> parse_deltas(const std::string& text);

}  // namespace pulsepsd::cli
