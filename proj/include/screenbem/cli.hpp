#pragma once

// Command-line front end. Subcommands: mesh, solve, field, farfield,
// converge, null, hole, gap. Each reads a JSON configuration.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <iosfwd>
#include <string>

namespace screenbem {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitOther = 1;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Commented configuration template for a subcommand.
std::string example_config(const std::string& subcommand);

}  // namespace screenbem
