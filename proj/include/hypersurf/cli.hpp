#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hypersurf/obstruction.hpp"

namespace hypersurf {

struct CliInvocation {
  std::string subcommand;  // analyze | embed | verify-k | cross-section | presets
  std::string metric;
  std::string out;
  std::string report;
  std::string candidate;
  std::string format;  // csv | obj; empty picks obj for a .obj output, csv otherwise
  Tolerances tolerances;
  std::optional<std::vector<double>> seed_point;
  std::optional<double> seed_h;
  std::optional<std::vector<double>> seed_grad;
  std::vector<double> levels;
  int threads = 0;
};

// Exit status: 0 success, 2 obstruction found, 3 input error, 4 numerical failure.
int run(const CliInvocation& invocation, std::ostream& log);

// Parses argv (unknown flags are rejected with status 3) and runs.
int run_cli(int argc, const char* const* argv, std::ostream& log);

}  // namespace hypersurf
