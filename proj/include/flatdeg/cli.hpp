#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace flatdeg {

enum ExitCode : int {
  exit_ok = 0,
  exit_failed = 1,  // a verdict failed, or a numerical/internal error
  exit_parse = 2,
  exit_resource = 3,
  exit_contradiction = 4,
};

struct RunConfig {
  std::string command;  // construct certify orbit ekz lyapunov bform bounds locus
  std::string input;    // path, "-" for stdin
  long steps = 100000;
  int seeds = 5;
  double epsilon = 0.02;
  int orbit_cap = 10000;
  std::string out;  // empty: stdout
  std::string format = "json";
  std::string trace;  // lyapunov: CSV path for per-block partial exponents
  std::uint64_t first_seed = 1;

  // Throws ParseError for non-positive counts, epsilon outside (0, 0.1) or an unknown format.
  void validate() const;
};

// Reads the input (one record per line, '#' comments), runs the command and
// writes one report per line. Diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& err);

}  // namespace flatdeg
