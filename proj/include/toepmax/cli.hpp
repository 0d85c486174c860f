#pragma once

#include <iosfwd>
#include <string>

namespace toepmax::cli {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;  // usage or parse errors
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitInconclusive = 3;

enum class OutputMode { Json, Text };

struct RunConfig {
  std::string command;  // classify|complete|psd-complete|path|sd|bezout|
                        // gs-invert|demo
  OutputMode output = OutputMode::Json;
  double tol = 1e-10;
  double alpha0 = 1.0;
  double rho = 0.5;
  bool verify = false;
  bool batch = false;  // input is JSON-lines, one instance per line
  int jobs = 1;
  unsigned long long seed = 1;
};

// Executes one command against the given streams and returns the exit
// code. Reports (including error reports, which are single-line JSON
// objects with a "kind" field) go to `out`.
int run(const RunConfig& config, std::istream& in, std::ostream& out);

}  // namespace toepmax::cli
