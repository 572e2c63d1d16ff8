#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "routegame/analysis.hpp"

namespace routegame::cli {

enum class Subcommand { Solve, BestResponse, Sweep, Simulate, Throttle, Misalign };

std::string_view to_string(Subcommand subcommand);

struct RunSpec {
  Subcommand subcommand = Subcommand::Solve;
  std::string config_path;
  std::optional<AxisSpec> axis1;
  std::optional<AxisSpec> axis2;
  int n1 = 0;
  int n2 = 0;
  std::optional<int> i;
  std::optional<double> s;
  std::optional<double> q;
  std::int64_t n = 200'000;
  std::uint64_t seed = 0;
  double epsilon = 1e-6;
  std::string out_path;  // empty: standard output
  unsigned workers = 0;
};

// Parses argv (argv[0] is the program name). Throws ValidationError for bad
// or missing options. Returns nullopt when help was requested and printed.
std::optional<RunSpec> parse_args(int argc, const char* const* argv, std::ostream& out);

// Executes a parsed spec, writing the artifact to spec.out_path or `out`.
// Throws ValidationError or InternalError.
void run(const RunSpec& spec, std::ostream& out);

// parse_args + run with exit-status mapping: 0 success, 2 validation error,
// 1 internal error. Error messages go to `err`.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace routegame::cli
