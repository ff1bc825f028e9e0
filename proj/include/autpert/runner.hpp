#pragma once

// Executes scene programs and serializes their reports.

#include "autpert/dsl.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace autpert {

struct RunOptions {
  std::uint64_t seed = 0;
  double tol = 1e-6;
  /// Boundary resolution for planar regions.
  double resolution = 1e-3;
  /// Floor on the boundary resolution in C^n, n >= 2, where a 1e-3 net of a
  /// 3-sphere would need billions of points.
  double resolution_nd = 0.05;
  std::size_t samples = 1000;
  /// Directory for render output.
  std::string out_dir = ".";
  bool timing = false;
};

using ParamValue = std::variant<double, std::string>;

struct CommandReport {
  std::string command;
  /// "pass", "fail" or "error".
  std::string status = "pass";
  std::optional<double> max_deviation;
  std::optional<double> tolerance;
  std::optional<std::size_t> samples;
  double elapsed_ms = 0.0;
  std::vector<std::pair<std::string, ParamValue>> params;
  std::string message;
};

struct RunReport {
  std::vector<CommandReport> commands;
  bool pass() const;
  /// 0 when every command passed, 1 otherwise.
  int exit_code() const { return pass() ? 0 : 1; }
};

/// Rejects names used before they are bound.  Throws dsl::ParseError.
void check_bindings(const dsl::Program& p);

/// Runs the commands in order.  Binding and type errors throw dsl::ParseError;
/// failing constructions and checks are recorded in the report.
RunReport run(const dsl::Program& p, const RunOptions& opt = {});

std::string to_kv(const RunReport& r, bool timing);
std::string to_json(const RunReport& r, bool timing);

}  // namespace autpert
