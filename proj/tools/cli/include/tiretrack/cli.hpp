#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tiretrack/verify.hpp"

namespace tiretrack::cli {

enum class Command { Simulate, Monodromy, Verify, Sweep, Dual, Equidistant };

std::string_view to_string(Command c) noexcept;
Command command_from_string(std::string_view name);

struct RunConfig {
  Command command = Command::Monodromy;
  std::string curve_file;
  std::optional<Model> model;   ///< needed only for CSV curves whose model cannot be inferred
  std::vector<double> ls;
  int samples = 0;              ///< 0 keeps the per-curve value
  double tol_parabolic = 1e-8;
  std::string out = "-";        ///< path prefix; "-" writes to standard output
  std::set<std::string> formats;  ///< empty: json for monodromy/verify, csv otherwise
  std::string check = "all";
  std::optional<double> distance;
  std::optional<double> alpha0;
  int steps_per_sample = 4;
};

/// Strict JSON curve schema: one object or an array of objects with keys
/// id, model, kind, radius, rho0, cos, sin, samples, base_point.
/// Throws ParseError, SchemaError or SpecInvalid with line context.
std::vector<CurveSpec> parse_curve_text(std::string_view text);
std::vector<CurveSpec> parse_curve_file(const std::string& path);

/// Curve CSV as written by the dual and equidistant commands.
std::string curve_csv(const WaveFront& w);
WaveFront parse_curve_csv(std::string_view text, std::optional<Model> model = std::nullopt);

/// Writes through a temporary file and a rename.
void write_atomic(const std::string& path, std::string_view content);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and runs. Exit codes: 0 ok, 1 verification failed or
/// numerical failure, 2 usage or input error.
int main_entry(int argc, char** argv);

}  // namespace tiretrack::cli
