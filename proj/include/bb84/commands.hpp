// commands.hpp - the bb84raw command-line front end.
//
// Each command builds an output record; run() parses argv, dispatches and
// writes the record. JSON records have the shape
//   {schema_version, command, parameters, rows, provenance}
// and every floating-point value is rounded to 12 significant digits.

#pragma once

#include "bb84/analysis.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

namespace bb84::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

/// Round to 12 significant digits; the shortest round-trip rendering of
/// the result is what the JSON writer prints.
double round12(double x);

/// Locale-independent "%.12g".
std::string format12(double x);

Json thresholds(std::span<const Curve> curves, double tolerance);

/// CSV with header epsilon,I_AB,I_honest,I_maxent,I_minconc,I_hsw,qber.
std::string scan_csv(double start, double stop, double step);

struct TableArgs {
  double epsilon = 0.0;
  std::optional<double> c22;
  std::optional<std::uint64_t> simulate;
  std::uint64_t seed = 0;
};

Json table(const TableArgs& args);

struct PovmCheckArgs {
  double epsilon = 0.0;
  double c22 = 0.0;
  bool optimize = false;
  int restarts = 20;
  std::uint64_t seed = 0;
};

Json povm_check(const PovmCheckArgs& args);

struct SearchArgs {
  double epsilon = 0.0;
  int trials = 200;
  std::uint64_t seed = 0;
  int restarts = 8;
  bool include_log = false;
};

Json search_nonsym(const SearchArgs& args);

/// Exit status: 0 success, 1 domain error, 2 usage error.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace bb84::cli
