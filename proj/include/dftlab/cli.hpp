#pragma once

// Command-line front end. `run` is the whole program minus process setup, so
// tests can drive it with in-memory streams.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace dftlab::cli {

enum ExitCode : int { ok = 0, input_error = 1, solver_error = 2, violation = 3 };

/// Uniform grid min..max with count points; count = 1 gives {min}.
struct Axis {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 1;

  void validate(const std::string& name) const;  ///< count >= 1, min <= max, finite
  [[nodiscard]] std::vector<double> values() const;
};

enum class Format { csv, json };

struct RunConfig {
  std::string subcommand;
  std::string output;  ///< empty: standard output
  Format format = Format::csv;
  bool fail_on_violation = false;
};

/// Flat `key = value` lines; '#' starts a comment. Keys are long flag names
/// without the leading dashes. Throws InvalidInput on unreadable files or
/// malformed lines.
std::map<std::string, std::string> read_config(const std::string& path);

/// 17 significant digits, '.' separator, independent of the C++ locale.
std::string format_double(double v);

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dftlab::cli
