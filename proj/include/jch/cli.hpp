#pragma once

// Command-line front end: turns flags into a RunConfig, runs one command and
// renders its rows as CSV or JSON.

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "jch/secular.hpp"

namespace jch::cli {

enum class Command { spectrum, probs, bands, gcrit, check };
enum class Format { csv, json };

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitNumerics = 2,
  kExitNoBoundState = 3,
};

struct RunConfig {
  Command command = Command::spectrum;

  int n = 50;
  double delta = 0.0;
  double j = 1.0;
  bool allow_zero_j = false;

  /// Couplings in units of J (absolute g when J = 0).
  std::vector<double> g_over_j;
  /// "all", "odd", "even", one integer, or a comma-separated list.
  std::string sectors = "all";

  int p_angle_grid = 64;
  int resolution = kDefaultBandResolution;

  std::string out;        ///< empty or "-" means stdout
  std::string g_samples;  ///< bands: optional G(lambda) table path
  int g_sample_count = 2001;
  Format format = Format::csv;

  double tol_reality = 1e-9;
  double tol_root = 1e-12;
  double tol_bisection = kCriticalTolerance;

  std::vector<int> check_n_list{4, 6, 8};
  /// probs: "lower", "upper" or "both".
  std::string branch = "both";
  /// check: negate one coupling of every block matrix.
  bool inject_fault = false;
};

using Cell = std::variant<long long, double, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Twelve significant digits, "nan"/"inf" spelled out.
std::string format_double(double x);

std::string render_csv(const Table& table);
std::string render_json(const Table& table);
std::string render(const Table& table, Format format);

/// Sector list named by the selector, ascending, duplicates removed.
std::vector<int> resolve_sectors(const std::string& selector, int n);

/// Parses argv (argv[0] is the program name). Throws jch::Error with
/// InvalidConfig on bad input. Returns nullopt after --help, with the text
/// in `help`.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::string* help = nullptr);

/// Pure evaluation of a command; G samples for `bands` go to `samples` when
/// non-null. `failed` is set when a check row or a gcrit row did not pass.
Table execute(const RunConfig& config, Table* samples = nullptr, bool* failed = nullptr);

Table run_spectrum(const RunConfig& config);
Table run_probs(const RunConfig& config);
Table run_bands(const RunConfig& config, Table* samples = nullptr);
Table run_gcrit(const RunConfig& config, bool* failed = nullptr);
Table run_check(const RunConfig& config, bool* failed = nullptr);

/// Full program: parse, execute, write, map failures onto ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jch::cli
