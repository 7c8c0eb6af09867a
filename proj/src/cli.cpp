#include "jch/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "jch/error.hpp"
#include "jch/oracle.hpp"
#include "jch/parallel.hpp"
#include "jch/realspace.hpp"
#include "jch/sector_hamiltonian.hpp"

namespace jch::cli {

namespace {

constexpr double kCheckTolerance = 1e-9;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }

const char* branch_name(Branch b) { return b == Branch::upper ? "upper" : "lower"; }

ModelParams params_for(const RunConfig& config, double g_over_j) {
  // With the hopping switched off g/J has no scale; the value is then g itself.
  const double scale = config.j == 0.0 ? 1.0 : config.j;
  return validate_params({config.n, config.delta, config.j, g_over_j * scale, config.allow_zero_j});
}

std::vector<SectorIndex> sectors_for(const RunConfig& config, const ModelParams& params) {
  std::vector<SectorIndex> out;
  for (int p : resolve_sectors(config.sectors, config.n)) out.push_back(make_sector(params, p));
  return out;
}

void require_couplings(const RunConfig& config, const char* command) {
  if (config.g_over_j.empty()) config_error(std::string(command) + " needs at least one --g-over-j value");
}

std::string cell_text(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, long long>) {
          return std::to_string(v);
        } else {
          return v;
        }
      },
      cell);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

// Sorted-multiset comparison; a count mismatch is an infinite deviation.
double spectrum_deviation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) config_error("cannot open output file '" + path + "'");
  file << text;
  if (!file) config_error("failed writing '" + path + "'");
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string render_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += csv_field(table.columns[c]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += csv_field(cell_text(row[c]));
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const Table& table) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      const auto& name = table.columns[c];
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              // Same 12 digits as the CSV; non-finite values become null.
              if (std::isfinite(v)) {
                obj[name] = std::stod(format_double(v));
              } else {
                obj[name] = nullptr;
              }
            } else {
              obj[name] = v;
            }
          },
          row[c]);
    }
    rows.push_back(std::move(obj));
  }
  return rows.dump(2) + "\n";
}

std::string render(const Table& table, Format format) {
  return format == Format::json ? render_json(table) : render_csv(table);
}

std::vector<int> resolve_sectors(const std::string& selector, int n) {
  if (n < 1) config_error("--n must be positive");
  std::vector<int> out;
  if (selector == "all" || selector == "odd" || selector == "even") {
    for (int p = 0; p < n; ++p) {
      if (selector == "all" || (selector == "odd") == (p % 2 == 1)) out.push_back(p);
    }
    return out;
  }
  if (selector.empty() || selector.back() == ',') config_error("bad --sectors '" + selector + "'");
  std::set<int> picked;
  std::stringstream ss(selector);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int p = 0;
    try {
      p = std::stoi(item, &used);
    } catch (const std::exception&) {
      config_error("bad sector '" + item + "' in --sectors");
    }
    if (used != item.size()) config_error("bad sector '" + item + "' in --sectors");
    if (p < 0 || p >= n) {
      throw Error(ErrorCode::IndexOutOfRange, "sector " + std::to_string(p) + " outside [0, N)");
    }
    picked.insert(p);
  }
  if (picked.empty()) config_error("--sectors selects nothing");
  return {picked.begin(), picked.end()};
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::string* help) {
  RunConfig cfg;
  CLI::App app{"Two-polariton spectra and bound states of a Jaynes-Cummings-Hubbard ring", "jch"};
  app.set_config("--config", "", "flat 'key = value' file; keys are flag names, flags win");

  const std::map<std::string, Command> commands{{"spectrum", Command::spectrum},
                                                 {"probs", Command::probs},
                                                 {"bands", Command::bands},
                                                 {"gcrit", Command::gcrit},
                                                 {"check", Command::check}};
  const std::map<std::string, Format> formats{{"csv", Format::csv}, {"json", Format::json}};

  app.add_option("command", cfg.command, "spectrum | probs | bands | gcrit | check")
      ->required()
      ->transform(CLI::CheckedTransformer(commands));
  app.add_option("--n", cfg.n, "number of cavities")->capture_default_str();
  app.add_option("--delta", cfg.delta, "detuning (cavity minus atom)")->capture_default_str();
  app.add_option("--j", cfg.j, "photon hopping J")->capture_default_str();
  app.add_option("--g-over-j", cfg.g_over_j, "coupling g/J; repeat for a sweep")->expected(1)->take_all();
  app.add_option("--sectors", cfg.sectors, "int | comma list | odd | even | all")->capture_default_str();
  app.add_option("--p-angle-grid", cfg.p_angle_grid, "gcrit: number of angles on [0, 2 pi)")->capture_default_str();
  app.add_option("--resolution", cfg.resolution, "band sampling points per branch")->capture_default_str();
  app.add_option("--out", cfg.out, "output path (default stdout)");
  app.add_option("--g-samples", cfg.g_samples, "bands: also write G(lambda) samples here");
  app.add_option("--g-sample-count", cfg.g_sample_count, "bands: grid points per sector")->capture_default_str();
  app.add_option("--format", cfg.format, "csv | json")->transform(CLI::CheckedTransformer(formats));
  app.add_option("--tol-reality", cfg.tol_reality, "largest |Im lambda| accepted")->capture_default_str();
  app.add_option("--tol-root", cfg.tol_root, "relative root tolerance for G")->capture_default_str();
  app.add_option("--tol-bisection", cfg.tol_bisection, "gcrit bisection tolerance")->capture_default_str();
  app.add_flag("--allow-zero-j", cfg.allow_zero_j, "accept J = 0 (g/J is then read as g)");
  app.add_option("--check-n-list", cfg.check_n_list, "check: chain lengths")->delimiter(',')->expected(1)->take_all();
  app.add_option("--branch", cfg.branch, "probs: lower | upper | both")
      ->check(CLI::IsMember({"lower", "upper", "both"}))
      ->capture_default_str();
  app.add_flag("--inject-fault", cfg.inject_fault, "check: corrupt one block entry (harness self-test)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    if (help) *help = app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    config_error(e.what());
  }

  if (cfg.n < 1) config_error("--n must be positive");
  if (cfg.p_angle_grid < 1) config_error("--p-angle-grid must be positive");
  if (cfg.g_sample_count < 2) config_error("--g-sample-count must be at least 2");
  if (!(cfg.tol_reality > 0.0) || !(cfg.tol_root > 0.0) || !(cfg.tol_bisection > 0.0)) {
    config_error("tolerances must be positive");
  }
  for (double g : cfg.g_over_j) {
    if (!std::isfinite(g)) config_error("--g-over-j values must be finite");
  }
  return cfg;
}

Table run_spectrum(const RunConfig& config) {
  require_couplings(config, "spectrum");
  std::vector<ModelParams> grid;
  for (double g : config.g_over_j) grid.push_back(params_for(config, g));
  const auto sectors = sectors_for(config, grid.front());

  const std::size_t jobs = grid.size() * sectors.size();
  std::vector<std::vector<std::vector<Cell>>> per_job(jobs);
  const SolveOptions opts{config.tol_reality, kSpuriousNormTolerance};
  for_each_index(jobs, Execution::parallel, [&](std::size_t idx) {
    const std::size_t gi = idx / sectors.size();
    const SectorIndex sector = sectors[idx % sectors.size()];
    const auto solution = solve_sector(grid[gi], sector, opts);
    const auto bands = band_intervals(grid[gi], sector, config.resolution);
    long long index = 0;
    for (double lambda : solution.physical_eigenvalues()) {
      const bool bound = !bands.in_band(lambda);
      per_job[idx].push_back({static_cast<long long>(sector.value), index++, lambda, bound,
                              bands.edge_distance(lambda), config.g_over_j[gi]});
    }
  });

  Table table{{"P", "eigen_index", "lambda", "is_bound", "gap_margin", "g_over_j"}, {}};
  for (auto& rows : per_job) {
    for (auto& row : rows) table.rows.push_back(std::move(row));
  }
  return table;
}

Table run_probs(const RunConfig& config) {
  if (config.g_over_j.size() != 1) config_error("probs needs exactly one --g-over-j value");
  const auto params = params_for(config, config.g_over_j.front());
  const auto sectors = sectors_for(config, params);
  if (sectors.size() != 1) config_error("probs needs exactly one sector in --sectors");
  const SectorIndex sector = sectors.front();

  const auto solution = solve_sector(params, sector, {config.tol_reality, kSpuriousNormTolerance});
  const auto bands = band_intervals(params, sector, config.resolution);

  Table table{{"d", "p_ff", "p_fa", "p_aa", "branch", "lambda"}, {}};
  for (std::size_t i = 0; i < solution.size(); ++i) {
    if (solution.spurious_flags[i]) continue;
    const double lambda = solution.eigenvalues[i];
    if (bands.in_band(lambda)) continue;
    const Branch branch = bands.branch_of(lambda);
    if (config.branch != "both" && config.branch != branch_name(branch)) continue;
    const auto state = to_real_space(solution.pair_set, solution.coefficient_vectors[i]);
    const auto probs = joint_probabilities(state);
    for (int d = 0; d < config.n; ++d) {
      table.rows.push_back({static_cast<long long>(d), probs.p_ff[d], probs.p_fa[d], probs.p_aa[d],
                            std::string(branch_name(branch)), lambda});
    }
  }
  if (table.rows.empty()) {
    throw Error(ErrorCode::NoBoundState, "no isolated eigenvalue in sector " + std::to_string(sector.value) +
                                             " at g/J = " + format_double(config.g_over_j.front()));
  }
  return table;
}

Table run_bands(const RunConfig& config, Table* samples) {
  require_couplings(config, "bands");
  std::vector<ModelParams> grid;
  for (double g : config.g_over_j) grid.push_back(params_for(config, g));
  const auto sectors = sectors_for(config, grid.front());

  const std::size_t jobs = grid.size() * sectors.size();
  std::vector<std::vector<std::vector<Cell>>> band_rows(jobs);
  std::vector<std::vector<std::vector<Cell>>> sample_rows(jobs);
  for_each_index(jobs, Execution::parallel, [&](std::size_t idx) {
    const std::size_t gi = idx / sectors.size();
    const SectorIndex sector = sectors[idx % sectors.size()];
    const double g_over_j = config.g_over_j[gi];
    const auto bands = band_intervals(grid[gi], sector, config.resolution);
    for (std::size_t b = 0; b < bands.intervals.size(); ++b) {
      band_rows[idx].push_back({static_cast<long long>(b), bands.intervals[b].lo, bands.intervals[b].hi,
                                static_cast<long long>(sector.value), g_over_j});
    }
    if (!samples) return;

    // Uniform grid over the spectrum plus a margin, skipping points that sit
    // on a finite-chain pole.
    const double reach = std::max(std::abs(bands.intervals.front().lo), std::abs(bands.intervals.back().hi));
    const double radius = reach + 0.5 * std::max(grid[gi].tunneling(), grid[gi].rabi()) + 0.5;
    const auto poles = secular_poles(grid[gi], sector);
    const double pole_gap = 1e-9 * std::max(1.0, radius);
    const int count = config.g_sample_count;
    for (int i = 0; i < count; ++i) {
      const double lambda = -radius + 2.0 * radius * i / (count - 1);
      const auto near = std::lower_bound(poles.begin(), poles.end(), lambda - pole_gap);
      if (near != poles.end() && *near <= lambda + pole_gap) continue;
      double g_value = 0.0;
      try {
        g_value = eval_G(grid[gi], sector, lambda);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::PoleEvaluation) continue;
        throw;
      }
      sample_rows[idx].push_back(
          {static_cast<long long>(sector.value), g_over_j, lambda, g_value, bands.in_band(lambda)});
    }
  });

  Table table{{"band_index", "lo", "hi", "P", "g_over_j"}, {}};
  for (auto& rows : band_rows) {
    for (auto& row : rows) table.rows.push_back(std::move(row));
  }
  if (samples) {
    *samples = Table{{"P", "g_over_j", "lambda", "G", "in_band"}, {}};
    for (auto& rows : sample_rows) {
      for (auto& row : rows) samples->rows.push_back(std::move(row));
    }
  }
  return table;
}

Table run_gcrit(const RunConfig& config, bool* failed) {
  if (!(config.j > 0.0)) config_error("gcrit measures g in units of J and needs J > 0");
  std::vector<double> angles(config.p_angle_grid);
  for (int i = 0; i < config.p_angle_grid; ++i) angles[i] = 2.0 * std::numbers::pi * i / config.p_angle_grid;
  const auto curve = critical_coupling_curve(angles, config.delta / config.j, config.resolution,
                                             config.tol_bisection, Execution::parallel);

  Table table{{"P_angle", "g_c_upper_branch", "g_c_lower_branch", "g_c_max", "error"}, {}};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : curve) {
    if (r.ok) {
      table.rows.push_back({r.value.angle, r.value.upper, r.value.lower, r.value.max(), std::string()});
    } else {
      table.rows.push_back({r.value.angle, nan, nan, nan, r.error});
      if (failed) *failed = true;
    }
  }
  return table;
}

Table run_check(const RunConfig& config, bool* failed) {
  if (config.check_n_list.empty()) config_error("--check-n-list is empty");
  Table table{{"test_name", "max_residual", "pass"}, {}};
  auto add = [&](const std::string& name, double residual) {
    const bool pass = residual < kCheckTolerance;
    if (!pass && failed) *failed = true;
    table.rows.push_back({name, residual, pass});
  };

  for (int n : config.check_n_list) {
    const std::string suffix = "_n" + std::to_string(n);
    std::vector<ModelParams> grid;
    for (double delta : {0.0, 0.5, -0.5}) {
      for (double g : {0.5, 2.0, 5.0}) grid.push_back(validate_params({n, delta, 1.0, g}));
    }

    std::vector<double> block_dev(grid.size(), 0.0);
    std::vector<double> union_dev(grid.size(), 0.0);
    std::vector<double> translation(grid.size(), 0.0);
    for_each_index(grid.size(), Execution::parallel, [&](std::size_t gi) {
      const auto oracle = sector_project_spectrum(grid[gi], false, Execution::serial);
      translation[gi] = oracle.translation_residual;

      std::vector<double> merged;
      for (const auto& s : oracle.by_sector) merged.insert(merged.end(), s.begin(), s.end());
      std::sort(merged.begin(), merged.end());
      union_dev[gi] = spectrum_deviation(merged, full_spectrum(grid[gi]));

      for (int p = 0; p < n; ++p) {
        auto matrix = assemble_sector_matrix(grid[gi], make_sector(grid[gi], p));
        if (config.inject_fault) {
          auto& m = matrix.entries;
          m(matrix.pair_set.alpha_index(0), matrix.pair_set.beta_index(0)) *= -1.0;
        }
        double dev = std::numeric_limits<double>::infinity();
        try {
          const auto block = solve_sector_matrix(matrix, {config.tol_reality, kSpuriousNormTolerance});
          dev = spectrum_deviation(block.physical_eigenvalues(), oracle.by_sector[p]);
        } catch (const Error&) {
          // A block that no longer solves cleanly fails the row rather than the run.
        }
        block_dev[gi] = std::max(block_dev[gi], dev);
      }
    });

    add("oracle_equivalence" + suffix, *std::max_element(block_dev.begin(), block_dev.end()));
    add("sector_union" + suffix, *std::max_element(union_dev.begin(), union_dev.end()));
    add("translation_eigenvalue" + suffix, *std::max_element(translation.begin(), translation.end()));
    for (const auto& id : verify_operator_identities(n)) add(id.name + suffix, id.max_residual);
  }
  return table;
}

Table execute(const RunConfig& config, Table* samples, bool* failed) {
  switch (config.command) {
    case Command::spectrum:
      return run_spectrum(config);
    case Command::probs:
      return run_probs(config);
    case Command::bands:
      return run_bands(config, samples);
    case Command::gcrit:
      return run_gcrit(config, failed);
    case Command::check:
      return run_check(config, failed);
  }
  config_error("unknown command");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    if (const char* env = std::getenv("JCH_THREADS"); env && *env) {
      char* end = nullptr;
      const long threads = std::strtol(env, &end, 10);
      if (*end != '\0' || threads < 1) config_error("JCH_THREADS must be a positive integer");
      set_thread_cap(static_cast<int>(threads));
    }

    std::string help;
    const auto config = parse_args(argc, argv, &help);
    if (!config) {
      out << help;
      return kExitOk;
    }

    Table samples;
    bool failed = false;
    const bool want_samples = config->command == Command::bands && !config->g_samples.empty();
    const Table table = execute(*config, want_samples ? &samples : nullptr, &failed);
    write_text(config->out, render(table, config->format), out);
    if (want_samples) write_text(config->g_samples, render(samples, config->format), out);
    return failed ? kExitNumerics : kExitOk;
  } catch (const Error& e) {
    err << "jch: " << e.what() << "\n";
    if (e.code() == ErrorCode::NoBoundState) return kExitNoBoundState;
    return is_validation_error(e.code()) ? kExitConfig : kExitNumerics;
  } catch (const std::exception& e) {
    err << "jch: " << e.what() << "\n";
    return kExitNumerics;
  }
}

}  // namespace jch::cli
