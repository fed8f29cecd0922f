#pragma once

// Run-data model: the (algorithm, problem) -> per-run values matrix, CSV
// ingestion with budget capping, and non-mutating validation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sevrank/errors.hpp"
#include "sevrank/util.hpp"

namespace sevrank {

enum class BhScope { global, per_problem };

inline std::string to_string(BhScope scope) {
  return scope == BhScope::global ? "global" : "per-problem";
}

// Tournament parameters. alpha and severity_s are reported together in every
// emitted metadata file; delta_p carries the units of the run values.
struct RankingConfig {
  double alpha = 0.05;
  double severity_s = 0.8;
  double delta_p = 0.0;
  std::size_t n_b = 10000;
  std::uint64_t seed = 1;
  BhScope bh_scope = BhScope::global;
  std::optional<double> budget;
  bool cap_to_budget = true;

  friend bool operator==(const RankingConfig&, const RankingConfig&) = default;
};

inline void validate_config(const RankingConfig& config) {
  if (!(config.alpha > 0.0 && config.alpha <= 0.5))
    throw config_error("alpha must be in (0, 0.5]");
  if (!(config.severity_s >= 0.5 && config.severity_s < 1.0))
    throw config_error("severity must be in [0.5, 1)");
  if (!(config.delta_p > 0.0))
    throw config_error("delta-p must be positive");
  if (config.n_b < 100)
    throw config_error("resamples must be at least 100");
  if (config.budget && !(*config.budget > 0.0))
    throw config_error("budget must be positive");
}

struct CellKey {
  std::string algorithm;
  std::string problem;

  auto operator<=>(const CellKey&) const = default;
};

// Complete-design matrix of run values. Immutable by convention once loaded;
// all values are finite, non-negative and, when a budget is set, <= budget.
struct RunMatrix {
  std::map<CellKey, std::vector<double>> cells;
  std::optional<double> budget;

  friend bool operator==(const RunMatrix&, const RunMatrix&) = default;

  std::vector<std::string> algorithms() const {
    std::vector<std::string> out;
    for (const auto& [key, values] : cells)
      if (out.empty() || out.back() != key.algorithm)
        out.push_back(key.algorithm);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::vector<std::string> problems() const {
    std::set<std::string> seen;
    for (const auto& [key, values] : cells) seen.insert(key.problem);
    return {seen.begin(), seen.end()};
  }

  const std::vector<double>& at(const std::string& algorithm,
                                const std::string& problem) const {
    const auto it = cells.find(CellKey{algorithm, problem});
    if (it == cells.end() || it->second.empty())
      throw data_error("missing run data for algorithm '" + algorithm +
                       "' on problem '" + problem + "'");
    return it->second;
  }
};

inline constexpr std::string_view run_csv_header = "algorithm,problem,run,value";

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace detail

// Parses the long-format run CSV (header `algorithm,problem,run,value`).
// An empty value field marks a run that never reached the target; it is
// replaced by the budget when capping is enabled. Values above the budget are
// likewise capped. Incomplete designs (an algorithm missing on some problem)
// are fatal.
inline RunMatrix load_runs(std::istream& in, const RankingConfig& config,
                           const std::string& source_name = "<stream>") {
  const bool capping = config.budget.has_value() && config.cap_to_budget;

  auto fail = [&](std::size_t line_no, const std::string& what) -> data_error {
    return data_error(source_name + ":" + std::to_string(line_no) + ": " + what);
  };

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw fail(1, "empty file, expected header");
  ++line_no;
  if (detail::strip_cr(line) != run_csv_header)
    throw fail(line_no, "bad header, expected '" + std::string(run_csv_header) + "'");

  std::map<CellKey, std::vector<std::pair<std::uint64_t, double>>> staged;
  std::set<std::tuple<std::string, std::string, std::uint64_t>> seen;

  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = detail::strip_cr(line);
    if (trimmed.empty()) continue;
    const auto fields = detail::split_fields(trimmed);
    if (fields.size() != 4)
      throw fail(line_no, "expected 4 fields, got " + std::to_string(fields.size()));
    const std::string algorithm(fields[0]);
    const std::string problem(fields[1]);
    if (algorithm.empty()) throw fail(line_no, "empty algorithm id");
    if (problem.empty()) throw fail(line_no, "empty problem id");

    std::uint64_t run = 0;
    try {
      run = parse_uint(fields[2]);
    } catch (const std::invalid_argument&) {
      throw fail(line_no, "run index is not an integer: '" + std::string(fields[2]) + "'");
    }
    if (run == 0) throw fail(line_no, "run index must be >= 1");

    double value = 0.0;
    if (fields[3].empty()) {
      if (!capping)
        throw fail(line_no, "empty value requires a budget with capping enabled");
      value = *config.budget;
    } else {
      try {
        value = parse_double(fields[3]);
      } catch (const std::invalid_argument&) {
        throw fail(line_no, "value is not a number: '" + std::string(fields[3]) + "'");
      }
      if (!std::isfinite(value)) throw fail(line_no, "value is not finite");
      if (value < 0.0) throw fail(line_no, "value is negative");
      if (config.budget && value > *config.budget) {
        if (!capping)
          throw fail(line_no, "value " + format_double(value) +
                                  " exceeds budget " + format_double(*config.budget) +
                                  " and capping is disabled");
        value = *config.budget;
      }
    }

    if (!seen.emplace(algorithm, problem, run).second)
      throw fail(line_no, "duplicate (algorithm, problem, run) triple: " +
                              algorithm + "," + problem + "," + std::to_string(run));
    staged[CellKey{algorithm, problem}].emplace_back(run, value);
  }

  RunMatrix matrix;
  matrix.budget = config.budget;
  for (auto& [key, rows] : staged) {
    std::sort(rows.begin(), rows.end());
    auto& values = matrix.cells[key];
    values.reserve(rows.size());
    for (const auto& [run, value] : rows) values.push_back(value);
  }

  if (matrix.cells.empty()) throw data_error(source_name + ": no data rows");

  const auto algorithms = matrix.algorithms();
  const auto problems = matrix.problems();
  for (const auto& algorithm : algorithms)
    for (const auto& problem : problems)
      if (!matrix.cells.count(CellKey{algorithm, problem}))
        throw data_error(source_name + ": incomplete design: algorithm '" +
                         algorithm + "' has no runs for problem '" + problem + "'");
  return matrix;
}

inline RunMatrix load_runs(const std::filesystem::path& path,
                           const RankingConfig& config) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path.string() + "'");
  return load_runs(in, config, path.filename().string());
}

enum class DiagnosticCode {
  empty_cell,
  zero_variance,
  unequal_run_counts,
  few_runs,
};

struct Diagnostic {
  enum class Level { warning, error };

  Level level;
  DiagnosticCode code;
  std::string message;
};

// Non-mutating checks: empty cells are errors; zero-variance cells, unequal
// run counts within a problem, and cells below 10 runs are warnings.
inline std::vector<Diagnostic> validate(const RunMatrix& matrix) {
  std::vector<Diagnostic> out;
  using Level = Diagnostic::Level;

  for (const auto& [key, values] : matrix.cells) {
    const std::string cell = "(" + key.algorithm + ", " + key.problem + ")";
    if (values.empty()) {
      out.push_back({Level::error, DiagnosticCode::empty_cell,
                     "cell " + cell + " has no runs"});
      continue;
    }
    if (values.size() < 10)
      out.push_back({Level::warning, DiagnosticCode::few_runs,
                     "cell " + cell + " has only " +
                         std::to_string(values.size()) + " runs"});
    const bool constant =
        std::all_of(values.begin(), values.end(),
                    [&](double v) { return v == values.front(); });
    if (constant)
      out.push_back({Level::warning, DiagnosticCode::zero_variance,
                     "cell " + cell + " has zero variance (all values " +
                         format_double(values.front()) + ")"});
  }

  for (const auto& problem : matrix.problems()) {
    std::set<std::size_t> counts;
    for (const auto& [key, values] : matrix.cells)
      if (key.problem == problem && !values.empty()) counts.insert(values.size());
    if (counts.size() > 1)
      out.push_back({Level::warning, DiagnosticCode::unequal_run_counts,
                     "problem '" + problem + "' has unequal run counts across algorithms"});
  }
  return out;
}

// Canonical serialization: cells sorted by (algorithm, problem), runs
// renumbered 1..n. Loading the result reproduces the matrix exactly.
inline std::string write_canonical_csv(const RunMatrix& matrix) {
  std::string out(run_csv_header);
  out += '\n';
  for (const auto& [key, values] : matrix.cells) {
    for (std::size_t r = 0; r < values.size(); ++r) {
      out += key.algorithm;
      out += ',';
      out += key.problem;
      out += ',';
      out += std::to_string(r + 1);
      out += ',';
      out += format_double(values[r]);
      out += '\n';
    }
  }
  return out;
}

inline void save_canonical_csv(const RunMatrix& matrix,
                               const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write '" + path.string() + "'");
  out << write_canonical_csv(matrix);
  if (!out) throw io_error("failed writing '" + path.string() + "'");
}

// Digest of the canonical form: stable under row order and formatting of the
// source file, changes whenever the data changes.
inline std::string matrix_digest(const RunMatrix& matrix) {
  return hex64(fnv1a64(write_canonical_csv(matrix)));
}

}  // namespace sevrank
