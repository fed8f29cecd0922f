#pragma once

// Serialization of tournament results: league and classical tables (CSV and
// markdown), per-problem breakdowns, points-distribution summaries, severity
// curves, sensitivity grids, and a metadata file that pins everything needed
// to reproduce a run. All outputs are byte-stable: no timestamps, no
// environment-dependent fields, shortest-round-trip number formatting.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sevrank/data_model.hpp"
#include "sevrank/errors.hpp"
#include "sevrank/league.hpp"
#include "sevrank/sensitivity.hpp"
#include "sevrank/severity.hpp"
#include "sevrank/util.hpp"
#include "sevrank/version.hpp"

namespace sevrank {

enum class ReportFormat { csv, markdown };

inline ReportFormat parse_report_format(const std::string& name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "markdown" || name == "md") return ReportFormat::markdown;
  throw config_error("unknown report format '" + name + "'");
}

struct PerFunctionEntry {
  std::string algorithm;
  std::string problem;
  long long points = 0;
  long long gd = 0;
};

// Quartiles as order statistics of the sorted sample (rank = ceil(q*n),
// 1-indexed) -- the same convention as the bootstrap quantiles, and exact on
// the small integer samples it summarizes.
struct FiveNumber {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

inline FiveNumber five_number(std::vector<double> values) {
  if (values.empty()) throw data_error("five-number summary of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  auto order_stat = [&](double q) {
    auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    return values[rank - 1];
  };
  return {values.front(), order_stat(0.25), order_stat(0.5), order_stat(0.75),
          values.back()};
}

struct DistributionRow {
  std::string algorithm;
  FiveNumber points;
};

struct NamedCurve {
  std::string name;  // file stem under severity_curves/
  SeverityCurve curve;
  double delta_star = 0.0;
};

struct ReportBundle {
  LeagueTable league;
  ClassicalTable classical;
  std::vector<PerFunctionEntry> per_function;
  std::vector<DistributionRow> distribution;
  RankingConfig config;
  std::string input_digest;
  std::string tool_version;
  std::vector<NamedCurve> curves;
};

inline ReportBundle build_bundle(const std::vector<PairwiseOutcome>& outcomes,
                                 const RankingConfig& config,
                                 const std::string& input_digest,
                                 std::vector<NamedCurve> curves = {}) {
  ReportBundle bundle;
  bundle.league = build_table(outcomes, config);
  bundle.classical = classical_table(outcomes);
  bundle.config = config;
  bundle.input_digest = input_digest;
  bundle.tool_version = version_string;
  bundle.curves = std::move(curves);

  std::map<std::pair<std::string, std::string>, std::pair<long long, long long>>
      per_function;
  std::map<std::string, std::vector<double>> points_by_algo;
  for (const auto& o : outcomes) {
    auto& [points, gd] = per_function[{o.candidate, o.problem}];
    points += o.points;
    gd += o.gd;
    points_by_algo[o.candidate].push_back(static_cast<double>(o.points));
  }
  for (const auto& [key, totals] : per_function)
    bundle.per_function.push_back(
        {key.first, key.second, totals.first, totals.second});
  for (const auto& [algorithm, points] : points_by_algo)
    bundle.distribution.push_back({algorithm, five_number(points)});
  return bundle;
}

namespace detail {

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw io_error("failed writing '" + path.string() + "'");
}

inline std::string signed_int(long long v) {
  return v > 0 ? "+" + std::to_string(v) : std::to_string(v);
}

inline std::string file_stem(std::string name) {
  for (char& c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '_';
    if (!ok) c = '_';
  }
  return name;
}

}  // namespace detail

inline constexpr std::string_view league_csv_header =
    "rank,algorithm,points,gd,points_mean,points_sd";

inline std::string league_csv(const LeagueTable& table) {
  std::string out(league_csv_header);
  out += '\n';
  for (const auto& row : table.rows) {
    out += std::to_string(row.rank);
    out += ',';
    out += row.algorithm;
    out += ',';
    out += std::to_string(row.points_total);
    out += ',';
    out += std::to_string(row.gd_total);
    out += ',';
    out += format_double(row.points_mean);
    out += ',';
    out += format_double(row.points_sd);
    out += '\n';
  }
  return out;
}

inline void write_league_csv(const LeagueTable& table,
                             const std::filesystem::path& path) {
  detail::write_text_file(path, league_csv(table));
}

inline LeagueTable read_league_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || detail::strip_cr(line) != league_csv_header)
    throw data_error(path.string() + ": bad league header");
  LeagueTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = detail::strip_cr(line);
    if (trimmed.empty()) continue;
    const auto fields = detail::split_fields(trimmed);
    if (fields.size() != 6)
      throw data_error(path.string() + ":" + std::to_string(line_no) +
                       ": expected 6 fields");
    LeagueRow row;
    try {
      row.rank = static_cast<std::size_t>(parse_uint(fields[0]));
      row.algorithm = std::string(fields[1]);
      row.points_total = static_cast<long long>(parse_double(fields[2]));
      row.gd_total = static_cast<long long>(parse_double(fields[3]));
      row.points_mean = parse_double(fields[4]);
      row.points_sd = parse_double(fields[5]);
    } catch (const std::invalid_argument&) {
      throw data_error(path.string() + ":" + std::to_string(line_no) +
                       ": malformed league row");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

inline std::string league_markdown(const LeagueTable& table) {
  std::string out;
  out += "| Rank | Algorithm | Points | GD | Points mean | Points SD |\n";
  out += "|---:|:---|---:|---:|---:|---:|\n";
  for (const auto& row : table.rows) {
    out += "| " + std::to_string(row.rank);
    out += " | " + row.algorithm;
    out += " | " + std::to_string(row.points_total);
    out += " | " + std::to_string(row.gd_total);
    out += " | " + format_double(row.points_mean);
    out += " | " + format_double(row.points_sd);
    out += " |\n";
  }
  return out;
}

// Classical-table CSV with the rank-change column: change for algorithm X is
// rank in the league table minus rank in the classical table, so a positive
// value means the classical scheme places X better (higher) than the league.
inline std::string classical_csv(const ClassicalTable& classical,
                                 const LeagueTable& league) {
  std::map<std::string, std::size_t> league_rank;
  for (const auto& row : league.rows) league_rank[row.algorithm] = row.rank;

  std::string out = "rank,algorithm,points,rank_change_vs_proposed\n";
  for (const auto& row : classical.rows) {
    const auto it = league_rank.find(row.algorithm);
    if (it == league_rank.end())
      throw data_error("algorithm '" + row.algorithm +
                       "' missing from the league table");
    const long long change = static_cast<long long>(it->second) -
                             static_cast<long long>(row.rank);
    out += std::to_string(row.rank);
    out += ',';
    out += row.algorithm;
    out += ',';
    out += std::to_string(row.points_total);
    out += ',';
    out += std::to_string(change);
    out += '\n';
  }
  return out;
}

// Side-by-side markdown view (league order): league points and GD next to the
// classical points, with the classical rank change in the last column.
inline std::string classical_markdown(const ClassicalTable& classical,
                                      const LeagueTable& league) {
  std::map<std::string, const ClassicalRow*> by_algo;
  for (const auto& row : classical.rows) by_algo[row.algorithm] = &row;

  std::string out;
  out += "| Algorithm | Points | GD | Classical points | Change |\n";
  out += "|:---|---:|---:|---:|---:|\n";
  for (const auto& row : league.rows) {
    const auto it = by_algo.find(row.algorithm);
    if (it == by_algo.end())
      throw data_error("algorithm '" + row.algorithm +
                       "' missing from the classical table");
    const long long change = static_cast<long long>(row.rank) -
                             static_cast<long long>(it->second->rank);
    out += "| " + row.algorithm;
    out += " | " + std::to_string(row.points_total);
    out += " | " + std::to_string(row.gd_total);
    out += " | " + std::to_string(it->second->points_total);
    out += " | " + detail::signed_int(change);
    out += " |\n";
  }
  return out;
}

inline std::string per_function_csv(const ReportBundle& bundle) {
  std::string out = "algorithm,problem,points,gd\n";
  for (const auto& entry : bundle.per_function) {
    out += entry.algorithm;
    out += ',';
    out += entry.problem;
    out += ',';
    out += std::to_string(entry.points);
    out += ',';
    out += std::to_string(entry.gd);
    out += '\n';
  }
  return out;
}

inline std::string points_distribution_csv(const ReportBundle& bundle) {
  std::string out = "algorithm,min,q1,median,q3,max\n";
  for (const auto& row : bundle.distribution) {
    out += row.algorithm;
    out += ',';
    out += format_double(row.points.min);
    out += ',';
    out += format_double(row.points.q1);
    out += ',';
    out += format_double(row.points.median);
    out += ',';
    out += format_double(row.points.q3);
    out += ',';
    out += format_double(row.points.max);
    out += '\n';
  }
  return out;
}

// One curve per file: the decision and supported discrepancy in a comment
// line, then delta,severity,decision rows.
inline std::string severity_curve_csv(const SeverityCurve& curve,
                                      double delta_star) {
  std::string out = "# decision=" + to_string(curve.decision) +
                    " delta_star=" + format_double(delta_star) + "\n";
  out += "delta,severity,decision\n";
  const std::string decision = to_string(curve.decision);
  for (std::size_t i = 0; i < curve.deltas.size(); ++i) {
    out += format_double(curve.deltas[i]);
    out += ',';
    out += format_double(curve.values[i]);
    out += ',';
    out += decision;
    out += '\n';
  }
  return out;
}

inline void write_severity_curve_csv(const SeverityCurve& curve,
                                     double delta_star,
                                     const std::filesystem::path& path) {
  detail::write_text_file(path, severity_curve_csv(curve, delta_star));
}

// Reproducibility record: config, seed, input digest, tool version, plus any
// caller-supplied entries (e.g. the sweep grids). Sorted key=value lines;
// deliberately free of timestamps, hostnames and thread counts so reruns are
// byte-identical.
inline std::string metadata_text(
    const RankingConfig& config, const std::string& input_digest,
    const std::string& tool_version,
    const std::map<std::string, std::string>& extra = {}) {
  std::map<std::string, std::string> entries;
  entries["alpha"] = format_double(config.alpha);
  entries["severity_s"] = format_double(config.severity_s);
  entries["delta_p"] = format_double(config.delta_p);
  entries["n_b"] = std::to_string(config.n_b);
  entries["seed"] = std::to_string(config.seed);
  entries["bh_scope"] = to_string(config.bh_scope);
  entries["budget"] = config.budget ? format_double(*config.budget) : "none";
  entries["cap_to_budget"] = config.cap_to_budget ? "true" : "false";
  entries["input_digest"] = input_digest;
  entries["tool_version"] = tool_version;
  for (const auto& [key, value] : extra) entries[key] = value;

  std::string out;
  for (const auto& [key, value] : entries) out += key + "=" + value + "\n";
  return out;
}

inline void write_metadata(const RankingConfig& config,
                           const std::string& input_digest,
                           const std::string& tool_version,
                           const std::map<std::string, std::string>& extra,
                           const std::filesystem::path& path) {
  detail::write_text_file(path,
                          metadata_text(config, input_digest, tool_version, extra));
}

// Sensitivity grid flattened to one row per (s, delta_p, algorithm), with the
// rank change relative to the base table (positive = better rank than base).
inline std::string sensitivity_csv(const SensitivityGrid& grid) {
  std::map<std::string, std::size_t> base_rank;
  for (const auto& row : grid.base.rows) base_rank[row.algorithm] = row.rank;

  std::string out = "s,delta_p,algorithm,points,gd,rank,rank_change_vs_base\n";
  for (const auto& cell : grid.cells) {
    for (const auto& row : cell.table.rows) {
      const auto it = base_rank.find(row.algorithm);
      if (it == base_rank.end())
        throw data_error("algorithm '" + row.algorithm +
                         "' missing from the base table");
      const long long change = static_cast<long long>(it->second) -
                               static_cast<long long>(row.rank);
      out += format_double(cell.s);
      out += ',';
      out += format_double(cell.delta_p);
      out += ',';
      out += row.algorithm;
      out += ',';
      out += std::to_string(row.points_total);
      out += ',';
      out += std::to_string(row.gd_total);
      out += ',';
      out += std::to_string(row.rank);
      out += ',';
      out += std::to_string(change);
      out += '\n';
    }
  }
  return out;
}

inline void write_sensitivity_csv(const SensitivityGrid& grid,
                                  const std::filesystem::path& path) {
  detail::write_text_file(path, sensitivity_csv(grid));
}

// Writes the bundle under out_dir (created if needed) and returns the paths
// written, in a fixed order.
inline std::vector<std::filesystem::path> emit(
    const ReportBundle& bundle, const std::filesystem::path& out_dir,
    const std::set<ReportFormat>& formats = {ReportFormat::csv,
                                             ReportFormat::markdown}) {
  if (formats.empty()) throw config_error("no report formats requested");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    throw io_error("cannot create directory '" + out_dir.string() +
                   "': " + ec.message());

  std::vector<std::filesystem::path> written;
  const bool csv = formats.count(ReportFormat::csv) > 0;
  const bool markdown = formats.count(ReportFormat::markdown) > 0;

  auto put = [&](const std::filesystem::path& path, const std::string& text) {
    detail::write_text_file(path, text);
    written.push_back(path);
  };

  if (csv) put(out_dir / "league.csv", league_csv(bundle.league));
  if (markdown) put(out_dir / "league.md", league_markdown(bundle.league));
  if (csv)
    put(out_dir / "classical.csv",
        classical_csv(bundle.classical, bundle.league));
  if (markdown)
    put(out_dir / "classical.md",
        classical_markdown(bundle.classical, bundle.league));
  if (csv) put(out_dir / "per_function.csv", per_function_csv(bundle));
  if (csv) put(out_dir / "points_distribution.csv", points_distribution_csv(bundle));

  if (!bundle.curves.empty()) {
    const auto curve_dir = out_dir / "severity_curves";
    std::filesystem::create_directories(curve_dir, ec);
    if (ec)
      throw io_error("cannot create directory '" + curve_dir.string() +
                     "': " + ec.message());
    for (const auto& named : bundle.curves)
      put(curve_dir / (detail::file_stem(named.name) + ".csv"),
          severity_curve_csv(named.curve, named.delta_star));
  }

  put(out_dir / "metadata",
      metadata_text(bundle.config, bundle.input_digest, bundle.tool_version));
  return written;
}

}  // namespace sevrank
