#pragma once

// Sensitivity sweep: re-scores one completed decision pass across grids of
// the severity level s and the practical threshold delta_p. Nulls, p-values
// and decisions are shared by every cell, so differences between cells come
// only from the scoring rule.

#include <algorithm>
#include <vector>

#include "sevrank/errors.hpp"
#include "sevrank/league.hpp"

namespace sevrank {

struct SensitivityCell {
  double s = 0.0;
  double delta_p = 0.0;
  LeagueTable table;
};

struct SensitivityGrid {
  std::vector<double> s_values;
  std::vector<double> delta_p_values;
  std::vector<SensitivityCell> cells;  // s-major, delta_p-minor
  LeagueTable base;  // table at the configured (s, delta_p), the reference
                     // for rank-change reporting

  const LeagueTable& at(double s, double delta_p) const {
    for (const auto& cell : cells)
      if (cell.s == s && cell.delta_p == delta_p) return cell.table;
    throw config_error("no sensitivity cell at the requested (s, delta-p)");
  }
};

inline SensitivityGrid sweep(const TournamentCore& core,
                             std::vector<double> s_values,
                             std::vector<double> delta_p_values) {
  if (s_values.empty() || delta_p_values.empty())
    throw config_error("sensitivity sweep needs non-empty grids");
  std::sort(s_values.begin(), s_values.end());
  s_values.erase(std::unique(s_values.begin(), s_values.end()), s_values.end());
  std::sort(delta_p_values.begin(), delta_p_values.end());
  delta_p_values.erase(std::unique(delta_p_values.begin(), delta_p_values.end()),
                       delta_p_values.end());
  for (double s : s_values)
    if (!(s >= 0.5 && s < 1.0))
      throw config_error("severity grid values must be in [0.5, 1)");
  for (double delta_p : delta_p_values)
    if (!(delta_p > 0.0))
      throw config_error("delta-p grid values must be positive");

  SensitivityGrid grid;
  grid.s_values = std::move(s_values);
  grid.delta_p_values = std::move(delta_p_values);
  grid.base = build_table(
      score_tournament(core, core.config.severity_s, core.config.delta_p),
      core.config);
  grid.cells.reserve(grid.s_values.size() * grid.delta_p_values.size());
  for (double s : grid.s_values)
    for (double delta_p : grid.delta_p_values) {
      RankingConfig cell_config = core.config;
      cell_config.severity_s = s;
      cell_config.delta_p = delta_p;
      grid.cells.push_back(
          {s, delta_p,
           build_table(score_tournament(core, s, delta_p), cell_config)});
    }
  return grid;
}

inline SensitivityGrid sweep(const RunMatrix& matrix,
                             const RankingConfig& config,
                             const std::vector<double>& s_values,
                             const std::vector<double>& delta_p_values,
                             unsigned threads = 0) {
  return sweep(tournament_core(matrix, config, threads), s_values,
               delta_p_values);
}

}  // namespace sevrank
