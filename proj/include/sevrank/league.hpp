#pragma once

// Tournament orchestration: every ordered pair of algorithms on every
// problem is compared once, decisions are made on BH-adjusted bootstrap
// p-values, and (decision, delta*) is converted to football-style points and
// goal difference. The expensive part (nulls, p-values, decisions) is
// separated from scoring so sensitivity sweeps can re-score cheaply.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "sevrank/data_model.hpp"
#include "sevrank/errors.hpp"
#include "sevrank/multiplicity.hpp"
#include "sevrank/resampling.hpp"
#include "sevrank/severity.hpp"

namespace sevrank {

// One ordered comparison, fully scored. The candidate is the side whose win
// is being tested: t_obs = mean(opponent runs) - mean(candidate runs), so for
// a minimized metric a rejection means the candidate is credibly better.
struct PairwiseOutcome {
  std::string candidate;
  std::string opponent;
  std::string problem;
  double t_obs = 0.0;
  double p_raw = 1.0;
  double p_adj = 1.0;
  Decision decision = Decision::not_reject;
  double delta_star = 0.0;
  int points = 0;
  long long gd = 0;
};

struct Score {
  int points = 0;
  long long gd = 0;
};

// Points/GD tiers. A rejection whose supported discrepancy strictly exceeds
// the practical threshold delta_p is a full win (3 points, GD = floor of the
// multiple); a rejection that cannot support delta_p is worth 1 point; a
// non-rejection scores 0 with GD clamped to be non-positive.
inline Score score_comparison(Decision decision, double delta_star,
                              double delta_p) {
  if (!(delta_p > 0.0)) throw config_error("delta-p must be positive");
  const auto ratio =
      static_cast<long long>(std::floor(delta_star / delta_p));
  if (decision == Decision::reject) {
    if (delta_star > delta_p) return {3, ratio};
    return {1, 0};
  }
  return {0, std::min<long long>(ratio, 0)};
}

// One ordered comparison after the decision pass, before scoring. The null is
// oriented to match t_obs (the reverse direction holds the sign-flipped
// mirror), so severity and delta* read straight off it.
struct TournamentComparison {
  std::string candidate;
  std::string opponent;
  std::string problem;
  double t_obs = 0.0;
  double p_raw = 1.0;
  double p_adj = 1.0;
  Decision decision = Decision::not_reject;
  std::shared_ptr<const BootstrapNull> null;
};

// Everything about a tournament that does not depend on the severity level or
// on delta_p: nulls, observed statistics, raw and adjusted p-values, and
// decisions. Scoring the same core at different (s, delta_p) settings can
// never change a decision.
struct TournamentCore {
  std::vector<TournamentComparison> comparisons;
  RankingConfig config;
};

namespace detail {

inline std::string comparison_key(const TournamentComparison& c) {
  std::string key;
  key.reserve(c.problem.size() + c.candidate.size() + c.opponent.size() + 2);
  key += c.problem;
  key += '\x1f';
  key += c.candidate;
  key += '\x1f';
  key += c.opponent;
  return key;
}

inline void adjust_family(std::vector<TournamentComparison>& comparisons,
                          const std::vector<std::size_t>& indices,
                          double alpha) {
  PValueFamily family;
  family.entries.reserve(indices.size());
  for (auto i : indices)
    family.entries.push_back(
        {comparison_key(comparisons[i]), comparisons[i].p_raw});
  const auto adjusted = bh_adjust(family);
  for (std::size_t j = 0; j < indices.size(); ++j) {
    auto& c = comparisons[indices[j]];
    c.p_adj = adjusted[j];
    c.decision = c.p_adj < alpha ? Decision::reject : Decision::not_reject;
  }
}

}  // namespace detail

// Decision pass over the full design. Each unordered pair on each problem
// shares one resampling pass (the reverse direction mirrors it), keyed by a
// seed derived from the pair's identity, so any thread count and any
// execution order produce identical results. threads = 0 means one per
// hardware core.
inline TournamentCore tournament_core(const RunMatrix& matrix,
                                      const RankingConfig& config,
                                      unsigned threads = 0) {
  validate_config(config);
  const auto algorithms = matrix.algorithms();
  const auto problems = matrix.problems();
  if (algorithms.size() < 2)
    throw data_error("a tournament needs at least two algorithms");
  for (const auto& problem : problems)
    for (const auto& algorithm : algorithms) matrix.at(algorithm, problem);

  struct PairTask {
    const std::string* problem;
    const std::string* lo;
    const std::string* hi;
  };
  std::vector<PairTask> tasks;
  tasks.reserve(problems.size() * algorithms.size() * (algorithms.size() - 1) / 2);
  for (const auto& problem : problems)
    for (std::size_t i = 0; i < algorithms.size(); ++i)
      for (std::size_t j = i + 1; j < algorithms.size(); ++j)
        tasks.push_back({&problem, &algorithms[i], &algorithms[j]});

  std::vector<std::shared_ptr<const BootstrapNull>> forward(tasks.size());
  std::vector<std::shared_ptr<const BootstrapNull>> reverse(tasks.size());

  unsigned n_threads = threads ? threads : std::thread::hardware_concurrency();
  if (n_threads == 0) n_threads = 1;
  if (tasks.size() < n_threads) n_threads = static_cast<unsigned>(tasks.size());

  auto worker = [&](unsigned tid) {
    for (std::size_t t = tid; t < tasks.size(); t += n_threads) {
      const auto& task = tasks[t];
      const std::uint64_t seed =
          ComparisonSeed{config.seed, *task.problem, *task.lo, *task.hi}.value();
      auto null = pooled_null(matrix.at(*task.lo, *task.problem),
                              matrix.at(*task.hi, *task.problem),
                              config.n_b, seed);
      reverse[t] = std::make_shared<const BootstrapNull>(null.flipped());
      forward[t] = std::make_shared<const BootstrapNull>(std::move(null));
    }
  };
  if (n_threads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned tid = 0; tid < n_threads; ++tid) pool.emplace_back(worker, tid);
    for (auto& th : pool) th.join();
  }

  TournamentCore core;
  core.config = config;
  core.comparisons.reserve(tasks.size() * 2);
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const auto& task = tasks[t];
    const double t_lo_vs_hi = observed_stat(matrix.at(*task.lo, *task.problem),
                                            matrix.at(*task.hi, *task.problem));

    TournamentComparison fwd;
    fwd.candidate = *task.hi;
    fwd.opponent = *task.lo;
    fwd.problem = *task.problem;
    fwd.t_obs = t_lo_vs_hi;
    fwd.null = forward[t];
    fwd.p_raw = p_value(*fwd.null, fwd.t_obs);

    TournamentComparison rev;
    rev.candidate = *task.lo;
    rev.opponent = *task.hi;
    rev.problem = *task.problem;
    rev.t_obs = -t_lo_vs_hi;
    rev.null = reverse[t];
    rev.p_raw = p_value(*rev.null, rev.t_obs);

    core.comparisons.push_back(std::move(fwd));
    core.comparisons.push_back(std::move(rev));
  }

  std::sort(core.comparisons.begin(), core.comparisons.end(),
            [](const TournamentComparison& a, const TournamentComparison& b) {
              if (a.problem != b.problem) return a.problem < b.problem;
              if (a.candidate != b.candidate) return a.candidate < b.candidate;
              return a.opponent < b.opponent;
            });

  if (config.bh_scope == BhScope::global) {
    std::vector<std::size_t> all(core.comparisons.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    detail::adjust_family(core.comparisons, all, config.alpha);
  } else {
    std::map<std::string, std::vector<std::size_t>> by_problem;
    for (std::size_t i = 0; i < core.comparisons.size(); ++i)
      by_problem[core.comparisons[i].problem].push_back(i);
    for (const auto& [problem, indices] : by_problem)
      detail::adjust_family(core.comparisons, indices, config.alpha);
  }
  return core;
}

// Scoring pass: evaluates delta* at severity level s and converts to
// points/GD against delta_p. Pure in the core; decisions are read, never
// recomputed.
inline std::vector<PairwiseOutcome> score_tournament(const TournamentCore& core,
                                                     double s, double delta_p) {
  std::vector<PairwiseOutcome> outcomes;
  outcomes.reserve(core.comparisons.size());
  for (const auto& c : core.comparisons) {
    PairwiseOutcome out;
    out.candidate = c.candidate;
    out.opponent = c.opponent;
    out.problem = c.problem;
    out.t_obs = c.t_obs;
    out.p_raw = c.p_raw;
    out.p_adj = c.p_adj;
    out.decision = c.decision;
    out.delta_star = supported_delta(*c.null, c.t_obs, s, c.decision);
    const Score score = score_comparison(c.decision, out.delta_star, delta_p);
    out.points = score.points;
    out.gd = score.gd;
    outcomes.push_back(std::move(out));
  }
  return outcomes;
}

inline std::vector<PairwiseOutcome> run_tournament(const RunMatrix& matrix,
                                                   const RankingConfig& config,
                                                   unsigned threads = 0) {
  const auto core = tournament_core(matrix, config, threads);
  return score_tournament(core, config.severity_s, config.delta_p);
}

struct LeagueRow {
  std::string algorithm;
  long long points_total = 0;
  long long gd_total = 0;
  std::size_t rank = 0;
  double points_mean = 0.0;
  double points_sd = 0.0;
};

struct LeagueTable {
  std::vector<LeagueRow> rows;
  RankingConfig config_echo;
};

namespace detail {

// Per-algorithm candidate-side accumulation plus the full-design check:
// every participant must appear on the candidate side of exactly
// (k - 1) * m outcomes.
inline std::map<std::string, std::vector<int>> collect_points(
    const std::vector<PairwiseOutcome>& outcomes) {
  if (outcomes.empty()) throw data_error("cannot build a table from no outcomes");
  std::map<std::string, std::vector<int>> per_algo;
  std::set<std::string> problems;
  for (const auto& o : outcomes) {
    per_algo[o.candidate].push_back(o.points);
    per_algo.try_emplace(o.opponent);
    problems.insert(o.problem);
  }
  const std::size_t expected = (per_algo.size() - 1) * problems.size();
  for (const auto& [algorithm, points] : per_algo)
    if (points.size() != expected)
      throw data_error("incomplete tournament: algorithm '" + algorithm +
                       "' has " + std::to_string(points.size()) +
                       " outcomes, expected " + std::to_string(expected));
  return per_algo;
}

}  // namespace detail

// League standings: points descending, goal difference as tie-break, then
// algorithm id for a total order. Equal (points, GD) rows share the better
// rank. Mean/SD summarize the per-comparison points of each algorithm.
inline LeagueTable build_table(const std::vector<PairwiseOutcome>& outcomes,
                               const RankingConfig& config_echo = {}) {
  const auto per_algo = detail::collect_points(outcomes);

  std::map<std::string, long long> gd_totals;
  for (const auto& o : outcomes) gd_totals[o.candidate] += o.gd;

  LeagueTable table;
  table.config_echo = config_echo;
  table.rows.reserve(per_algo.size());
  for (const auto& [algorithm, points] : per_algo) {
    LeagueRow row;
    row.algorithm = algorithm;
    for (int p : points) row.points_total += p;
    row.gd_total = gd_totals[algorithm];
    const auto n = static_cast<double>(points.size());
    row.points_mean = static_cast<double>(row.points_total) / n;
    if (points.size() >= 2) {
      double ss = 0.0;
      for (int p : points) {
        const double d = static_cast<double>(p) - row.points_mean;
        ss += d * d;
      }
      row.points_sd = std::sqrt(ss / (n - 1.0));
    }
    table.rows.push_back(std::move(row));
  }

  std::sort(table.rows.begin(), table.rows.end(),
            [](const LeagueRow& a, const LeagueRow& b) {
              if (a.points_total != b.points_total)
                return a.points_total > b.points_total;
              if (a.gd_total != b.gd_total) return a.gd_total > b.gd_total;
              return a.algorithm < b.algorithm;
            });
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (i > 0 && table.rows[i].points_total == table.rows[i - 1].points_total &&
        table.rows[i].gd_total == table.rows[i - 1].gd_total)
      table.rows[i].rank = table.rows[i - 1].rank;
    else
      table.rows[i].rank = i + 1;
  }
  return table;
}

struct ClassicalRow {
  std::string algorithm;
  long long points_total = 0;
  std::size_t rank = 0;
};

struct ClassicalTable {
  std::vector<ClassicalRow> rows;
};

// Baseline scheme for contrast: one point per rejection, nothing else. Uses
// the same decisions as the league table, so its point is 1 exactly when the
// league awards at least 1.
inline ClassicalTable classical_table(const std::vector<PairwiseOutcome>& outcomes) {
  const auto per_algo = detail::collect_points(outcomes);

  std::map<std::string, long long> totals;
  for (const auto& [algorithm, points] : per_algo) totals[algorithm] = 0;
  for (const auto& o : outcomes)
    if (o.decision == Decision::reject) ++totals[o.candidate];

  ClassicalTable table;
  table.rows.reserve(totals.size());
  for (const auto& [algorithm, points] : totals)
    table.rows.push_back({algorithm, points, 0});
  std::sort(table.rows.begin(), table.rows.end(),
            [](const ClassicalRow& a, const ClassicalRow& b) {
              if (a.points_total != b.points_total)
                return a.points_total > b.points_total;
              return a.algorithm < b.algorithm;
            });
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (i > 0 && table.rows[i].points_total == table.rows[i - 1].points_total)
      table.rows[i].rank = table.rows[i - 1].rank;
    else
      table.rows[i].rank = i + 1;
  }
  return table;
}

}  // namespace sevrank
