#pragma once

// Desk-scale run-data generator: two toy pseudo-Boolean problems, three
// textbook randomized heuristics, and a fixed-target trial runner that
// records first-hitting times capped at a budget. Feeds the ranking pipeline
// with data whose qualitative ordering is known in advance.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <random>
#include <vector>

#include "sevrank/data_model.hpp"
#include "sevrank/errors.hpp"
#include "sevrank/util.hpp"

namespace sevrank {

enum class ProblemKind { onemax, leadingones };

inline std::string to_string(ProblemKind kind) {
  return kind == ProblemKind::onemax ? "onemax" : "leadingones";
}

inline ProblemKind parse_problem_kind(const std::string& name) {
  if (name == "onemax") return ProblemKind::onemax;
  if (name == "leadingones") return ProblemKind::leadingones;
  throw config_error("unknown problem kind '" + name + "'");
}

struct ProblemSpec {
  ProblemKind kind = ProblemKind::onemax;
  std::size_t dimension = 0;
  std::size_t target = 0;  // fitness level to hit

  std::string id() const {
    return to_string(kind) + "-" + std::to_string(dimension) + "-" +
           std::to_string(target);
  }
};

inline void validate_spec(const ProblemSpec& problem) {
  if (problem.dimension == 0) throw config_error("problem dimension must be >= 1");
  if (problem.target == 0) throw config_error("problem target must be >= 1");
  if (problem.target > problem.dimension)
    throw config_error("problem target cannot exceed the dimension");
}

enum class HeuristicKind { rls, one_plus_one_ea, random_search };

inline std::string to_string(HeuristicKind kind) {
  switch (kind) {
    case HeuristicKind::rls: return "rls";
    case HeuristicKind::one_plus_one_ea: return "one_plus_one_ea";
    default: return "random_search";
  }
}

inline HeuristicKind parse_heuristic_kind(const std::string& name) {
  if (name == "rls") return HeuristicKind::rls;
  if (name == "one_plus_one_ea") return HeuristicKind::one_plus_one_ea;
  if (name == "random_search") return HeuristicKind::random_search;
  throw config_error("unknown heuristic kind '" + name + "'");
}

struct HeuristicSpec {
  HeuristicKind kind = HeuristicKind::rls;
  // Per-bit flip probability; only meaningful for one_plus_one_ea, which
  // defaults to 1/dimension when unset.
  std::optional<double> mutation_rate;

  std::string id() const {
    std::string out = to_string(kind);
    if (mutation_rate) out += "-" + format_double(*mutation_rate);
    return out;
  }
};

inline void validate_spec(const HeuristicSpec& heuristic) {
  if (heuristic.mutation_rate) {
    if (heuristic.kind != HeuristicKind::one_plus_one_ea)
      throw config_error("mutation rate applies only to one_plus_one_ea");
    if (!(*heuristic.mutation_rate > 0.0 && *heuristic.mutation_rate < 1.0))
      throw config_error("mutation rate must be in (0, 1)");
  }
}

// Capped first-hitting time. hit is false only when the trial exhausted the
// budget without reaching the target; a hit on the budget-th evaluation
// counts as a hit and records exactly the budget.
struct TrialResult {
  std::uint64_t evaluations_to_target = 0;
  bool hit = false;
};

namespace detail {

inline std::size_t fitness(ProblemKind kind, const std::vector<std::uint8_t>& bits) {
  std::size_t value = 0;
  if (kind == ProblemKind::onemax) {
    for (auto b : bits) value += b;
  } else {
    for (auto b : bits) {
      if (!b) break;
      ++value;
    }
  }
  return value;
}

inline void random_bits(std::mt19937_64& engine, std::vector<std::uint8_t>& bits) {
  for (auto& b : bits) b = static_cast<std::uint8_t>(engine() >> 63);
}

}  // namespace detail

// Simulates one trial from a uniform random start. Every fitness evaluation
// counts, including the initial one and offspring identical to the parent.
// rls flips one uniformly chosen bit; one_plus_one_ea flips each bit
// independently at the mutation rate; random_search draws a fresh point every
// step. Hill-climbers accept on >= (plateau moves allowed).
inline TrialResult run_trial(const ProblemSpec& problem,
                             const HeuristicSpec& heuristic,
                             std::uint64_t budget, std::uint64_t seed) {
  validate_spec(problem);
  validate_spec(heuristic);
  if (budget == 0) throw config_error("budget must be >= 1");

  const std::size_t n = problem.dimension;
  const double rate = heuristic.mutation_rate
                          ? *heuristic.mutation_rate
                          : 1.0 / static_cast<double>(n);

  std::mt19937_64 engine(seed);
  std::vector<std::uint8_t> current(n);
  detail::random_bits(engine, current);
  std::size_t current_fitness = detail::fitness(problem.kind, current);
  std::uint64_t evaluations = 1;
  if (current_fitness >= problem.target) return {evaluations, true};

  std::vector<std::uint8_t> offspring(n);
  while (evaluations < budget) {
    switch (heuristic.kind) {
      case HeuristicKind::rls: {
        offspring = current;
        const std::size_t bit = bounded_index(engine(), n);
        offspring[bit] ^= 1u;
        break;
      }
      case HeuristicKind::one_plus_one_ea: {
        offspring = current;
        for (std::size_t i = 0; i < n; ++i)
          if (unit_double(engine()) < rate) offspring[i] ^= 1u;
        break;
      }
      case HeuristicKind::random_search: {
        detail::random_bits(engine, offspring);
        break;
      }
    }
    const std::size_t offspring_fitness = detail::fitness(problem.kind, offspring);
    ++evaluations;
    if (offspring_fitness >= problem.target) return {evaluations, true};
    if (heuristic.kind == HeuristicKind::random_search ||
        offspring_fitness >= current_fitness) {
      std::swap(current, offspring);
      current_fitness = offspring_fitness;
    }
  }
  return {budget, false};
}

// Full-design matrix of capped first-hitting times. Trial seeds derive from
// (problem id, heuristic id, run index) and the master seed, so the output is
// independent of iteration order and reproducible across platforms.
inline RunMatrix generate_matrix(const std::vector<ProblemSpec>& problems,
                                 const std::vector<HeuristicSpec>& heuristics,
                                 std::size_t runs, std::uint64_t budget,
                                 std::uint64_t master_seed) {
  if (problems.empty()) throw config_error("at least one problem required");
  if (heuristics.empty()) throw config_error("at least one heuristic required");
  if (runs == 0) throw config_error("runs must be >= 1");
  for (const auto& problem : problems) validate_spec(problem);
  for (const auto& heuristic : heuristics) validate_spec(heuristic);

  std::set<std::string> problem_ids, heuristic_ids;
  for (const auto& problem : problems)
    if (!problem_ids.insert(problem.id()).second)
      throw config_error("duplicate problem '" + problem.id() + "'");
  for (const auto& heuristic : heuristics)
    if (!heuristic_ids.insert(heuristic.id()).second)
      throw config_error("duplicate heuristic '" + heuristic.id() + "'");

  RunMatrix matrix;
  matrix.budget = static_cast<double>(budget);
  for (const auto& problem : problems) {
    for (const auto& heuristic : heuristics) {
      auto& values = matrix.cells[CellKey{heuristic.id(), problem.id()}];
      values.reserve(runs);
      for (std::size_t run = 1; run <= runs; ++run) {
        std::string tag = problem.id();
        tag += '\x1f';
        tag += heuristic.id();
        tag += '\x1f';
        tag += std::to_string(run);
        const std::uint64_t seed = mix64(master_seed ^ mix64(fnv1a64(tag)));
        const TrialResult trial = run_trial(problem, heuristic, budget, seed);
        values.push_back(static_cast<double>(trial.evaluations_to_target));
      }
    }
  }
  return matrix;
}

}  // namespace sevrank
