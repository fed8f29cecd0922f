#pragma once

// Pooled-bootstrap machinery for two-sample mean comparisons: deterministic
// per-comparison seeding, null-distribution construction, one-sided p-values
// and order-statistic quantiles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "sevrank/errors.hpp"
#include "sevrank/util.hpp"

namespace sevrank {

// Derives the RNG stream for one (problem, algorithm pair) comparison from
// the master seed. The pair is taken unordered, so both directions of a
// comparison map to the same stream, and the derivation depends only on ids,
// never on execution order -- results are identical whether comparisons run
// sequentially or on any number of threads.
struct ComparisonSeed {
  std::uint64_t master = 0;
  std::string problem;
  std::string algo_a;
  std::string algo_b;

  std::uint64_t value() const {
    const auto& lo = std::min(algo_a, algo_b);
    const auto& hi = std::max(algo_a, algo_b);
    std::string tag;
    tag.reserve(problem.size() + lo.size() + hi.size() + 2);
    tag += problem;
    tag += '\x1f';
    tag += lo;
    tag += '\x1f';
    tag += hi;
    return mix64(master ^ mix64(fnv1a64(tag)));
  }
};

// Observed statistic for an oriented comparison: mean(first) - mean(second).
inline double observed_stat(const std::vector<double>& first,
                            const std::vector<double>& second) {
  if (first.empty() || second.empty())
    throw data_error("observed_stat requires two non-empty samples");
  double sum1 = 0.0;
  for (double v : first) sum1 += v;
  double sum2 = 0.0;
  for (double v : second) sum2 += v;
  return sum1 / static_cast<double>(first.size()) -
         sum2 / static_cast<double>(second.size());
}

// Bootstrap null distribution of the mean-difference statistic under the
// hypothesis that both samples come from one population. Replicates are kept
// sorted ascending so p-values and quantiles are binary searches.
struct BootstrapNull {
  std::vector<double> replicates;
  std::size_t n_first = 0;
  std::size_t n_second = 0;
  std::uint64_t seed_used = 0;

  // Null for the reverse orientation of the same pair. Negating the stored
  // replicates (instead of redrawing with the groups swapped) lets the two
  // directions share one resampling pass and makes their p-values exact
  // complements at every threshold.
  BootstrapNull flipped() const {
    BootstrapNull out;
    out.replicates.reserve(replicates.size());
    for (auto it = replicates.rbegin(); it != replicates.rend(); ++it)
      out.replicates.push_back(-*it);
    out.n_first = n_second;
    out.n_second = n_first;
    out.seed_used = seed_used;
    return out;
  }
};

// Builds the pooled null: both samples are concatenated, and each replicate
// redraws the full design with replacement from the pool -- n_first values
// for the first group, n_second for the second -- and records the difference
// of group means.
inline BootstrapNull pooled_null(const std::vector<double>& first,
                                 const std::vector<double>& second,
                                 std::size_t n_b, std::uint64_t seed) {
  if (first.empty() || second.empty())
    throw data_error("pooled_null requires two non-empty samples");
  if (n_b == 0) throw config_error("resample count must be positive");

  std::vector<double> pool;
  pool.reserve(first.size() + second.size());
  pool.insert(pool.end(), first.begin(), first.end());
  pool.insert(pool.end(), second.begin(), second.end());

  const std::size_t n1 = first.size();
  const std::size_t n2 = second.size();
  const std::size_t n = pool.size();
  const double inv1 = 1.0 / static_cast<double>(n1);
  const double inv2 = 1.0 / static_cast<double>(n2);

  std::mt19937_64 engine(seed);
  BootstrapNull null;
  null.n_first = n1;
  null.n_second = n2;
  null.seed_used = seed;
  null.replicates.resize(n_b);
  for (std::size_t r = 0; r < n_b; ++r) {
    double sum1 = 0.0;
    for (std::size_t i = 0; i < n1; ++i) sum1 += pool[bounded_index(engine(), n)];
    double sum2 = 0.0;
    for (std::size_t i = 0; i < n2; ++i) sum2 += pool[bounded_index(engine(), n)];
    null.replicates[r] = sum1 * inv1 - sum2 * inv2;
  }
  std::sort(null.replicates.begin(), null.replicates.end());
  return null;
}

// One-sided p-value: the fraction of replicates at or above the observed
// statistic. Plain count over n_b, so exactly zero is representable.
inline double p_value(const BootstrapNull& null, double t_obs) {
  if (null.replicates.empty()) throw data_error("p_value on an empty null");
  const auto at_or_above =
      null.replicates.end() -
      std::lower_bound(null.replicates.begin(), null.replicates.end(), t_obs);
  return static_cast<double>(at_or_above) /
         static_cast<double>(null.replicates.size());
}

namespace detail {

// ceil(q*n) with the product snapped to an integer it misses only by
// representation noise. Decimal orders are carried as their nearest doubles
// (1 - 0.95 is 0.050000000000000044), so a plain std::ceil(q * n) overshoots
// mathematically integral ranks by one (0.050000000000000044 * 400 exceeds
// 20). The tolerance scales with the product, covering the input ulp plus
// the multiplication rounding and nothing more.
inline double snapped_ceil_product(double q, double n) {
  const double product = q * n;
  const double nearest = std::nearbyint(product);
  const double tolerance = 8.0 * std::numeric_limits<double>::epsilon() *
                           std::max(1.0, std::abs(product));
  if (std::abs(product - nearest) <= tolerance) return nearest;
  return std::ceil(product);
}

}  // namespace detail

// q-quantile as the ceil(q*n)-th order statistic (1-indexed): the smallest
// replicate whose empirical CDF reaches q. quantile(1) is the maximum.
inline double quantile(const BootstrapNull& null, double q) {
  if (null.replicates.empty()) throw data_error("quantile on an empty null");
  if (!(q > 0.0 && q <= 1.0)) throw config_error("quantile order must be in (0, 1]");
  const std::size_t n = null.replicates.size();
  auto rank = static_cast<std::size_t>(
      detail::snapped_ceil_product(q, static_cast<double>(n)));
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  return null.replicates[rank - 1];
}

// Debug dump of the replicate vector, one value per line.
inline void write_replicates_csv(const BootstrapNull& null,
                                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write '" + path.string() + "'");
  out << "t_star\n";
  for (double t : null.replicates) out << format_double(t) << '\n';
  if (!out) throw io_error("failed writing '" + path.string() + "'");
}

}  // namespace sevrank
