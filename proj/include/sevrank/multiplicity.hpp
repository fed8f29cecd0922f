#pragma once

// Benjamini-Hochberg step-up adjustment over a family of raw p-values.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "sevrank/errors.hpp"

namespace sevrank {

struct PValueEntry {
  std::string key;
  double p_raw = 0.0;
};

struct PValueFamily {
  std::vector<PValueEntry> entries;
};

// Adjusted values in the same order as the input entries: sort ascending,
// take m*p/rank, enforce monotonicity from the largest rank downward, clip
// at 1. Ties in p are ordered by key so the result never depends on input
// order beyond the keys themselves.
inline std::vector<double> bh_adjust(const PValueFamily& family) {
  const std::size_t m = family.entries.size();
  if (m == 0) throw data_error("bh_adjust on an empty family");

  std::set<std::string> keys;
  for (const auto& entry : family.entries) {
    if (!(entry.p_raw >= 0.0 && entry.p_raw <= 1.0))
      throw data_error("p-value out of [0, 1] for key '" + entry.key + "'");
    if (!keys.insert(entry.key).second)
      throw data_error("duplicate comparison key '" + entry.key + "'");
  }

  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ea = family.entries[a];
    const auto& eb = family.entries[b];
    if (ea.p_raw != eb.p_raw) return ea.p_raw < eb.p_raw;
    return ea.key < eb.key;
  });

  std::vector<double> adjusted(m);
  double running = 1.0;
  for (std::size_t i = m; i-- > 0;) {
    const double p = family.entries[order[i]].p_raw;
    const double scaled =
        static_cast<double>(m) * p / static_cast<double>(i + 1);
    running = std::min(running, scaled);
    adjusted[order[i]] = running;
  }
  return adjusted;
}

}  // namespace sevrank
