#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <sevrank/resampling.hpp>
#include <sevrank/severity.hpp>

#include "oracles.hpp"

using namespace sevrank;

namespace {

BootstrapNull make_null(std::vector<double> replicates) {
  BootstrapNull null;
  std::sort(replicates.begin(), replicates.end());
  null.replicates = std::move(replicates);
  null.n_first = null.n_second = 5;
  return null;
}

// Random null with strictly increasing integer replicates (cumulative sums of
// positive integers), so order statistics have no ties and crossing contracts
// are exact.
BootstrapNull lattice_null(std::mt19937_64& engine, std::size_t n) {
  std::vector<double> replicates(n);
  double acc = -500.0;
  for (auto& r : replicates) {
    acc += 1.0 + static_cast<double>(bounded_index(engine(), 7));
    r = acc;
  }
  BootstrapNull null;
  null.replicates = std::move(replicates);
  null.n_first = null.n_second = 10;
  return null;
}

}  // namespace

TEST_CASE("severity counting matches the worked examples") {
  const auto null = make_null({-2, -1, 0, 1, 2});
  CHECK(severity_reject(null, 1.5, 1.0) == 3.0 / 5.0);
  CHECK(severity_nonreject(null, -1.5, 0.5) == 4.0 / 5.0);

  // Far beyond the replicates the reject severity empties out.
  CHECK(severity_reject(null, 1.5, 10.0) == 0.0);
  // And far below, the non-reject severity does.
  CHECK(severity_nonreject(null, -1.5, -10.0) == 0.0);
}

TEST_CASE("severity at zero discrepancy relates to the p-value via ties") {
  const auto null = make_null({-2, -1, 0, 1, 2});

  // No replicate ties t_obs: S_r(0) = 1 - p exactly.
  CHECK(severity_reject(null, 1.5, 0.0) == 1.0 - p_value(null, 1.5));

  // A tie at t_obs shifts the identity by the tie mass.
  const double t_obs = 1.0;
  const double ties = 1.0 / 5.0;
  CHECK(severity_reject(null, t_obs, 0.0) ==
        1.0 - p_value(null, t_obs) + ties);
}

TEST_CASE("complementarity and monotonicity are exact over random cases") {
  std::mt19937_64 engine(2024);
  for (int rep = 0; rep < 50; ++rep) {
    const auto null = lattice_null(engine, 100 + bounded_index(engine(), 200));
    const double t_obs =
        null.replicates[bounded_index(engine(), null.replicates.size())] +
        static_cast<double>(bounded_index(engine(), 5)) - 2.0;
    const auto grid = default_delta_grid(null, t_obs, 101);

    double previous_reject = 1.0;
    double previous_nonreject = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double sr = severity_reject(null, t_obs, grid[i]);
      const double snr = severity_nonreject(null, t_obs, grid[i]);
      REQUIRE(sr + snr == 1.0);
      REQUIRE((sr >= 0.0 && sr <= 1.0));
      if (i) {
        REQUIRE(sr <= previous_reject);
        REQUIRE(snr >= previous_nonreject);
      }
      previous_reject = sr;
      previous_nonreject = snr;
      REQUIRE(sr == oracles::severity_reject(null.replicates, t_obs, grid[i]));
    }
  }
}

TEST_CASE("supported delta matches the worked examples") {
  const auto null = make_null({1, 2, 3, 4, 5});
  CHECK(supported_delta(null, 10.0, 0.8, Decision::reject) == 6.0);
  CHECK(supported_delta(null, 0.0, 0.8, Decision::not_reject) == -1.0);

  // Symmetric null, s = 0.5: both branches land within one replicate spacing
  // of zero.
  const auto symmetric = make_null({-2, -1, 0, 1, 2});
  CHECK(std::abs(supported_delta(symmetric, 0.0, 0.5, Decision::reject)) <= 1.0);
  CHECK(std::abs(supported_delta(symmetric, 0.0, 0.5, Decision::not_reject)) <=
        1.0);

  CHECK_THROWS_AS(supported_delta(null, 0.0, 0.4, Decision::reject),
                  config_error);
  CHECK_THROWS_AS(supported_delta(null, 0.0, 1.0, Decision::reject),
                  config_error);
}

TEST_CASE("supported delta shifts exactly with the observed statistic") {
  const auto null = make_null({1, 2, 3, 4, 5});
  for (Decision decision : {Decision::reject, Decision::not_reject})
    for (double shift : {-3.5, 0.25, 1000.0})
      CHECK(supported_delta(null, 2.0 + shift, 0.8, decision) ==
            supported_delta(null, 2.0, 0.8, decision) + shift);
}

TEST_CASE("crossing contract on tie-free nulls with integral s*n") {
  std::mt19937_64 engine(7);
  for (int rep = 0; rep < 50; ++rep) {
    // Sizes chosen so s*n is an integer for every tested level.
    const std::size_t n = 100 * (1 + bounded_index(engine(), 4));
    const auto null = lattice_null(engine, n);
    const double t_obs =
        null.replicates[bounded_index(engine(), n)] + 0.5;

    for (double s : {0.5, 0.65, 0.8, 0.95}) {
      const double d_reject = supported_delta(null, t_obs, s, Decision::reject);
      REQUIRE(severity_reject(null, t_obs, d_reject) >= s);
      REQUIRE(severity_reject(null, t_obs,
                              d_reject + 1e-9) < s);

      const double d_nonreject =
          supported_delta(null, t_obs, s, Decision::not_reject);
      REQUIRE(severity_nonreject(null, t_obs, d_nonreject) >= s);
      // One full replicate spacing below the boundary the severity must have
      // dropped under s (the spacing here is at most 7).
      REQUIRE(severity_nonreject(null, t_obs, d_nonreject - 7.0 - 1e-9) < s);
    }
  }
}

TEST_CASE("reject-branch crossing holds even with ties and non-integral s*n") {
  std::mt19937_64 engine(11);
  for (int rep = 0; rep < 50; ++rep) {
    // Heavily tied integer replicates, deliberately awkward sizes.
    const std::size_t n = 97 + bounded_index(engine(), 61);
    std::vector<double> replicates(n);
    for (auto& r : replicates)
      r = static_cast<double>(bounded_index(engine(), 9));
    auto null = make_null(std::move(replicates));
    const double t_obs = 4.5;

    for (double s : {0.5, 0.6180339887, 0.8, 0.91}) {
      const double d = supported_delta(null, t_obs, s, Decision::reject);
      REQUIRE(severity_reject(null, t_obs, d) >= s);
      REQUIRE(severity_reject(null, t_obs, d + 1e-9) < s);
    }
  }
}

TEST_CASE("severity curve follows the decision branch over the grid") {
  const auto null = make_null({-2, -1, 0, 1, 2});

  const auto single = severity_curve(null, 1.5, Decision::reject, {0.0});
  CHECK(single.values == std::vector<double>{severity_reject(null, 1.5, 0.0)});

  const auto grid = default_delta_grid(null, 1.5, 101);
  CHECK(grid.size() == 101);
  CHECK(grid.front() == 1.5 - 4.0);
  CHECK(grid.back() == 1.5 + 4.0);
  CHECK(std::is_sorted(grid.begin(), grid.end()));

  const auto curve = severity_curve(null, 1.5, Decision::reject, grid);
  CHECK(curve.values.size() == 101);
  CHECK(std::is_sorted(curve.values.rbegin(), curve.values.rend()));

  // The curve crosses s at the supported delta, within one grid step.
  const double s = 0.8;
  const double d_star = supported_delta(null, 1.5, s, Decision::reject);
  const double step = grid[1] - grid[0];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (curve.values[i] >= s) CHECK(grid[i] <= d_star + step);
    if (grid[i] <= d_star - step) CHECK(curve.values[i] >= s);
  }

  CHECK_THROWS_AS(severity_curve(null, 1.5, Decision::reject, {}),
                  config_error);
  CHECK_THROWS_AS(severity_curve(null, 1.5, Decision::reject, {1.0, 0.0}),
                  config_error);
}

TEST_CASE("degenerate null: curve steps from one to zero at t_obs") {
  const auto null = make_null(std::vector<double>(50, 0.0));
  const auto grid = default_delta_grid(null, 0.0, 11);
  CHECK(grid.front() == -1.0);  // unit half-width fallback
  CHECK(grid.back() == 1.0);
  const auto curve = severity_curve(null, 0.0, Decision::reject, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(curve.values[i] == (grid[i] <= 0.0 ? 1.0 : 0.0));
}

TEST_CASE("single-point default grid collapses to the observed statistic") {
  const auto null = make_null({1, 2, 3});
  CHECK(default_delta_grid(null, 2.5, 1) == std::vector<double>{2.5});
  CHECK_THROWS_AS(default_delta_grid(null, 2.5, 0), config_error);
}

TEST_CASE("normal quantile inverts the normal CDF to high precision") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(std::abs(normal_quantile(0.95) - 1.6448536269514722) < 1e-12);
  CHECK(std::abs(normal_quantile(0.975) - 1.959963984540054) < 1e-12);
  CHECK(std::abs(normal_quantile(0.5)) < 1e-15);

  for (double p = 0.0005; p < 1.0; p += 0.0007)
    CHECK(std::abs(normal_cdf(normal_quantile(p)) - p) < 1e-12);

  CHECK_THROWS_AS(normal_quantile(0.0), config_error);
  CHECK_THROWS_AS(normal_quantile(1.0), config_error);
}

TEST_CASE("gaussian reference: decisions and severities") {
  // Zero observed difference: no rejection, and the non-reject severity of a
  // zero discrepancy is exactly one half.
  const auto at_zero = normal_theory_severity(0.0, 1.0, 0.05, 0.0);
  CHECK(at_zero.decision == Decision::not_reject);
  CHECK(at_zero.value == 0.5);

  // d = 2.0 exceeds the 0.95 cut-off of 1.645.
  CHECK(normal_theory_severity(2.0, 1.0, 0.05, 0.0).decision ==
        Decision::reject);
  CHECK(normal_theory_severity(1.6, 1.0, 0.05, 0.0).decision ==
        Decision::not_reject);

  CHECK_THROWS_AS(normal_theory_severity(1.0, 0.0, 0.05, 0.0), data_error);
  CHECK_THROWS_AS(normal_theory_severity(1.0, 1.0, 0.0, 0.0), config_error);

  // The gaussian supported delta sits exactly at severity level s.
  for (double s : {0.5, 0.65, 0.8, 0.95}) {
    const double d_star =
        normal_theory_supported_delta(3.0, 1.5, s, Decision::reject);
    const auto at_boundary = normal_theory_severity(3.0, 1.5, 0.05, d_star);
    CHECK(std::abs(at_boundary.value - s) < 1e-12);

    const double d_star_nr =
        normal_theory_supported_delta(0.5, 1.5, s, Decision::not_reject);
    const double severity_nr =
        1.0 - normal_cdf((0.5 - d_star_nr) / 1.5);
    CHECK(std::abs(severity_nr - s) < 1e-12);
  }
  CHECK_THROWS_AS(normal_theory_supported_delta(1.0, -1.0, 0.8,
                                                Decision::reject),
                  data_error);
  CHECK_THROWS_AS(normal_theory_supported_delta(1.0, 1.0, 0.2,
                                                Decision::reject),
                  config_error);
}

TEST_CASE("bootstrap severities track the gaussian reference on NIID data") {
  // One moderate-size smoke comparison; the full Monte-Carlo study lives in
  // the acceptance suite.
  std::mt19937_64 engine(31415);
  auto gaussian = [&](double mean) {
    // Box-Muller from the deterministic unit doubles.
    const double u1 = std::max(unit_double(engine()), 1e-300);
    const double u2 = unit_double(engine());
    return mean + std::sqrt(-2.0 * std::log(u1)) *
                      std::cos(2.0 * 3.141592653589793 * u2);
  };
  std::vector<double> a(200), b(200);
  for (auto& v : a) v = gaussian(0.3);
  for (auto& v : b) v = gaussian(0.0);

  const double t_obs = observed_stat(a, b);
  const auto null = pooled_null(a, b, 20000, 99);

  // Pooled-variance standard error of the mean difference.
  double pooled_ss = 0.0, pooled_mean = 0.0;
  for (double v : a) pooled_mean += v;
  for (double v : b) pooled_mean += v;
  pooled_mean /= 400.0;
  for (double v : a) pooled_ss += (v - pooled_mean) * (v - pooled_mean);
  for (double v : b) pooled_ss += (v - pooled_mean) * (v - pooled_mean);
  const double std_err = std::sqrt(pooled_ss / 399.0 * (1.0 / 200 + 1.0 / 200));

  const double p_boot = p_value(null, t_obs);
  const double p_normal = 1.0 - normal_cdf(t_obs / std_err);
  CHECK(std::abs(p_boot - p_normal) < 0.03);

  for (double delta : {-0.2, 0.0, 0.1, 0.3, 0.5}) {
    const double boot = severity_reject(null, t_obs, delta);
    const double normal = normal_cdf((t_obs - delta) / std_err);
    CHECK(std::abs(boot - normal) < 0.03);
  }
}
