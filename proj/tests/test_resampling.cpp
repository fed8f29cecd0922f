#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <vector>

#include <sevrank/resampling.hpp>

#include "oracles.hpp"

using namespace sevrank;

namespace {

BootstrapNull make_null(std::vector<double> replicates) {
  BootstrapNull null;
  std::sort(replicates.begin(), replicates.end());
  null.replicates = std::move(replicates);
  null.n_first = 3;
  null.n_second = 2;
  return null;
}

std::vector<double> noisy_sample(std::uint64_t seed, std::size_t n,
                                 double shift) {
  // Sum of three uniforms: smooth, roughly bell-shaped, bounded.
  std::mt19937_64 engine(seed);
  std::vector<double> out(n);
  for (auto& v : out)
    v = shift + unit_double(engine()) + unit_double(engine()) +
        unit_double(engine());
  return out;
}

}  // namespace

TEST_CASE("comparison seeds ignore pair order and separate everything else") {
  const ComparisonSeed ab{42, "f1", "alpha", "beta"};
  const ComparisonSeed ba{42, "f1", "beta", "alpha"};
  CHECK(ab.value() == ba.value());

  CHECK(ab.value() != ComparisonSeed{42, "f2", "alpha", "beta"}.value());
  CHECK(ab.value() != ComparisonSeed{42, "f1", "alpha", "gamma"}.value());
  CHECK(ab.value() != ComparisonSeed{43, "f1", "alpha", "beta"}.value());
}

TEST_CASE("observed statistic is the difference of means and antisymmetric") {
  CHECK(observed_stat({10, 20}, {5, 5}) == 10.0);
  CHECK(observed_stat({1, 2, 3}, {1, 2, 3}) == 0.0);

  const auto a = noisy_sample(1, 17, 0.0);
  const auto b = noisy_sample(2, 23, 0.5);
  CHECK(observed_stat(a, b) + observed_stat(b, a) == 0.0);

  CHECK_THROWS_AS(observed_stat({}, {1.0}), data_error);
  CHECK_THROWS_AS(observed_stat({1.0}, {}), data_error);
}

TEST_CASE("pooled null: sorted, deterministic, centered, exact on constants") {
  const auto a = noisy_sample(3, 40, 0.0);
  const auto b = noisy_sample(4, 25, 0.3);

  const auto null = pooled_null(a, b, 5000, 99);
  CHECK(null.replicates.size() == 5000);
  CHECK(std::is_sorted(null.replicates.begin(), null.replicates.end()));
  CHECK(null.n_first == 40);
  CHECK(null.n_second == 25);
  CHECK(null.seed_used == 99);

  const auto again = pooled_null(a, b, 5000, 99);
  CHECK(null.replicates == again.replicates);
  const auto other_seed = pooled_null(a, b, 5000, 100);
  CHECK(null.replicates != other_seed.replicates);

  // Constant pool: every replicate is exactly zero.
  const std::vector<double> constant(10, 4.25);
  const auto degenerate = pooled_null(constant, constant, 200, 1);
  for (double t : degenerate.replicates) CHECK(t == 0.0);

  // Pooled resampling is centered: sample mean within 3 standard errors.
  const auto centered = pooled_null({1, 2}, {3, 4}, 10000, 7);
  double sum = 0.0;
  for (double t : centered.replicates) sum += t;
  CHECK(std::abs(sum / 10000.0) < 0.1);

  CHECK_THROWS_AS(pooled_null({}, {1.0}, 100, 1), data_error);
  CHECK_THROWS_AS(pooled_null({1.0}, {}, 100, 1), data_error);
  CHECK_THROWS_AS(pooled_null({1.0}, {1.0}, 0, 1), config_error);
}

TEST_CASE("p-value counts replicates at or above the observed statistic") {
  const auto null = make_null({-2, -1, 0, 1, 2});
  CHECK(p_value(null, 0.0) == 3.0 / 5.0);
  CHECK(p_value(null, -5.0) == 1.0);
  CHECK(p_value(null, 5.0) == 0.0);
  CHECK(p_value(null, 2.0) == 1.0 / 5.0);   // boundary tie counts
  CHECK(p_value(null, 2.0001) == 0.0);      // exactly zero is representable

  const auto sample = noisy_sample(5, 30, 0.0);
  const auto real_null = pooled_null(sample, noisy_sample(6, 30, 0.2), 1000, 3);
  for (double t : {-0.3, -0.05, 0.0, 0.02, 0.4})
    CHECK(p_value(real_null, t) == oracles::p_value(real_null.replicates, t));
}

TEST_CASE("quantile is the ceiling order statistic") {
  const auto null = make_null({1, 2, 3, 4, 5});
  CHECK(quantile(null, 0.5) == 3.0);
  CHECK(quantile(null, 1.0) == 5.0);
  CHECK(quantile(null, 0.2) == 1.0);
  CHECK(quantile(null, 0.2000001) == 2.0);
  CHECK(quantile(null, 0.8) == 4.0);
  CHECK(quantile(null, 1e-12) == 1.0);

  CHECK_THROWS_AS(quantile(null, 0.0), config_error);
  CHECK_THROWS_AS(quantile(null, 1.1), config_error);
  CHECK_THROWS_AS(quantile(null, -0.5), config_error);

  const auto sample = noisy_sample(8, 21, 0.0);
  const auto real_null = pooled_null(sample, noisy_sample(9, 13, 0.1), 777, 5);
  for (double q : {0.05, 0.25, 0.5, 0.65, 0.8, 0.95, 1.0})
    CHECK(quantile(real_null, q) == oracles::quantile(real_null.replicates, q));
}

TEST_CASE("flipping negates and resorts; flipping twice is the identity") {
  const auto a = noisy_sample(10, 12, 0.0);
  const auto b = noisy_sample(11, 19, 0.4);
  const auto null = pooled_null(a, b, 500, 21);
  const auto flipped = null.flipped();

  CHECK(flipped.n_first == null.n_second);
  CHECK(flipped.n_second == null.n_first);
  CHECK(flipped.seed_used == null.seed_used);
  CHECK(std::is_sorted(flipped.replicates.begin(), flipped.replicates.end()));
  for (std::size_t i = 0; i < null.replicates.size(); ++i)
    CHECK(flipped.replicates[i] == -null.replicates[500 - 1 - i]);

  const auto twice = flipped.flipped();
  CHECK(twice.replicates == null.replicates);
  CHECK(twice.n_first == null.n_first);
}

TEST_CASE("the two directions of a pair have complementary p-values") {
  const auto a = noisy_sample(14, 30, 0.0);
  const auto b = noisy_sample(15, 30, 0.25);
  const auto null = pooled_null(a, b, 2000, 33);
  const auto flipped = null.flipped();

  for (double t_obs : {-0.4, -0.1, 0.0, 0.15, 0.5}) {
    const double p_fwd = p_value(null, t_obs);
    const double p_rev = p_value(flipped, -t_obs);
    const auto ties = static_cast<double>(
        std::count(null.replicates.begin(), null.replicates.end(), t_obs));
    CHECK(p_fwd + p_rev == 1.0 + ties / 2000.0);
    CHECK(p_fwd + p_rev >= 1.0);
  }

  // Integer-valued data make boundary ties certain, exercising the tie term.
  const std::vector<double> x{1, 1, 2, 2, 3};
  const std::vector<double> y{2, 3, 3, 4};
  const auto tied = pooled_null(x, y, 1000, 5);
  const double t_obs = observed_stat(x, y);
  const auto ties = static_cast<double>(
      std::count(tied.replicates.begin(), tied.replicates.end(), t_obs));
  CHECK(ties > 0.0);
  CHECK(p_value(tied, t_obs) + p_value(tied.flipped(), -t_obs) ==
        1.0 + ties / 1000.0);
}

TEST_CASE("independent nulls agree on the p-value to bootstrap noise") {
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    const auto a = noisy_sample(100 + trial, 100, 0.0);
    const auto b = noisy_sample(200 + trial, 100, 0.05);
    const double t_obs = observed_stat(a, b);
    const double p1 = p_value(pooled_null(a, b, 100000, 2 * trial + 1), t_obs);
    const double p2 = p_value(pooled_null(a, b, 100000, 2 * trial + 2), t_obs);
    CHECK(std::abs(p1 - p2) < 0.01);
  }
}

TEST_CASE("replicate dump writes one t_star per line") {
  const auto null = make_null({0.5, -0.5});
  const auto path = std::filesystem::temp_directory_path() /
                    "sevrank_test_replicates.csv";
  write_replicates_csv(null, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t_star");
  std::getline(in, line);
  CHECK(line == "-0.5");
  std::getline(in, line);
  CHECK(line == "0.5");
  std::filesystem::remove(path);
}
