#pragma once

// Post-decision severity: how well the data support a discrepancy delta
// between two algorithms, given the test's decision. Counting forms over a
// bootstrap null, a closed-form supported discrepancy, curve evaluation over
// a grid, and a Gaussian reference implementation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "sevrank/errors.hpp"
#include "sevrank/resampling.hpp"

namespace sevrank {

enum class Decision { reject, not_reject };

inline std::string to_string(Decision decision) {
  return decision == Decision::reject ? "reject" : "not_reject";
}

// Severity of passing delta after a rejection: the probability, under the
// null shifted to a true difference of delta, of a statistic no larger than
// the one observed. Non-increasing in delta, from 1 down to 0.
inline double severity_reject(const BootstrapNull& null, double t_obs,
                              double delta) {
  if (null.replicates.empty()) throw data_error("severity on an empty null");
  const auto at_or_below =
      std::upper_bound(null.replicates.begin(), null.replicates.end(),
                       t_obs - delta) -
      null.replicates.begin();
  return static_cast<double>(at_or_below) /
         static_cast<double>(null.replicates.size());
}

// Severity counterpart after a non-rejection. Exact complement of
// severity_reject at every delta, hence non-decreasing from 0 up to 1.
inline double severity_nonreject(const BootstrapNull& null, double t_obs,
                                 double delta) {
  return 1.0 - severity_reject(null, t_obs, delta);
}

inline double severity(const BootstrapNull& null, double t_obs,
                       Decision decision, double delta) {
  return decision == Decision::reject ? severity_reject(null, t_obs, delta)
                                      : severity_nonreject(null, t_obs, delta);
}

// Largest discrepancy the data support at level s after a rejection, or the
// boundary discrepancy of the supported region after a non-rejection.
// Closed form under the order-statistic quantile convention; no search and no
// tolerance parameter. Negative results are meaningful: after a loss the
// supported region lies below zero.
inline double supported_delta(const BootstrapNull& null, double t_obs, double s,
                              Decision decision) {
  if (!(s >= 0.5 && s < 1.0)) throw config_error("severity level must be in [0.5, 1)");
  const double q = decision == Decision::reject ? s : 1.0 - s;
  return t_obs - quantile(null, q);
}

struct SeverityCurve {
  std::vector<double> deltas;
  std::vector<double> values;
  Decision decision = Decision::reject;
};

inline SeverityCurve severity_curve(const BootstrapNull& null, double t_obs,
                                    Decision decision,
                                    const std::vector<double>& delta_grid) {
  if (delta_grid.empty()) throw config_error("severity curve needs a non-empty grid");
  if (!std::is_sorted(delta_grid.begin(), delta_grid.end()))
    throw config_error("severity curve grid must be ascending");
  SeverityCurve curve;
  curve.deltas = delta_grid;
  curve.decision = decision;
  curve.values.reserve(delta_grid.size());
  for (double delta : delta_grid)
    curve.values.push_back(severity(null, t_obs, decision, delta));
  return curve;
}

// Default export grid: `points` equally spaced discrepancies spanning
// t_obs +- range(null), which always contains the severity transition. A
// degenerate null (all replicates equal) gets a unit half-width instead; a
// single-point grid collapses to the centre, t_obs.
inline std::vector<double> default_delta_grid(const BootstrapNull& null,
                                              double t_obs,
                                              std::size_t points = 101) {
  if (points == 0) throw config_error("delta grid needs at least 1 point");
  if (null.replicates.empty()) throw data_error("delta grid on an empty null");
  if (points == 1) return {t_obs};
  double range = null.replicates.back() - null.replicates.front();
  if (!(range > 0.0)) range = 1.0;
  const double lo = t_obs - range;
  const double step = 2.0 * range / static_cast<double>(points - 1);
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = lo + step * static_cast<double>(i);
  grid.back() = t_obs + range;
  return grid;
}

// --- Gaussian reference -----------------------------------------------------
//
// Used to cross-check the counting implementation on large nearly normal
// samples; not part of the ranking pipeline itself.

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Inverse standard normal CDF: rational approximation (Acklam) polished with
// one Halley step, giving close to full double precision over (0, 1).
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw config_error("normal quantile defined on (0, 1)");

  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x = 0.0;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  constexpr double sqrt_two_pi = 2.5066282746310005;
  const double err = normal_cdf(x) - p;
  const double u = err * sqrt_two_pi * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

struct NormalSeverity {
  Decision decision = Decision::not_reject;
  double value = 0.0;
};

// Gaussian analogue of the bootstrap pipeline for one comparison: decide
// d = mean_diff/std_err against the upper normal cut-off at level alpha, then
// evaluate the severity of discrepancy delta under the matching branch.
inline NormalSeverity normal_theory_severity(double mean_diff, double std_err,
                                             double alpha, double delta) {
  if (!(std_err > 0.0)) throw data_error("standard error must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw config_error("alpha must be in (0, 1)");
  const double d = mean_diff / std_err;
  const Decision decision = d > normal_quantile(1.0 - alpha)
                                ? Decision::reject
                                : Decision::not_reject;
  const double base = normal_cdf(d - delta / std_err);
  return {decision, decision == Decision::reject ? base : 1.0 - base};
}

// Gaussian analogue of supported_delta, exact by inverting the normal CDF.
inline double normal_theory_supported_delta(double mean_diff, double std_err,
                                            double s, Decision decision) {
  if (!(std_err > 0.0)) throw data_error("standard error must be positive");
  if (!(s >= 0.5 && s < 1.0)) throw config_error("severity level must be in [0.5, 1)");
  const double q = decision == Decision::reject ? s : 1.0 - s;
  return mean_diff - std_err * normal_quantile(q);
}

}  // namespace sevrank
