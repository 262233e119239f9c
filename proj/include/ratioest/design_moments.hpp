#pragma once

// Design-based moments under SRSWOR for a fixed finite population.
//
// Two routes to the bias and MSE of an estimator:
//   * exact_design_expectation   -- enumerate all C(N, n) samples (small N),
//   * sampled_design_expectation -- plain Monte Carlo over random samples.
//
// Plus the classical second-order approximations for the ratio estimator,
//
//   B(ybar_r) ~ lambda * (R*Sx2 - Syx) / Xbar
//   M(ybar_r) ~ lambda * (Sy2 + R^2*Sx2 - 2*R*Syx),     lambda = (N-n)/(nN),
//
// with the (N-1)-divisor definitions of Sy2, Sx2, Syx and R = Ybar/Xbar.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratioest/estimators.hpp"
#include "ratioest/params.hpp"
#include "ratioest/rng.hpp"
#include "ratioest/summation.hpp"

namespace ratioest {

struct FinitePopulationMoments {
  double ybar = 0.0;      // Ybar
  double xbar = 0.0;      // Xbar
  double sy2 = 0.0;       // Sy2, divisor N-1
  double sx2 = 0.0;       // Sx2
  double syx = 0.0;       // Syx
  double r_ratio = 0.0;   // R = Ybar / Xbar
  double beta_reg = 0.0;  // Syx / Sx2; NaN when the x column is constant
  double lambda = 0.0;    // (N - n) / (n N)

  bool operator==(const FinitePopulationMoments&) const = default;
};

inline FinitePopulationMoments finite_population_moments(const Population& pop,
                                                         const DesignParams& dp) {
  validate(pop);
  validate(dp);
  if (pop.size() != dp.N) {
    throw std::invalid_argument("population size does not match N");
  }
  const double N = static_cast<double>(dp.N);
  const double n = static_cast<double>(dp.n);

  FinitePopulationMoments m;
  m.xbar = sample_mean(pop.x);
  m.ybar = sample_mean(pop.y);

  KahanSum sxx, syy, sxy;
  for (std::int64_t i = 0; i < dp.N; ++i) {
    const double dx = pop.x[i] - m.xbar;
    const double dy = pop.y[i] - m.ybar;
    sxx.add(dx * dx);
    syy.add(dy * dy);
    sxy.add(dy * dx);
  }
  m.sx2 = sxx.value() / (N - 1.0);
  m.sy2 = syy.value() / (N - 1.0);
  m.syx = sxy.value() / (N - 1.0);
  m.r_ratio = m.ybar / m.xbar;
  // Degenerate x (all values equal): the regression slope has no meaning,
  // but every other moment is still well-defined and returned.
  m.beta_reg = m.sx2 > 0.0 ? m.syx / m.sx2 : std::numeric_limits<double>::quiet_NaN();
  m.lambda = (N - n) / (n * N);
  return m;
}

inline double approx_bias_ratio(const FinitePopulationMoments& m) {
  if (!(m.xbar > 0.0)) throw std::invalid_argument("approx_bias_ratio requires Xbar > 0");
  return m.lambda * (m.r_ratio * m.sx2 - m.syx) / m.xbar;
}

inline double approx_mse_ratio(const FinitePopulationMoments& m) {
  if (!(m.xbar > 0.0)) throw std::invalid_argument("approx_mse_ratio requires Xbar > 0");
  return m.lambda * (m.sy2 + m.r_ratio * m.r_ratio * m.sx2 - 2.0 * m.r_ratio * m.syx);
}

// The second-order MSE is minimal over populations exactly when the ratio R
// equals the regression slope Syx/Sx2 (y proportional to x through the
// origin); exposed as a predicate for diagnostics.
inline bool ratio_matches_regression_slope(const FinitePopulationMoments& m,
                                           double rel_tol = 1e-9) {
  const double scale = std::max(std::abs(m.r_ratio), std::abs(m.beta_reg));
  return std::abs(m.r_ratio - m.beta_reg) <= rel_tol * std::max(scale, 1.0);
}

// ---------------------------------------------------------------------------
// Estimator selection for the expectation engines.
// ---------------------------------------------------------------------------

enum class EstimatorKind { mean, ratio, alternative };

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::mean;
  double a = 0.0;  // shift, used by EstimatorKind::alternative only

  static EstimatorSpec mean() { return {EstimatorKind::mean, 0.0}; }
  static EstimatorSpec ratio() { return {EstimatorKind::ratio, 0.0}; }
  static EstimatorSpec alternative(double A) { return {EstimatorKind::alternative, A}; }

  bool operator==(const EstimatorSpec&) const = default;
};

inline double evaluate_estimator(const EstimatorSpec& est, double ybar, double xbar,
                                 double Xbar) {
  switch (est.kind) {
    case EstimatorKind::mean:
      return ybar;
    case EstimatorKind::ratio:
      return ratio_estimate(ybar, xbar, Xbar);
    case EstimatorKind::alternative:
      return alternative_estimate(ybar, xbar, Xbar, est.a);
  }
  throw std::logic_error("unreachable estimator kind");
}

struct DesignExpectation {
  double bias = 0.0;  // E_p(est) - Ybar
  double mse = 0.0;   // E_p(est - Ybar)^2
  // Monte Carlo standard errors; exactly 0 when produced by enumeration.
  double bias_se = 0.0;
  double mse_se = 0.0;
  std::int64_t n_samples_enumerated = 0;

  bool operator==(const DesignExpectation&) const = default;
};

constexpr std::int64_t kDefaultEnumerationCap = 10'000'000;

// C(N, n), or cap+1 as an overflow-safe saturation once the count passes cap.
inline std::int64_t binomial_capped(std::int64_t N, std::int64_t n, std::int64_t cap) {
  n = std::min(n, N - n);
  if (n < 0) return 0;
  double c = 1.0;
  for (std::int64_t i = 1; i <= n; ++i) {
    c *= static_cast<double>(N - n + i) / static_cast<double>(i);
    if (c > static_cast<double>(cap)) return cap + 1;
  }
  return static_cast<std::int64_t>(std::llround(c));
}

// Exact design expectation by exhaustive enumeration of all C(N, n)
// equally-weighted subsets, walked in lexicographic order with running
// partial sums.  Single-threaded by design: the Kahan accumulation order is
// then fixed, so results are bitwise reproducible run-to-run.
inline DesignExpectation exact_design_expectation(const Population& pop,
                                                  const DesignParams& dp,
                                                  const EstimatorSpec& est,
                                                  std::int64_t cap = kDefaultEnumerationCap) {
  validate(pop);
  validate(dp);
  if (pop.size() != dp.N) {
    throw std::invalid_argument("population size does not match N");
  }
  const std::int64_t n_subsets = binomial_capped(dp.N, dp.n, cap);
  if (n_subsets > cap) {
    throw std::invalid_argument(
        "C(N, n) exceeds the enumeration cap of " + std::to_string(cap) +
        " subsets; use sampled_design_expectation instead");
  }

  const double Xbar = sample_mean(pop.x);
  const double Ybar = sample_mean(pop.y);
  const double nn = static_cast<double>(dp.n);

  KahanSum err_sum, err2_sum;
  std::int64_t leaves = 0;

  // walk(k, first, sx, sy): extend a prefix of k chosen units whose x,y sums
  // are sx, sy with indices >= first.
  auto walk = [&](auto&& self, std::int64_t k, std::int64_t first, double sx,
                  double sy) -> void {
    if (k == dp.n) {
      const double e = evaluate_estimator(est, sy / nn, sx / nn, Xbar);
      const double err = e - Ybar;
      err_sum.add(err);
      err2_sum.add(err * err);
      ++leaves;
      return;
    }
    // Leave room for the remaining n-k-1 picks.
    for (std::int64_t i = first; i <= dp.N - (dp.n - k); ++i) {
      self(self, k + 1, i + 1, sx + pop.x[i], sy + pop.y[i]);
    }
  };
  walk(walk, 0, 0, 0.0, 0.0);

  DesignExpectation out;
  out.bias = err_sum.value() / static_cast<double>(leaves);
  out.mse = err2_sum.value() / static_cast<double>(leaves);
  out.n_samples_enumerated = leaves;
  return out;
}

// Monte Carlo counterpart: average over n_draws independent SRSWOR samples.
// Deterministic given the seed; standard errors describe the draw-to-draw
// spread of the estimator error and its square.
inline DesignExpectation sampled_design_expectation(const Population& pop,
                                                    const DesignParams& dp,
                                                    const EstimatorSpec& est,
                                                    std::int64_t n_draws,
                                                    std::uint64_t seed) {
  validate(pop);
  validate(dp);
  if (pop.size() != dp.N) {
    throw std::invalid_argument("population size does not match N");
  }
  if (n_draws < 1) throw std::invalid_argument("n_draws must be >= 1");

  const double Xbar = sample_mean(pop.x);
  const double Ybar = sample_mean(pop.y);
  const double nn = static_cast<double>(dp.n);

  Rng rng(seed);
  std::vector<std::uint32_t> perm(static_cast<std::size_t>(dp.N));
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<std::uint32_t>(i);

  std::vector<double> errs(static_cast<std::size_t>(n_draws));
  std::vector<double> errs2(static_cast<std::size_t>(n_draws));
  for (std::int64_t d = 0; d < n_draws; ++d) {
    draw_srswor(rng, perm, static_cast<std::size_t>(dp.n));
    double sx = 0.0, sy = 0.0;
    for (std::int64_t i = 0; i < dp.n; ++i) {
      sx += pop.x[perm[static_cast<std::size_t>(i)]];
      sy += pop.y[perm[static_cast<std::size_t>(i)]];
    }
    const double e = evaluate_estimator(est, sy / nn, sx / nn, Xbar);
    const double err = e - Ybar;
    errs[static_cast<std::size_t>(d)] = err;
    errs2[static_cast<std::size_t>(d)] = err * err;
  }

  const double D = static_cast<double>(n_draws);
  DesignExpectation out;
  out.bias = pairwise_mean(errs);
  out.mse = pairwise_mean(errs2);
  out.n_samples_enumerated = n_draws;
  if (n_draws > 1) {
    KahanSum v1, v2;
    for (std::int64_t d = 0; d < n_draws; ++d) {
      const double d1 = errs[static_cast<std::size_t>(d)] - out.bias;
      const double d2 = errs2[static_cast<std::size_t>(d)] - out.mse;
      v1.add(d1 * d1);
      v2.add(d2 * d2);
    }
    out.bias_se = std::sqrt(v1.value() / (D - 1.0) / D);
    out.mse_se = std::sqrt(v2.value() / (D - 1.0) / D);
  }
  return out;
}

}  // namespace ratioest
