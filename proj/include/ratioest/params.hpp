#pragma once

// Parameter and data types shared by every other header, with validation of
// the model's admissible ranges.
//
// Model under study: a finite population of N units where
//
//     y_i = alpha + beta * x_i + u_i,
//     x_i ~ iid Gamma(shape = theta, scale = 1),    2 < theta
//     E(u_i | x_i) = 0,   E(u_i^2 | x_i) = delta * x_i^g,   0 <= g <= 2,
//
// sampled by simple random sampling without replacement (SRSWOR) of size n.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ratioest {

struct SuperPopulationParams {
  double alpha = 0.0;  // model intercept
  double beta = 0.0;   // model slope
  double delta = 0.0;  // error-variance scale, >= 0
  double g = 0.0;      // heteroscedasticity exponent, in [0, 2]
  double theta = 0.0;  // gamma shape of x, > 2

  bool operator==(const SuperPopulationParams&) const = default;
};

struct DesignParams {
  std::int64_t N = 0;  // population size
  std::int64_t n = 0;  // sample size, 1 <= n < N

  bool operator==(const DesignParams&) const = default;
};

struct Population {
  std::vector<double> x;  // auxiliary values, all > 0
  std::vector<double> y;  // study values

  std::int64_t size() const { return static_cast<std::int64_t>(x.size()); }

  bool operator==(const Population&) const = default;
};

inline void validate(const SuperPopulationParams& sp) {
  if (!(std::isfinite(sp.alpha) && std::isfinite(sp.beta))) {
    throw std::invalid_argument("alpha and beta must be finite");
  }
  if (!(sp.theta > 2.0) || !std::isfinite(sp.theta)) {
    throw std::invalid_argument("theta must exceed 2");
  }
  if (!(sp.g >= 0.0 && sp.g <= 2.0)) {
    throw std::invalid_argument("g must lie in [0, 2]");
  }
  if (!(sp.delta >= 0.0) || !std::isfinite(sp.delta)) {
    throw std::invalid_argument("delta must be finite and non-negative");
  }
}

inline void validate(const DesignParams& dp) {
  if (!(dp.n >= 1 && dp.n < dp.N)) {
    throw std::invalid_argument(
        "sample size must satisfy 1 <= n < N (got n=" + std::to_string(dp.n) +
        ", N=" + std::to_string(dp.N) + ")");
  }
}

inline void validate(const Population& pop) {
  if (pop.x.size() != pop.y.size() || pop.x.size() < 2) {
    throw std::invalid_argument("population vectors x and y must have equal length >= 2");
  }
  for (double xi : pop.x) {
    if (!(xi > 0.0) || !std::isfinite(xi)) {
      throw std::invalid_argument("all population x values must be positive and finite");
    }
  }
  for (double yi : pop.y) {
    if (!std::isfinite(yi)) {
      throw std::invalid_argument("all population y values must be finite");
    }
  }
}

// Joint validation for closed-form use.  The analytic expectations divide by
// (n*theta - 1)(n*theta - 2), so they additionally need n*theta > 2; the
// estimator/simulation path does not, and uses the two single-argument
// overloads above instead.
inline std::pair<SuperPopulationParams, DesignParams> validate_params(
    const SuperPopulationParams& sp, const DesignParams& dp) {
  validate(sp);
  validate(dp);
  if (!(static_cast<double>(dp.n) * sp.theta > 2.0)) {
    throw std::invalid_argument("n*theta must exceed 2 for closed forms");
  }
  return {sp, dp};
}

}  // namespace ratioest
