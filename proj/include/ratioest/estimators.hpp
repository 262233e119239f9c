#pragma once

// Point estimators of the population mean Ybar from one SRSWOR sample.
//
//   sample mean          ybar
//   ratio estimator      ybar_r = ybar * (Xbar / xbar)
//   shifted-ratio        ybar_a = (ybar - A) * (Xbar / xbar) + A
//
// The shifted form applies the ratio estimator to the translated variable
// z = y - A and shifts back, so A = 0 recovers ybar_r exactly.  All three
// take precomputed means so the enumeration engine can feed them from
// running sums; compute_estimates() is the convenience wrapper from a
// population and an index set.

#include <cstdint>
#include <span>
#include <stdexcept>

#include "ratioest/params.hpp"
#include "ratioest/summation.hpp"

namespace ratioest {

struct EstimateSet {
  double mean_est = 0.0;   // ybar
  double ratio_est = 0.0;  // ybar_r
  double alt_est = 0.0;    // ybar_a
  double a_value = 0.0;    // the shift A used for alt_est

  bool operator==(const EstimateSet&) const = default;
};

inline double sample_mean(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("sample_mean: empty sample");
  KahanSum s;
  for (double x : v) s.add(x);
  return s.value() / static_cast<double>(v.size());
}

inline double ratio_estimate(double ybar, double xbar, double Xbar) {
  if (!(xbar > 0.0)) {
    throw std::invalid_argument("ratio estimator undefined for non-positive sample mean of x");
  }
  if (!(Xbar > 0.0)) {
    throw std::invalid_argument("ratio estimator undefined for non-positive population mean of x");
  }
  return ybar * (Xbar / xbar);
}

// Written as (ybar - A)*(Xbar/xbar) + A; at A = 0 both subexpressions reduce
// bit-for-bit to the plain ratio estimate.
inline double alternative_estimate(double ybar, double xbar, double Xbar, double A) {
  if (!(xbar > 0.0)) {
    throw std::invalid_argument("ratio estimator undefined for non-positive sample mean of x");
  }
  if (!(Xbar > 0.0)) {
    throw std::invalid_argument("ratio estimator undefined for non-positive population mean of x");
  }
  return (ybar - A) * (Xbar / xbar) + A;
}

// All three estimators from a drawn index set.  Xbar is recomputed from the
// full population each call; cache it upstream if that matters.
inline EstimateSet compute_estimates(const Population& pop,
                                     std::span<const std::uint32_t> sample,
                                     double A) {
  if (sample.empty()) throw std::invalid_argument("compute_estimates: empty sample");
  KahanSum sx, sy;
  for (std::uint32_t i : sample) {
    sx.add(pop.x[i]);
    sy.add(pop.y[i]);
  }
  const double m = static_cast<double>(sample.size());
  const double xbar = sx.value() / m;
  const double ybar = sy.value() / m;
  const double Xbar = sample_mean(pop.x);
  EstimateSet out;
  out.mean_est = ybar;
  out.ratio_est = ratio_estimate(ybar, xbar, Xbar);
  out.alt_est = alternative_estimate(ybar, xbar, Xbar, A);
  out.a_value = A;
  return out;
}

}  // namespace ratioest
