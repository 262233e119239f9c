#pragma once

// Analytic model expectations of the design bias/MSE of each estimator, the
// dominance interval of the shifted estimator, and the percent relative
// efficiencies that fill the reference tables.
//
// With nt = n*theta, GR = Gamma(theta+g)/Gamma(theta), f = (N-n)/N^2:
//
//   E_m B(ybar_a)   = (N-n)(alpha - A) / (N(nt - 1))
//   E_m M(ybar_a)   = M_min + curv * (A - alpha)^2            (completed square)
//     M_min         = f * delta * { (nt+g-1)(nt+g-2) + nt(N*theta - nt + 1) }
//                       / ((nt+g-1)(nt+g-2)) * GR
//     curv          = f * (N*nt + 2N - 2n) / ((nt-1)(nt-2))
//   E_m M(ybar_r)   = E_m M(ybar_a) at A = 0
//   E_m V(ybar)     = (N-n)(beta^2*theta + delta*GR) / (nN)
//
// The completed-square form is algebraically identical to the textbook
// "M(ybar_r) + correction(A)" arrangement but makes two exact statements
// true in floating point as well: the A = 0 case IS the ratio-estimator MSE
// (same code path), and the minimum at A = alpha IS M_min (the quadratic
// term is exactly zero there).  Efficiencies:
//
//   E1 = 100 * E_m V(ybar)   / E_m M(ybar_a)
//   E2 = 100 * E_m M(ybar_r) / E_m M(ybar_a)
//
// E2 deliberately uses the MSE (not the variance) of the ratio estimator in
// the numerator; see docs/errata.md for the reconciliation notes behind
// that choice and the bias-expectation denominator.

#include <cmath>
#include <stdexcept>

#include "ratioest/params.hpp"

namespace ratioest {

struct ClosedFormInputs {
  SuperPopulationParams sp;
  DesignParams dp;
  double a = 0.0;  // the shift A

  bool operator==(const ClosedFormInputs&) const = default;
};

inline void validate(const ClosedFormInputs& in) {
  validate_params(in.sp, in.dp);
  if (!std::isfinite(in.a)) throw std::invalid_argument("A must be finite");
}

// Gamma(theta + g) / Gamma(theta) via the log-gamma difference; stable for
// every admissible (theta, g) and exact to ~1 ulp of the ratio.
inline double gamma_ratio(double theta, double g) {
  return std::exp(std::lgamma(theta + g) - std::lgamma(theta));
}

inline double em_bias_alt(const ClosedFormInputs& in) {
  validate(in);
  const double N = static_cast<double>(in.dp.N);
  const double n = static_cast<double>(in.dp.n);
  return (N - n) * (in.sp.alpha - in.a) / (N * (n * in.sp.theta - 1.0));
}

// Bias of the plain ratio estimator = shifted form at A = 0.
inline double em_bias_ratio(const ClosedFormInputs& in) {
  ClosedFormInputs at_zero = in;
  at_zero.a = 0.0;
  return em_bias_alt(at_zero);
}

// Minimum of E_m M(ybar_a) over A, attained at A = alpha.
inline double em_mse_alt_min(const ClosedFormInputs& in) {
  validate(in);
  const double N = static_cast<double>(in.dp.N);
  const double n = static_cast<double>(in.dp.n);
  const double nt = n * in.sp.theta;
  const double g = in.sp.g;
  const double braces = (nt + g - 1.0) * (nt + g - 2.0) + nt * (N * in.sp.theta - nt + 1.0);
  return (N - n) / (N * N) * in.sp.delta * braces / ((nt + g - 1.0) * (nt + g - 2.0)) *
         gamma_ratio(in.sp.theta, g);
}

namespace detail {

// Coefficient of (A - alpha)^2 in E_m M(ybar_a).
inline double mse_curvature(const DesignParams& dp, double theta) {
  const double N = static_cast<double>(dp.N);
  const double n = static_cast<double>(dp.n);
  const double nt = n * theta;
  return (N - n) / (N * N) * (N * nt + 2.0 * N - 2.0 * n) / ((nt - 1.0) * (nt - 2.0));
}

}  // namespace detail

inline double em_mse_alt(const ClosedFormInputs& in) {
  const double d = in.a - in.sp.alpha;
  return em_mse_alt_min(in) + detail::mse_curvature(in.dp, in.sp.theta) * (d * d);
}

inline double em_mse_ratio(const ClosedFormInputs& in) {
  ClosedFormInputs at_zero = in;
  at_zero.a = 0.0;
  return em_mse_alt(at_zero);
}

// The closed-form value of em_mse_ratio - em_mse_alt_min; strictly positive
// whenever alpha != 0, which is the efficiency-gain guarantee the dominance
// property rests on.
inline double em_efficiency_gap(const ClosedFormInputs& in) {
  validate(in);
  return detail::mse_curvature(in.dp, in.sp.theta) * (in.sp.alpha * in.sp.alpha);
}

inline double em_var_mean(const ClosedFormInputs& in) {
  validate(in);
  const double N = static_cast<double>(in.dp.N);
  const double n = static_cast<double>(in.dp.n);
  return (N - n) *
         (in.sp.beta * in.sp.beta * in.sp.theta +
          in.sp.delta * gamma_ratio(in.sp.theta, in.sp.g)) /
         (n * N);
}

struct Efficiencies {
  double e1 = 0.0;  // 100 * E_m V(ybar)  / E_m M(ybar_a)
  double e2 = 0.0;  // 100 * E_m M(ybar_r) / E_m M(ybar_a)

  bool operator==(const Efficiencies&) const = default;
};

inline Efficiencies rel_efficiencies(const ClosedFormInputs& in) {
  const double ma = em_mse_alt(in);
  if (!(ma > 0.0)) {
    throw std::invalid_argument("relative efficiencies undefined: E_m M(ybar_a) is zero");
  }
  return {100.0 * em_var_mean(in) / ma, 100.0 * em_mse_ratio(in) / ma};
}

// Open interval of shifts for which the shifted estimator is strictly less
// biased AND strictly more efficient than the plain ratio estimator:
// (0, 2*alpha) for alpha > 0, empty otherwise (at alpha = 0 the ratio
// estimator is already model-unbiased and nothing can beat it this way).
struct DominanceInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool is_empty = true;

  bool contains(double A) const { return !is_empty && lower < A && A < upper; }

  bool operator==(const DominanceInterval&) const = default;
};

inline DominanceInterval dominance_interval(double alpha) {
  if (alpha > 0.0) return {0.0, 2.0 * alpha, false};
  return {0.0, 0.0, true};
}

}  // namespace ratioest
