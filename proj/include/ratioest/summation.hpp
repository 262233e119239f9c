#pragma once

// Compensated and pairwise summation.
//
// Exhaustive design enumeration adds up to 1e7 terms of similar magnitude;
// naive accumulation loses ~7 of the 16 digits there, and the table
// verification needs at least 6 significant digits downstream.  Monte Carlo
// reductions use fixed-order pairwise sums so the result is independent of
// how replicates were scheduled across threads.

#include <cmath>
#include <cstddef>
#include <span>

namespace ratioest {

// Kahan-Neumaier running sum: tracks a correction term for the low-order
// bits lost in each add.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Sum in a fixed binary-tree order over the index range.  The result depends
// only on the contents of `v`, never on thread scheduling, which is what the
// bitwise-determinism contract of the Monte Carlo driver relies on.
inline double pairwise_sum(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_mean(std::span<const double> v) {
  return pairwise_sum(v) / static_cast<double>(v.size());
}

}  // namespace ratioest
