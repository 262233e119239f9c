// ============================================================================
// Analytic model expectations and relative efficiencies
//
// Values are pinned against an independently-written reference
// implementation (constants frozen below at full double precision), and the
// structural identities are asserted at the strength the design promises.
//
// Tolerance tiers: quantities that are pure arithmetic in the inputs are
// pinned at 1e-15 relative; anything that passes through the gamma-function
// ratio exp(lgamma(theta+g) - lgamma(theta)) with g != 0 is pinned at 1e-13,
// because lgamma implementations legitimately differ in the last ulp and an
// absolute error of ~2e-15 in the exponent becomes ~4e-15 relative after exp.
// The identities:
//   * A = alpha attains the minimum MSE *bitwise* (completed-square form),
//   * A = 0 reproduces the plain ratio estimator *bitwise*,
//   * the MSE gap identity and the A -> 2*alpha - A symmetry hold to 1e-12,
//   * efficiencies decrease strictly in g, E2 does not depend on beta.
// ============================================================================

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratioest/closed_form.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using ratioest::ClosedFormInputs;
using ratioest::DesignParams;
using ratioest::dominance_interval;
using ratioest::em_bias_alt;
using ratioest::em_bias_ratio;
using ratioest::em_efficiency_gap;
using ratioest::em_mse_alt;
using ratioest::em_mse_alt_min;
using ratioest::em_mse_ratio;
using ratioest::em_var_mean;
using ratioest::gamma_ratio;
using ratioest::rel_efficiencies;
using ratioest::SuperPopulationParams;

namespace {

// The reference configuration: N = 60, n = 10, theta = 8, delta = 2.
ClosedFormInputs make(double alpha, double beta, double g, std::int64_t n, double A) {
  ClosedFormInputs in;
  in.sp = SuperPopulationParams{alpha, beta, 2.0, g, 8.0};
  in.dp = DesignParams{60, n};
  in.a = A;
  return in;
}

}  // namespace

TEST_CASE("gamma-function ratio", "[closed]") {
  // Gamma(8.5)/Gamma(8), frozen from the reference implementation.
  REQUIRE_THAT(gamma_ratio(8.0, 0.5), WithinRel(2.784604621722901, 1e-13));
  // Integer offsets have exact values: Gamma(t+1)/Gamma(t) = t.
  REQUIRE(gamma_ratio(8.0, 0.0) == 1.0);
  REQUIRE_THAT(gamma_ratio(8.0, 1.0), WithinRel(8.0, 1e-14));
  REQUIRE_THAT(gamma_ratio(8.0, 2.0), WithinRel(72.0, 1e-14));
  REQUIRE_THAT(gamma_ratio(2.5, 2.0), WithinRel(8.75, 1e-14));
}

TEST_CASE("model expectations at the reference configuration", "[closed]") {
  // All constants below frozen from the independent reference implementation
  // at (N, n, theta, delta) = (60, 10, 8, 2).
  SECTION("bias of the plain ratio estimator, alpha = 1") {
    REQUIRE_THAT(em_bias_ratio(make(1.0, 1.0, 1.0, 10, 0.0)),
                 WithinRel(0.010548523206751054, 1e-15));
  }
  SECTION("the g = 0 family, alpha = 0.5") {
    REQUIRE_THAT(em_mse_ratio(make(0.5, 1.0, 0.0, 10, 0.0)),
                 WithinRel(0.17515281834902088, 1e-15));
    REQUIRE_THAT(em_mse_alt(make(0.5, 1.0, 0.0, 10, 0.3)),
                 WithinRel(0.17283349561830574, 1e-15));
    REQUIRE_THAT(em_var_mean(make(0.5, 0.5, 0.0, 10, 0.0)),
                 WithinRel(0.33333333333333331, 1e-15));
  }
  SECTION("the documented cross-check point: alpha = beta = g = 1, A = 0.5") {
    const auto in = make(1.0, 1.0, 1.0, 10, 0.5);
    // The bias involves no gamma ratio; the rest carry lgamma noise at g = 1.
    REQUIRE_THAT(em_bias_alt(in), WithinRel(0.0052742616033755272, 1e-15));
    REQUIRE_THAT(em_mse_alt(in), WithinRel(1.3529720689530793, 1e-13));
    REQUIRE_THAT(em_mse_ratio(in), WithinRel(1.361255364419919, 1e-13));
    REQUIRE_THAT(em_var_mean(in), WithinRel(1.999999999999998, 1e-13));
    REQUIRE_THAT(em_mse_alt_min(in), WithinRel(1.3502109704641327, 1e-13));
  }
}

TEST_CASE("relative efficiencies at frozen table cells", "[closed]") {
  SECTION("alpha 0.5, n 10, g 0, beta 0.5, A 0.3") {
    const auto e = rel_efficiencies(make(0.5, 0.5, 0.0, 10, 0.3));
    REQUIRE_THAT(e.e1, WithinRel(192.86384976525818, 1e-15));
    REQUIRE_THAT(e.e2, WithinRel(101.34194053208137, 1e-15));
  }
  SECTION("alpha 1, n 10, g 0, beta 1, A 1") {
    const auto e = rel_efficiencies(make(1.0, 1.0, 0.0, 10, 1.0));
    REQUIRE_THAT(e.e1, WithinRel(483.39521991527647, 1e-15));
    REQUIRE_THAT(e.e2, WithinRel(106.40656869410596, 1e-15));
  }
  SECTION("alpha 1.5, n 20, g 2, beta 1.5, A 2.9") {
    // g != 0: the gamma-ratio noise leaks into the quotient, so 1e-13.
    const auto e = rel_efficiencies(make(1.5, 1.5, 2.0, 20, 2.9));
    REQUIRE_THAT(e.e1, WithinRel(112.53625736986945, 1e-13));
    REQUIRE_THAT(e.e2, WithinRel(100.02587470114472, 1e-13));
  }
}

TEST_CASE("A = alpha attains the minimum MSE bitwise", "[closed]") {
  for (double alpha : {0.25, 0.5, 1.0, 1.3, 1.5, 3.0}) {
    for (double g : {0.0, 0.5, 1.0, 2.0}) {
      for (std::int64_t n : {std::int64_t{10}, std::int64_t{20}}) {
        const auto at_alpha = make(alpha, 1.0, g, n, alpha);
        INFO("alpha=" << alpha << " g=" << g << " n=" << n);
        REQUIRE(em_mse_alt(at_alpha) == em_mse_alt_min(at_alpha));
        // ...and the bias vanishes exactly there too.
        REQUIRE(em_bias_alt(at_alpha) == 0.0);
      }
    }
  }
}

TEST_CASE("A = 0 reproduces the plain ratio estimator bitwise", "[closed]") {
  for (double alpha : {0.5, 1.0, 1.5}) {
    const auto at_zero = make(alpha, 1.0, 1.0, 10, 0.0);
    const auto elsewhere = make(alpha, 1.0, 1.0, 10, 0.7);
    REQUIRE(em_mse_alt(at_zero) == em_mse_ratio(elsewhere));
    REQUIRE(em_bias_alt(at_zero) == em_bias_ratio(elsewhere));
  }
}

TEST_CASE("MSE gap identity and shift symmetry", "[closed]") {
  for (double alpha : {0.5, 1.0, 1.5}) {
    for (double g : {0.0, 1.0, 2.0}) {
      const auto in = make(alpha, 1.0, g, 10, 0.0);
      const double gap = em_efficiency_gap(in);
      SECTION("gap = MSE(ratio) - MSE(min), alpha=" + std::to_string(alpha) +
              " g=" + std::to_string(g)) {
        REQUIRE(gap > 0.0);
        REQUIRE_THAT(em_mse_ratio(in) - em_mse_alt_min(in), WithinRel(gap, 1e-12));
      }
      SECTION("MSE is symmetric about alpha, alpha=" + std::to_string(alpha) +
              " g=" + std::to_string(g)) {
        for (double off : {0.1, 0.45, 0.8}) {
          const double A = alpha * off;
          const double mirrored = 2.0 * alpha - A;
          REQUIRE_THAT(em_mse_alt(make(alpha, 1.0, g, 10, A)),
                       WithinRel(em_mse_alt(make(alpha, 1.0, g, 10, mirrored)), 1e-12));
        }
      }
    }
  }
}

TEST_CASE("the minimum over A really is at alpha (coarse scan)", "[closed]") {
  const double alpha = 1.0;
  const auto at_min = make(alpha, 1.0, 1.0, 10, alpha);
  const double floor = em_mse_alt(at_min);
  for (int k = 0; k <= 100; ++k) {
    const double A = -alpha + 4.0 * alpha * k / 100.0;  // spans [-1, 3]
    const double m = em_mse_alt(make(alpha, 1.0, 1.0, 10, A));
    REQUIRE(m >= floor);
  }
}

TEST_CASE("dominance interval of the shifted estimator", "[closed]") {
  SECTION("positive intercept: the open interval (0, 2*alpha)") {
    const auto d = dominance_interval(1.5);
    REQUIRE_FALSE(d.is_empty);
    REQUIRE(d.lower == 0.0);
    REQUIRE(d.upper == 3.0);
    REQUIRE(d.contains(1.5));
    REQUIRE(d.contains(0.001));
    REQUIRE_FALSE(d.contains(0.0));   // endpoints excluded
    REQUIRE_FALSE(d.contains(3.0));
    REQUIRE_FALSE(d.contains(-0.2));
  }
  SECTION("zero or negative intercept: empty") {
    REQUIRE(dominance_interval(0.0).is_empty);
    REQUIRE(dominance_interval(-1.0).is_empty);
    REQUIRE_FALSE(dominance_interval(0.0).contains(0.5));
  }
  SECTION("strict dominance inside, failure outside") {
    const double alpha = 1.0;
    const auto ref = make(alpha, 1.0, 1.0, 10, 0.0);
    for (double frac : {0.5, 1.0, 1.5}) {  // inside (0, 2)
      const auto in = make(alpha, 1.0, 1.0, 10, alpha * frac);
      REQUIRE(em_mse_alt(in) < em_mse_ratio(ref));
      REQUIRE(std::abs(em_bias_alt(in)) < std::abs(em_bias_ratio(ref)));
    }
    for (double frac : {-0.5, 2.5}) {  // outside
      const auto in = make(alpha, 1.0, 1.0, 10, alpha * frac);
      REQUIRE(em_mse_alt(in) > em_mse_ratio(ref));
    }
  }
}

TEST_CASE("efficiencies decrease strictly in g", "[closed]") {
  const std::vector<double> gs{0.0, 0.5, 1.0, 1.5, 2.0};
  for (double alpha : {0.5, 1.0, 1.5}) {
    for (double beta : {0.5, 1.5}) {
      for (std::int64_t n : {std::int64_t{10}, std::int64_t{20}}) {
        const double A = 0.6 * alpha;
        double prev_e1 = 1e300, prev_e2 = 1e300;
        for (double g : gs) {
          const auto e = rel_efficiencies(make(alpha, beta, g, n, A));
          INFO("alpha=" << alpha << " beta=" << beta << " n=" << n << " g=" << g);
          REQUIRE(e.e1 < prev_e1);
          REQUIRE(e.e2 < prev_e2);
          prev_e1 = e.e1;
          prev_e2 = e.e2;
        }
      }
    }
  }
}

TEST_CASE("E2 is independent of beta, E1 increases with it", "[closed]") {
  const auto lo = rel_efficiencies(make(1.0, 0.5, 1.0, 10, 0.5));
  const auto mid = rel_efficiencies(make(1.0, 1.0, 1.0, 10, 0.5));
  const auto hi = rel_efficiencies(make(1.0, 1.5, 1.0, 10, 0.5));
  REQUIRE(lo.e2 == mid.e2);  // beta enters neither MSE
  REQUIRE(mid.e2 == hi.e2);
  REQUIRE(lo.e1 < mid.e1);
  REQUIRE(mid.e1 < hi.e1);
}

TEST_CASE("degenerate and invalid closed-form inputs", "[closed]") {
  SECTION("zero MSE (delta = 0 at the minimising shift) is rejected") {
    auto in = make(1.0, 1.0, 1.0, 10, 1.0);
    in.sp.delta = 0.0;
    REQUIRE_THROWS_AS(rel_efficiencies(in), std::invalid_argument);
  }
  SECTION("non-finite shift is rejected") {
    auto in = make(1.0, 1.0, 1.0, 10, 0.0);
    in.a = std::numeric_limits<double>::infinity();
    REQUIRE_THROWS_AS(em_mse_alt(in), std::invalid_argument);
  }
  SECTION("parameter validation propagates") {
    auto in = make(1.0, 1.0, 1.0, 10, 0.0);
    in.sp.theta = 1.5;
    REQUIRE_THROWS_AS(em_bias_alt(in), std::invalid_argument);
    REQUIRE_THROWS_AS(em_mse_alt(in), std::invalid_argument);
    REQUIRE_THROWS_AS(em_var_mean(in), std::invalid_argument);
  }
}
