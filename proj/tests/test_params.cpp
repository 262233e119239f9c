// ============================================================================
// Parameter types and validation
//
// Admissible ranges: theta > 2, 0 <= g <= 2, delta >= 0, 1 <= n < N,
// population x strictly positive, x/y equal length >= 2.
// ============================================================================

#include <catch2/catch_amalgamated.hpp>

#include <limits>
#include <stdexcept>

#include "ratioest/params.hpp"

using Catch::Matchers::ContainsSubstring;
using ratioest::DesignParams;
using ratioest::Population;
using ratioest::SuperPopulationParams;
using ratioest::validate;
using ratioest::validate_params;

namespace {

SuperPopulationParams good_sp() { return {1.0, 1.0, 2.0, 1.0, 8.0}; }

}  // namespace

TEST_CASE("superpopulation parameter validation", "[params]") {
  SECTION("the reference configuration is admissible") {
    REQUIRE_NOTHROW(validate(good_sp()));
  }
  SECTION("boundary values of g are admissible") {
    auto sp = good_sp();
    sp.g = 0.0;
    REQUIRE_NOTHROW(validate(sp));
    sp.g = 2.0;
    REQUIRE_NOTHROW(validate(sp));
  }
  SECTION("delta = 0 (no model error) is admissible") {
    auto sp = good_sp();
    sp.delta = 0.0;
    REQUIRE_NOTHROW(validate(sp));
  }
  SECTION("theta at or below 2 is rejected") {
    auto sp = good_sp();
    sp.theta = 2.0;
    REQUIRE_THROWS_AS(validate(sp), std::invalid_argument);
    sp.theta = -1.0;
    REQUIRE_THROWS_WITH(validate(sp), ContainsSubstring("theta"));
  }
  SECTION("g outside [0, 2] is rejected") {
    auto sp = good_sp();
    sp.g = -0.1;
    REQUIRE_THROWS_AS(validate(sp), std::invalid_argument);
    sp.g = 2.1;
    REQUIRE_THROWS_WITH(validate(sp), ContainsSubstring("g must lie in [0, 2]"));
  }
  SECTION("negative or non-finite delta is rejected") {
    auto sp = good_sp();
    sp.delta = -1e-9;
    REQUIRE_THROWS_AS(validate(sp), std::invalid_argument);
    sp.delta = std::numeric_limits<double>::infinity();
    REQUIRE_THROWS_AS(validate(sp), std::invalid_argument);
  }
  SECTION("non-finite alpha, beta or theta are rejected") {
    auto sp = good_sp();
    sp.alpha = std::numeric_limits<double>::quiet_NaN();
    REQUIRE_THROWS_AS(validate(sp), std::invalid_argument);
    sp = good_sp();
    sp.beta = std::numeric_limits<double>::infinity();
    REQUIRE_THROWS_AS(validate(sp), std::invalid_argument);
    sp = good_sp();
    sp.theta = std::numeric_limits<double>::infinity();
    REQUIRE_THROWS_AS(validate(sp), std::invalid_argument);
  }
}

TEST_CASE("design parameter validation", "[params]") {
  REQUIRE_NOTHROW(validate(DesignParams{60, 10}));
  REQUIRE_NOTHROW(validate(DesignParams{2, 1}));

  SECTION("n must be at least 1") {
    REQUIRE_THROWS_AS(validate(DesignParams{60, 0}), std::invalid_argument);
    REQUIRE_THROWS_AS(validate(DesignParams{60, -3}), std::invalid_argument);
  }
  SECTION("n must leave at least one unit unsampled") {
    REQUIRE_THROWS_AS(validate(DesignParams{60, 60}), std::invalid_argument);
    REQUIRE_THROWS_WITH(validate(DesignParams{10, 12}),
                        ContainsSubstring("1 <= n < N"));
  }
}

TEST_CASE("population validation", "[params]") {
  SECTION("accepts positive x and finite y") {
    REQUIRE_NOTHROW(validate(Population{{1.0, 2.0}, {0.0, -5.0}}));
  }
  SECTION("length mismatch or too-short vectors are rejected") {
    REQUIRE_THROWS_AS(validate(Population{{1.0, 2.0}, {1.0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(validate(Population{{1.0}, {1.0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(validate(Population{{}, {}}), std::invalid_argument);
  }
  SECTION("non-positive or non-finite x is rejected") {
    REQUIRE_THROWS_WITH(validate(Population{{1.0, 0.0}, {1.0, 1.0}}),
                        ContainsSubstring("positive"));
    REQUIRE_THROWS_AS(validate(Population{{1.0, -2.0}, {1.0, 1.0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(
        validate(Population{{1.0, std::numeric_limits<double>::infinity()}, {1.0, 1.0}}),
        std::invalid_argument);
  }
  SECTION("non-finite y is rejected") {
    REQUIRE_THROWS_AS(
        validate(Population{{1.0, 2.0}, {1.0, std::numeric_limits<double>::quiet_NaN()}}),
        std::invalid_argument);
  }
  SECTION("size() reports the unit count") {
    REQUIRE(Population{{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}}.size() == 3);
  }
}

TEST_CASE("joint validation for the closed forms", "[params]") {
  SECTION("returns the validated pair unchanged") {
    const auto [sp, dp] = validate_params(good_sp(), DesignParams{60, 10});
    REQUIRE(sp == good_sp());
    REQUIRE(dp == DesignParams{60, 10});
  }
  SECTION("rejects a bad member of either argument") {
    auto sp = good_sp();
    sp.theta = 1.0;
    REQUIRE_THROWS_AS(validate_params(sp, DesignParams{60, 10}), std::invalid_argument);
    REQUIRE_THROWS_AS(validate_params(good_sp(), DesignParams{60, 0}), std::invalid_argument);
  }
}
