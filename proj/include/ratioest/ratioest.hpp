#pragma once

// Umbrella header for the whole library.

#include "ratioest/params.hpp"       // parameter/data types + validation
#include "ratioest/summation.hpp"    // compensated and pairwise sums
#include "ratioest/rng.hpp"          // deterministic variate generation
#include "ratioest/estimators.hpp"   // mean / ratio / shifted-ratio estimators
#include "ratioest/design_moments.hpp"  // SRSWOR expectations, exact + sampled
#include "ratioest/superpop.hpp"     // model simulator + MC expectations
#include "ratioest/closed_form.hpp"  // analytic model expectations
#include "ratioest/table.hpp"        // grid generation, CSV I/O, verification
#include "ratioest/repro.hpp"        // reproduction command listings
