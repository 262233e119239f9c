#pragma once

// Superpopulation simulator and the Monte Carlo model-expectation engine.
//
// A replicate draws one finite population from
//
//     x_i ~ iid Gamma(theta, 1),   y_i = alpha + beta*x_i + u_i,
//     E(u|x) = 0,  E(u^2|x) = delta * x^g,
//
// then estimates the design expectation of a chosen quantity on it (exact
// enumeration or a fixed number of SRSWOR draws), and the engine averages
// across replicates.  That average is the independent oracle every analytic
// model expectation is tested against.
//
// Determinism contract: the result of mc_model_expectation(s) is a pure
// function of (params, quantities, cfg) -- independent of thread count.
// Each replicate derives its own RNG stream from (cfg.seed, replicate
// index), values land in a preallocated slot per replicate, and the final
// reduction is a fixed-order pairwise tree.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ratioest/design_moments.hpp"
#include "ratioest/estimators.hpp"
#include "ratioest/params.hpp"
#include "ratioest/rng.hpp"
#include "ratioest/summation.hpp"

namespace ratioest {

// Conditional error laws with mean 0 and variance delta * x^g.  The analytic
// expectations depend on u only through those two moments, so estimates must
// agree across laws; shipping two laws makes that claim itself testable.
enum class ErrorLaw { normal, shifted_exponential };

struct McConfig {
  std::int64_t n_populations = 1000;
  std::int64_t designs_per_population = 50;  // 0 = exhaustive enumeration
  std::uint64_t seed = 1;
  ErrorLaw error_law = ErrorLaw::normal;

  bool operator==(const McConfig&) const = default;
};

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n_replicates = 0;

  bool operator==(const McEstimate&) const = default;
};

enum class QuantityKind { bias_ratio, mse_ratio, bias_alt, mse_alt, var_mean };

struct QuantitySpec {
  QuantityKind kind = QuantityKind::var_mean;
  double a = 0.0;  // shift, used by bias_alt / mse_alt only

  static QuantitySpec bias_ratio() { return {QuantityKind::bias_ratio, 0.0}; }
  static QuantitySpec mse_ratio() { return {QuantityKind::mse_ratio, 0.0}; }
  static QuantitySpec bias_alt(double A) { return {QuantityKind::bias_alt, A}; }
  static QuantitySpec mse_alt(double A) { return {QuantityKind::mse_alt, A}; }
  static QuantitySpec var_mean() { return {QuantityKind::var_mean, 0.0}; }

  bool operator==(const QuantitySpec&) const = default;
};

inline std::string to_string(const QuantitySpec& q) {
  switch (q.kind) {
    case QuantityKind::bias_ratio: return "bias_ratio";
    case QuantityKind::mse_ratio: return "mse_ratio";
    case QuantityKind::bias_alt: return "bias_alt(A=" + std::to_string(q.a) + ")";
    case QuantityKind::mse_alt: return "mse_alt(A=" + std::to_string(q.a) + ")";
    case QuantityKind::var_mean: return "var_mean";
  }
  return "?";
}

inline EstimatorSpec estimator_for(const QuantitySpec& q) {
  switch (q.kind) {
    case QuantityKind::bias_ratio:
    case QuantityKind::mse_ratio:
      return EstimatorSpec::ratio();
    case QuantityKind::bias_alt:
    case QuantityKind::mse_alt:
      return EstimatorSpec::alternative(q.a);
    case QuantityKind::var_mean:
      return EstimatorSpec::mean();
  }
  throw std::logic_error("unreachable quantity kind");
}

inline bool is_mse_like(const QuantitySpec& q) {
  return q.kind == QuantityKind::mse_ratio || q.kind == QuantityKind::mse_alt ||
         q.kind == QuantityKind::var_mean;  // var_mean = E_p(ybar - Ybar)^2
}

namespace detail {

// Fill pop with one model draw, consuming from rng.  All x first, then all
// u given x: the x vector for a given stream is then identical across error
// laws, which sharpens the law-independence comparison.
inline void draw_population_into(Rng& rng, const SuperPopulationParams& sp,
                                 std::int64_t N, ErrorLaw law, Population& pop) {
  const std::size_t uN = static_cast<std::size_t>(N);
  pop.x.resize(uN);
  pop.y.resize(uN);
  for (std::size_t i = 0; i < uN; ++i) {
    pop.x[i] = rng.gamma(sp.theta);
  }
  for (std::size_t i = 0; i < uN; ++i) {
    const double sd = std::sqrt(sp.delta * std::pow(pop.x[i], sp.g));
    double u = 0.0;
    switch (law) {
      case ErrorLaw::normal:
        u = sd * rng.normal();
        break;
      case ErrorLaw::shifted_exponential:
        // Exp(1) - 1 has mean 0, variance 1.
        u = sd * (rng.exponential() - 1.0);
        break;
    }
    pop.y[i] = sp.alpha + sp.beta * pop.x[i] + u;
  }
}

}  // namespace detail

inline Population draw_population(const SuperPopulationParams& sp, std::int64_t N,
                                  std::uint64_t seed,
                                  ErrorLaw law = ErrorLaw::normal) {
  validate(sp);
  if (N < 2) throw std::invalid_argument("population size N must be >= 2");
  Rng rng(seed);
  Population pop;
  detail::draw_population_into(rng, sp, N, law, pop);
  return pop;
}

// Monte Carlo model expectations for a batch of quantities from ONE stream
// of simulated populations (all quantities see the same draws).
//
// per_replicate, when non-null, receives the per-replicate design
// expectations (one vector per quantity, indexed by replicate).
inline std::vector<McEstimate> mc_model_expectations(
    const SuperPopulationParams& sp, const DesignParams& dp,
    std::span<const QuantitySpec> quantities, const McConfig& cfg, int threads = 1,
    std::vector<std::vector<double>>* per_replicate = nullptr) {
  validate(sp);
  validate(dp);
  if (cfg.n_populations < 1) throw std::invalid_argument("n_populations must be >= 1");
  if (cfg.designs_per_population < 0) {
    throw std::invalid_argument("designs_per_population must be >= 0");
  }
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (cfg.designs_per_population == 0) {
    // Surface the cap violation here, not from inside a worker thread.
    if (binomial_capped(dp.N, dp.n, kDefaultEnumerationCap) > kDefaultEnumerationCap) {
      throw std::invalid_argument(
          "designs_per_population = 0 requests exhaustive enumeration, but C(N, n) "
          "exceeds the enumeration cap; use a positive designs_per_population");
    }
  }

  const std::size_t Q = quantities.size();
  const std::int64_t J = cfg.n_populations;
  std::vector<std::vector<double>> vals(Q, std::vector<double>(static_cast<std::size_t>(J)));

  auto run_replicate = [&](std::int64_t j, Population& pop,
                           std::vector<std::uint32_t>& perm) {
    Rng rng(derive_stream_seed(cfg.seed, static_cast<std::uint64_t>(j)));
    detail::draw_population_into(rng, sp, dp.N, cfg.error_law, pop);
    const double Xbar = sample_mean(pop.x);
    const double Ybar = sample_mean(pop.y);

    if (cfg.designs_per_population == 0) {
      for (std::size_t q = 0; q < Q; ++q) {
        const DesignExpectation de =
            exact_design_expectation(pop, dp, estimator_for(quantities[q]));
        vals[q][static_cast<std::size_t>(j)] = is_mse_like(quantities[q]) ? de.mse : de.bias;
      }
      return;
    }

    // Reset the permutation so the subsets drawn are a pure function of this
    // replicate's stream, not of which replicates ran earlier in the same
    // thread chunk -- the thread-count-invariance contract depends on it.
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<std::uint32_t>(i);

    const std::int64_t D = cfg.designs_per_population;
    const double nn = static_cast<double>(dp.n);
    std::vector<double> acc(Q, 0.0);
    for (std::int64_t d = 0; d < D; ++d) {
      draw_srswor(rng, perm, static_cast<std::size_t>(dp.n));
      double sx = 0.0, sy = 0.0;
      for (std::int64_t i = 0; i < dp.n; ++i) {
        sx += pop.x[perm[static_cast<std::size_t>(i)]];
        sy += pop.y[perm[static_cast<std::size_t>(i)]];
      }
      const double xbar = sx / nn;
      const double ybar = sy / nn;
      for (std::size_t q = 0; q < Q; ++q) {
        const double e = evaluate_estimator(estimator_for(quantities[q]), ybar, xbar, Xbar);
        const double err = e - Ybar;
        acc[q] += is_mse_like(quantities[q]) ? err * err : err;
      }
    }
    for (std::size_t q = 0; q < Q; ++q) {
      vals[q][static_cast<std::size_t>(j)] = acc[q] / static_cast<double>(D);
    }
  };

  auto run_range = [&](std::int64_t lo, std::int64_t hi) {
    Population pop;
    std::vector<std::uint32_t> perm(static_cast<std::size_t>(dp.N));
    for (std::int64_t j = lo; j < hi; ++j) run_replicate(j, pop, perm);
  };

  if (threads == 1 || J == 1) {
    run_range(0, J);
  } else {
    const int T = static_cast<int>(std::min<std::int64_t>(threads, J));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
      const std::int64_t lo = J * t / T;
      const std::int64_t hi = J * (t + 1) / T;
      pool.emplace_back(run_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  // Fixed-order reduction; identical for every thread count above.
  std::vector<McEstimate> out(Q);
  for (std::size_t q = 0; q < Q; ++q) {
    const double mean = pairwise_mean(vals[q]);
    double se = 0.0;
    if (J > 1) {
      std::vector<double> sq(static_cast<std::size_t>(J));
      for (std::int64_t j = 0; j < J; ++j) {
        const double d = vals[q][static_cast<std::size_t>(j)] - mean;
        sq[static_cast<std::size_t>(j)] = d * d;
      }
      const double var = pairwise_sum(sq) / static_cast<double>(J - 1);
      se = std::sqrt(var / static_cast<double>(J));
    }
    out[q] = McEstimate{mean, se, J};
  }
  if (per_replicate != nullptr) *per_replicate = std::move(vals);
  return out;
}

inline McEstimate mc_model_expectation(const SuperPopulationParams& sp,
                                       const DesignParams& dp, const QuantitySpec& q,
                                       const McConfig& cfg, int threads = 1) {
  const QuantitySpec qs[] = {q};
  return mc_model_expectations(sp, dp, qs, cfg, threads)[0];
}

}  // namespace ratioest
