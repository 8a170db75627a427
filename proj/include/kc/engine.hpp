#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "kc/core.hpp"
#include "kc/policy.hpp"

namespace kc {

enum class Termination { Overflow, PolicyStop, Exhausted };

struct TraceStep {
  std::size_t item = 0;
  std::size_t choice = 0;
  Rational size;
  bool completed = false;
};

struct ExecutionTrace {
  std::vector<TraceStep> steps;
  Termination reason = Termination::Exhausted;
  Rational profit;
};

/// Payment for a realized size; replaces the up-front choice cost when set.
using TransferFn = std::function<Rational(std::size_t item, std::size_t choice, const Rational& size)>;

struct EngineOptions {
  /// An overflowing job still pays out its value before the run halts.
  bool overflow_collects = false;
  TransferFn transfer;
  /// Cap on the number of history states visited by the exact evaluator.
  std::size_t state_cap = 1'000'000;
};

/// Counter-based uniform variates keyed by (seed, trial, counter).
double uniform01(std::uint64_t seed, std::uint64_t trial, std::uint64_t counter);

/// One sampled run. Trial `trial` of seed `seed` always draws the same sizes.
ExecutionTrace execute(const Policy& policy, const MskcInstance& inst, std::uint64_t seed, std::uint64_t trial = 0,
                       const EngineOptions& opts = {});

struct ExactEvaluation {
  Rational profit;
  /// Probability that (item, choice) is attempted.
  std::vector<std::vector<Rational>> attempt_prob;
  /// Probability that the run ends by overflow.
  Rational overflow_prob;
  std::size_t states = 0;
};

/// Exact expectation by forward convolution over reachable histories.
ExactEvaluation evaluate_exact(const Policy& policy, const MskcInstance& inst, const EngineOptions& opts = {});
Rational expected_profit_exact(const Policy& policy, const MskcInstance& inst, const EngineOptions& opts = {});

/// E[mu(S)] at capacity t for the attempted set S, from an exact evaluation.
Rational expected_truncated_size(const ExactEvaluation& eval, const MskcInstance& inst, const Rational& t);

struct ProfitEstimate {
  double mean = 0;
  double half_width_95 = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Worker count from KC_WORKERS, else the hardware concurrency.
unsigned default_workers();

/// Mean of `trials` independent runs. Results do not depend on `workers`.
ProfitEstimate estimate_profit_mc(const Policy& policy, const MskcInstance& inst, std::uint64_t trials,
                                  std::uint64_t seed, const EngineOptions& opts = {}, unsigned workers = 0);

}  // namespace kc
