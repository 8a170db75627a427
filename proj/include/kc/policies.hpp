#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kc/core.hpp"
#include "kc/phi.hpp"
#include "kc/policy.hpp"

namespace kc {

/// One entry of the SKC candidate set; virtual entries carry a mix.
struct SkcCandidate {
  std::size_t item = 0;
  std::size_t choice = 0;
  std::optional<VirtualMix> mix;
  Rational w;
  Rational mu;
};

/// Intermediate quantities of an SKC run, for reporting and tests.
struct SkcReport {
  PhiSolution phi;
  std::optional<Rational> alpha;
  Rational threshold;
  Rational w_max;
  bool single_step = false;
  std::vector<SkcCandidate> candidates;
};

/// The LP-guided non-adaptive algorithm on the instance budget, with
/// threshold Phi / (4 (1 + alpha)).
NonAdaptivePolicy build_skc(const MskcInstance& inst, bool derandomize = true, SkcReport* report = nullptr);

/// Same algorithm at budget t with threshold Phi(t) / 4. Derandomization is
/// scored with overflow-collecting semantics at budget t.
NonAdaptivePolicy build_skc_of(const MskcInstance& inst, const Rational& t, bool derandomize = true,
                               SkcReport* report = nullptr);

/// SKC-OF order for budget delta, stopping once realized size exceeds delta.
StoppingTimePolicy build_skc_bound(const MskcInstance& inst, const Rational& delta, bool derandomize = true);

/// Rounded-size DP over items in index order, executed with capacity
/// (1 + eps) * budget. Uses delta = eps * budget / n.
OrderedAdaptivePolicy build_ordered_adaptive(const MskcInstance& inst, const Rational& eps);

enum class StoppingArithmetic { Exact, Float };

/// Backward induction over (step, remaining capacity) for a fixed order;
/// stops exactly where the continuation value is <= 0. Float arithmetic is
/// for long orders whose exact values outgrow the rational cap.
StoppingTimePolicy optimal_stopping_rule(const MskcInstance& inst, const NonAdaptivePolicy& order,
                                         StoppingArithmetic arithmetic = StoppingArithmetic::Exact,
                                         std::size_t state_cap = 1'000'000);

/// V(0, budget) of the table built by optimal_stopping_rule.
Rational stopping_value(const StoppingTimePolicy& policy, const MskcInstance& inst);

/// Walks the job types of gen_fully_vs_stop in order: keeps taking jobs of
/// the current type while sizes come out 0, moves to the next type on a
/// small size, stops on a large one or after the last type.
AdaptivePolicy build_type_walk_policy(const Rational& eps, const Rational& gamma, std::size_t copies);

/// Orders items as given with their (single) chosen choice.
NonAdaptivePolicy order_of(const std::vector<std::pair<std::size_t, std::size_t>>& steps);

}  // namespace kc
