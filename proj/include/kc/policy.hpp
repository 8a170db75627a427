#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "kc/core.hpp"

namespace kc {

/// Random split of a virtual item between two real choices.
struct VirtualMix {
  std::size_t first = 0;
  std::size_t second = 0;
  Rational first_weight;
  Rational second_weight;
  /// When false the step executes `NonAdaptiveStep::choice` (the derandomized
  /// pick); when true it draws between the two choices.
  bool randomized = false;
};

struct NonAdaptiveStep {
  std::size_t item = 0;
  std::size_t choice = 0;
  std::optional<VirtualMix> mix;
};

struct NonAdaptivePolicy {
  std::vector<NonAdaptiveStep> steps;
};

/// Stop once the cumulative realized size exceeds theta.
struct BudgetThreshold {
  Rational theta;
};

/// Continuation values V(step, remaining capacity); the run stops at a state
/// whose value is <= 0 or which is absent from the table.
struct ValueTable {
  /// Per step, (remaining capacity, value) sorted by capacity.
  std::vector<std::vector<std::pair<Rational, Rational>>> values;

  [[nodiscard]] std::optional<Rational> lookup(std::size_t step, const Rational& remaining) const;
};

using StopRule = std::variant<std::monostate, BudgetThreshold, ValueTable>;

struct StoppingTimePolicy {
  NonAdaptivePolicy order;
  StopRule rule;
};

/// Observable history handed to adaptive decision rules.
struct History {
  std::size_t steps = 0;
  Rational used;
  std::int64_t rounded_units = 0;
  std::uint64_t attempted = 0;
};

struct Action {
  std::size_t item = 0;
  std::size_t choice = 0;
};

/// Adaptive policy keyed by (attempted items, remaining capacity), or a
/// decision function of the history. A missing table entry means stop.
struct AdaptivePolicy {
  struct Key {
    std::uint64_t attempted = 0;
    Rational remaining;
    friend bool operator==(const Key&, const Key&) = default;
    friend auto operator<=>(const Key& a, const Key& b) {
      if (a.attempted != b.attempted) return a.attempted <=> b.attempted;
      return a.remaining <=> b.remaining;
    }
  };
  std::map<Key, std::optional<Action>> table;
  std::function<std::optional<Action>(const History&)> rule;
};

/// Rounded-size DP of the ordered adaptive algorithm.
struct OrderedDpTable {
  Rational delta;
  std::int64_t units = 0;  // K = floor(budget / delta)
  /// d[i][k] for i in [0, n], k in [0, K]; d[n][k] = 0.
  std::vector<std::vector<Rational>> d;
  /// Chosen choice at (i, k); kNullChoice means skip.
  std::vector<std::vector<std::size_t>> best;
  /// Inner-loop terms evaluated while filling the table.
  std::uint64_t work = 0;
};

/// Walks items in index order, acting on rounded remaining capacity, and runs
/// against an enlarged capacity.
struct OrderedAdaptivePolicy {
  OrderedDpTable table;
  Rational capacity;
};

using Policy = std::variant<NonAdaptivePolicy, StoppingTimePolicy, AdaptivePolicy, OrderedAdaptivePolicy>;

/// What a policy does next: stop, or attempt an item with a choice mix.
struct Decision {
  bool stop = true;
  /// Set with `stop` when the policy simply ran out of steps or items.
  bool exhausted = false;
  std::size_t item = 0;
  std::vector<std::pair<std::size_t, Rational>> mix;
};

/// Capacity the policy executes against (its own for ordered policies).
Rational execution_budget(const Policy& policy, const MskcInstance& inst);
/// Size unit for rounded-history tracking, if the policy uses one.
std::optional<Rational> rounding_unit(const Policy& policy);
Decision decide(const Policy& policy, const MskcInstance& inst, const History& h);
/// Throws InvalidPolicy if the policy names missing items or choices.
void validate_policy(const Policy& policy, const MskcInstance& inst);

}  // namespace kc
