#include "kc/oracle.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <unordered_map>

#include "kc/errors.hpp"
#include "kc/policies.hpp"

namespace kc {
namespace {

struct MemoKey {
  std::uint64_t attempted;
  Rational remaining;
  friend bool operator==(const MemoKey&, const MemoKey&) = default;
};

struct MemoHash {
  std::size_t operator()(const MemoKey& k) const {
    return k.remaining.hash() ^ (k.attempted * 0x9e3779b97f4a7c15ULL + 0x7f4a7c15ULL);
  }
};

struct MemoEntry {
  Rational value;
  std::optional<Action> action;
};

class AdaptiveSolver {
 public:
  AdaptiveSolver(const MskcInstance& inst, bool of, std::size_t cap) : inst_(inst), of_(of), cap_(cap) {}

  const MemoEntry& solve(std::uint64_t attempted, const Rational& remaining) {
    MemoKey key{attempted, remaining};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (memo_.size() >= cap_) throw StateSpaceTooLarge("adaptive oracle exceeded " + std::to_string(cap_) + " states");

    MemoEntry best{Rational(0), std::nullopt};
    for (std::size_t i = 0; i < inst_.size(); ++i) {
      if (((attempted >> i) & 1U) != 0U) continue;
      const MskcItem& item = inst_.item(i);
      for (std::size_t j = 1; j < item.choice_count(); ++j) {
        Rational v = -item.choice(j).cost;
        for (const Atom& a : item.choice(j).dist.atoms()) {
          if (a.size <= remaining) {
            const Rational rest = solve(attempted | (std::uint64_t{1} << i), remaining - a.size).value;
            v += a.prob * (item.value() + rest);
          } else if (of_) {
            v += a.prob * item.value();
          }
        }
        if (v > best.value) best = MemoEntry{std::move(v), Action{i, j}};
      }
    }
    return memo_.emplace(std::move(key), std::move(best)).first->second;
  }

  // Table over the states the optimal policy can reach.
  AdaptivePolicy extract() {
    AdaptivePolicy policy;
    std::vector<MemoKey> stack{MemoKey{0, inst_.budget()}};
    while (!stack.empty()) {
      MemoKey k = stack.back();
      stack.pop_back();
      AdaptivePolicy::Key pk{k.attempted, k.remaining};
      if (policy.table.count(pk) != 0) continue;
      const MemoEntry& e = solve(k.attempted, k.remaining);
      policy.table.emplace(pk, e.action);
      if (!e.action) continue;
      for (const Atom& a : inst_.item(e.action->item).choice(e.action->choice).dist.atoms()) {
        if (a.size <= k.remaining) stack.push_back(MemoKey{k.attempted | (std::uint64_t{1} << e.action->item), k.remaining - a.size});
      }
    }
    return policy;
  }

  [[nodiscard]] std::size_t states() const { return memo_.size(); }

 private:
  const MskcInstance& inst_;
  bool of_;
  std::size_t cap_;
  std::unordered_map<MemoKey, MemoEntry, MemoHash> memo_;
};

// Best policy that visits items in index order, choosing per item to skip or
// attempt with some choice. Memoized on (next item, remaining capacity).
class OrderedSolver {
 public:
  OrderedSolver(const MskcInstance& inst, std::size_t cap) : inst_(inst), cap_(cap) {}

  const MemoEntry& solve(std::size_t i, const Rational& remaining) {
    MemoKey key{i, remaining};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (memo_.size() >= cap_) throw StateSpaceTooLarge("ordered oracle exceeded " + std::to_string(cap_) + " states");
    MemoEntry best{Rational(0), std::nullopt};
    if (i < inst_.size()) {
      best.value = solve(i + 1, remaining).value;
      const MskcItem& item = inst_.item(i);
      for (std::size_t j = 1; j < item.choice_count(); ++j) {
        Rational v = -item.choice(j).cost;
        for (const Atom& a : item.choice(j).dist.atoms()) {
          if (a.size <= remaining) v += a.prob * (item.value() + solve(i + 1, remaining - a.size).value);
        }
        if (v > best.value) best = MemoEntry{std::move(v), Action{i, j}};
      }
    }
    return memo_.emplace(std::move(key), std::move(best)).first->second;
  }

  // First attempted action along the skip chain starting at item i.
  std::optional<Action> next_action(std::size_t i, const Rational& remaining) {
    for (; i < inst_.size(); ++i) {
      const MemoEntry& e = solve(i, remaining);
      if (e.value.sign() <= 0) return std::nullopt;
      if (e.action) return e.action;
    }
    return std::nullopt;
  }

  AdaptivePolicy extract() {
    AdaptivePolicy policy;
    std::vector<std::pair<std::size_t, MemoKey>> stack{{0, MemoKey{0, inst_.budget()}}};
    while (!stack.empty()) {
      auto [i, k] = stack.back();
      stack.pop_back();
      AdaptivePolicy::Key pk{k.attempted, k.remaining};
      if (policy.table.count(pk) != 0) continue;
      const std::optional<Action> act = next_action(i, k.remaining);
      policy.table.emplace(pk, act);
      if (!act) continue;
      for (const Atom& a : inst_.item(act->item).choice(act->choice).dist.atoms()) {
        if (a.size <= k.remaining) {
          stack.emplace_back(act->item + 1,
                             MemoKey{k.attempted | (std::uint64_t{1} << act->item), k.remaining - a.size});
        }
      }
    }
    return policy;
  }

  [[nodiscard]] std::size_t states() const { return memo_.size(); }

 private:
  const MskcInstance& inst_;
  std::size_t cap_;
  std::unordered_map<MemoKey, MemoEntry, MemoHash> memo_;
};

// Sub-probability distribution of cumulative size over runs still going.
using Mass = std::map<Rational, Rational>;

struct NonAdaptiveSearch {
  const MskcInstance& inst;
  std::size_t cap;
  std::size_t visited = 0;
  Rational best_value{0};
  std::vector<std::pair<std::size_t, std::size_t>> best_sequence;
  std::vector<std::pair<std::size_t, std::size_t>> current;
  std::vector<bool> used;

  void dfs(const Mass& mass, const Rational& value) {
    if (++visited > cap) throw StateSpaceTooLarge("non-adaptive oracle exceeded " + std::to_string(cap) + " sequences");
    if (value > best_value) {
      best_value = value;
      best_sequence = current;
    }
    if (mass.empty()) return;
    for (std::size_t i = 0; i < inst.size(); ++i) {
      if (used[i]) continue;
      const MskcItem& item = inst.item(i);
      for (std::size_t j = 1; j < item.choice_count(); ++j) {
        Rational total(0);
        for (const auto& [u, p] : mass) total += p;
        Rational v = value - total * item.choice(j).cost;
        Mass next;
        for (const auto& [u, p] : mass) {
          for (const Atom& a : item.choice(j).dist.atoms()) {
            Rational s = u + a.size;
            if (s > inst.budget()) continue;
            const Rational q = p * a.prob;
            v += q * item.value();
            next[std::move(s)] += q;
          }
        }
        used[i] = true;
        current.emplace_back(i, j);
        dfs(next, v);
        current.pop_back();
        used[i] = false;
      }
    }
  }
};

}  // namespace

OracleResult adapt_opt(const MskcInstance& inst, bool overflow_collecting, const OracleLimits& limits) {
  if (inst.size() > limits.max_items_adaptive || inst.size() > 63) {
    throw StateSpaceTooLarge("adaptive oracle is capped at " + std::to_string(limits.max_items_adaptive) + " items");
  }
  AdaptiveSolver solver(inst, overflow_collecting, limits.state_cap);
  const Rational value = solver.solve(0, inst.budget()).value;
  AdaptivePolicy policy = solver.extract();
  return OracleResult{value, Policy(std::move(policy)), solver.states()};
}

OracleResult ordered_adapt_opt(const MskcInstance& inst, const OracleLimits& limits) {
  if (inst.size() > 63) throw StateSpaceTooLarge("ordered oracle is capped at 63 items");
  OrderedSolver solver(inst, limits.state_cap);
  const Rational value = solver.solve(0, inst.budget()).value;
  AdaptivePolicy policy = solver.extract();
  return OracleResult{value, Policy(std::move(policy)), solver.states()};
}

OracleResult adapt_of_opt(const MskcInstance& inst, const OracleLimits& limits) { return adapt_opt(inst, true, limits); }

OracleResult nonadapt_opt(const MskcInstance& inst, const OracleLimits& limits) {
  if (inst.size() > limits.max_items_enumerative) {
    throw StateSpaceTooLarge("non-adaptive oracle is capped at " + std::to_string(limits.max_items_enumerative) + " items");
  }
  NonAdaptiveSearch search{inst, limits.state_cap, 0, Rational(0), {}, {}, std::vector<bool>(inst.size(), false)};
  search.dfs(Mass{{Rational(0), Rational(1)}}, Rational(0));
  return OracleResult{search.best_value, Policy(order_of(search.best_sequence)), search.visited};
}

OracleResult stopadapt_opt(const MskcInstance& inst, const OracleLimits& limits) {
  if (inst.size() > limits.max_items_enumerative) {
    throw StateSpaceTooLarge("stopping-time oracle is capped at " + std::to_string(limits.max_items_enumerative) + " items");
  }
  // Appending items never hurts when stopping is free, so full permutations
  // of the items that have a real choice cover every sequence.
  std::vector<std::size_t> perm;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if (inst.item(i).real_choice_count() > 0) perm.push_back(i);
  }
  OracleResult best{Rational(0), Policy(StoppingTimePolicy{}), 0};
  bool have = false;
  std::size_t explored = 0;
  do {
    std::vector<std::size_t> choice(perm.size(), 1);
    while (true) {
      if (++explored > limits.state_cap) throw StateSpaceTooLarge("stopping-time oracle exceeded its candidate cap");
      std::vector<std::pair<std::size_t, std::size_t>> seq;
      for (std::size_t k = 0; k < perm.size(); ++k) seq.emplace_back(perm[k], choice[k]);
      StoppingTimePolicy p = optimal_stopping_rule(inst, order_of(seq));
      const Rational v = stopping_value(p, inst);
      if (!have || v > best.value) {
        best.value = v;
        best.policy = std::move(p);
        have = true;
      }
      // Next choice assignment, odometer style.
      std::size_t k = 0;
      while (k < perm.size() && choice[k] == inst.item(perm[k]).real_choice_count()) choice[k++] = 1;
      if (k == perm.size()) break;
      ++choice[k];
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  best.states_explored = explored;
  return best;
}

std::vector<Rational> sequence_step_profits(const MskcInstance& inst,
                                            const std::vector<std::pair<std::size_t, std::size_t>>& sequence) {
  std::vector<Rational> out;
  Mass mass{{Rational(0), Rational(1)}};
  for (const auto& [i, j] : sequence) {
    const MskcItem& item = inst.item(i);
    Rational total(0);
    for (const auto& [u, p] : mass) total += p;
    Rational v = -(total * item.choice(j).cost);
    Mass next;
    for (const auto& [u, p] : mass) {
      for (const Atom& a : item.choice(j).dist.atoms()) {
        Rational s = u + a.size;
        if (s > inst.budget()) continue;
        const Rational q = p * a.prob;
        if (j != kNullChoice) v += q * item.value();
        next[std::move(s)] += q;
      }
    }
    out.push_back(std::move(v));
    mass = std::move(next);
  }
  return out;
}

}  // namespace kc
