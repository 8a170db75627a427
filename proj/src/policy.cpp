#include "kc/policy.hpp"

#include <algorithm>

#include "kc/errors.hpp"

namespace kc {
namespace {

Decision halt(bool exhausted) {
  Decision d;
  d.exhausted = exhausted;
  return d;
}

Decision step_decision(const NonAdaptivePolicy& p, std::size_t step) {
  Decision d;
  if (step >= p.steps.size()) {
    d.exhausted = true;
    return d;
  }
  const NonAdaptiveStep& s = p.steps[step];
  d.stop = false;
  d.item = s.item;
  if (s.mix && s.mix->randomized) {
    d.mix = {{s.mix->first, s.mix->first_weight}, {s.mix->second, s.mix->second_weight}};
  } else {
    d.mix = {{s.choice, Rational(1)}};
  }
  return d;
}

void check_step(const MskcInstance& inst, std::size_t item, std::size_t choice) {
  if (item >= inst.size()) throw InvalidPolicy("policy references missing item " + std::to_string(item));
  if (choice >= inst.item(item).choice_count()) {
    throw InvalidPolicy("policy references missing choice " + std::to_string(choice) + " of item " +
                        std::to_string(item));
  }
}

void check_order(const NonAdaptivePolicy& p, const MskcInstance& inst) {
  std::vector<bool> seen(inst.size(), false);
  for (const NonAdaptiveStep& s : p.steps) {
    check_step(inst, s.item, s.choice);
    if (seen[s.item]) throw InvalidPolicy("item " + std::to_string(s.item) + " appears twice");
    seen[s.item] = true;
    if (s.mix) {
      check_step(inst, s.item, s.mix->first);
      check_step(inst, s.item, s.mix->second);
      if (s.mix->first_weight + s.mix->second_weight != Rational(1) || s.mix->first_weight.sign() < 0 ||
          s.mix->second_weight.sign() < 0) {
        throw InvalidPolicy("virtual step weights must be non-negative and sum to one");
      }
    }
  }
}

}  // namespace

std::optional<Rational> ValueTable::lookup(std::size_t step, const Rational& remaining) const {
  if (step >= values.size()) return std::nullopt;
  const auto& row = values[step];
  const auto it = std::lower_bound(row.begin(), row.end(), remaining,
                                   [](const std::pair<Rational, Rational>& e, const Rational& r) { return e.first < r; });
  if (it == row.end() || it->first != remaining) return std::nullopt;
  return it->second;
}

Rational execution_budget(const Policy& policy, const MskcInstance& inst) {
  if (const auto* o = std::get_if<OrderedAdaptivePolicy>(&policy)) return o->capacity;
  return inst.budget();
}

std::optional<Rational> rounding_unit(const Policy& policy) {
  if (const auto* o = std::get_if<OrderedAdaptivePolicy>(&policy)) return o->table.delta;
  return std::nullopt;
}

Decision decide(const Policy& policy, const MskcInstance& inst, const History& h) {
  if (const auto* p = std::get_if<NonAdaptivePolicy>(&policy)) return step_decision(*p, h.steps);

  if (const auto* p = std::get_if<StoppingTimePolicy>(&policy)) {
    if (const auto* th = std::get_if<BudgetThreshold>(&p->rule)) {
      if (h.used > th->theta) return Decision{};
    } else if (const auto* vt = std::get_if<ValueTable>(&p->rule)) {
      if (h.steps >= p->order.steps.size()) return halt(true);
      const std::optional<Rational> v = vt->lookup(h.steps, inst.budget() - h.used);
      if (!v || v->sign() <= 0) return Decision{};
    }
    return step_decision(p->order, h.steps);
  }

  if (const auto* p = std::get_if<AdaptivePolicy>(&policy)) {
    std::optional<Action> a;
    if (p->rule) {
      a = p->rule(h);
    } else {
      const auto it = p->table.find(AdaptivePolicy::Key{h.attempted, inst.budget() - h.used});
      if (it != p->table.end()) a = it->second;
    }
    if (!a) {
      const bool all = inst.size() < 64 && h.attempted == (std::uint64_t{1} << inst.size()) - 1;
      return halt(all);
    }
    check_step(inst, a->item, a->choice);
    if (a->item < 64 && ((h.attempted >> a->item) & 1U) != 0U) {
      throw InvalidPolicy("adaptive policy repeats item " + std::to_string(a->item));
    }
    return Decision{false, false, a->item, {{a->choice, Rational(1)}}};
  }

  const auto& p = std::get<OrderedAdaptivePolicy>(policy);
  const std::size_t i = h.steps;
  const std::int64_t k = p.table.units - h.rounded_units;
  if (i >= inst.size()) return halt(true);
  if (k < 0) return Decision{};
  const auto ku = static_cast<std::size_t>(k);
  if (p.table.d[i][ku].sign() <= 0) return Decision{};
  return Decision{false, false, i, {{p.table.best[i][ku], Rational(1)}}};
}

void validate_policy(const Policy& policy, const MskcInstance& inst) {
  if (const auto* p = std::get_if<NonAdaptivePolicy>(&policy)) {
    check_order(*p, inst);
  } else if (const auto* p = std::get_if<StoppingTimePolicy>(&policy)) {
    check_order(p->order, inst);
  } else if (const auto* p = std::get_if<AdaptivePolicy>(&policy)) {
    for (const auto& [key, action] : p->table) {
      if (action) check_step(inst, action->item, action->choice);
    }
  } else {
    const auto& o = std::get<OrderedAdaptivePolicy>(policy);
    if (o.table.d.size() != inst.size() + 1) throw InvalidPolicy("ordered table does not match the instance");
  }
}

}  // namespace kc
