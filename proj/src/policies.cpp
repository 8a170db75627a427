#include "kc/policies.hpp"

#include <algorithm>
#include <map>

#include "kc/contracts.hpp"
#include "kc/engine.hpp"
#include "kc/errors.hpp"
#include "kc/instances.hpp"

namespace kc {
namespace {

std::vector<SkcCandidate> candidates_from(const MskcInstance& inst, const PhiSolution& phi) {
  std::vector<SkcCandidate> out;
  const Rational& t = phi.budget;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const MskcItem& item = inst.item(i);
    if (phi.fractional && phi.fractional->item == i) {
      const FractionalItem& f = *phi.fractional;
      SkcCandidate c;
      c.item = i;
      c.choice = f.low_weight >= f.high_weight ? f.low_choice : f.high_choice;
      c.mix = VirtualMix{f.low_choice, f.high_choice, f.low_weight, f.high_weight, true};
      c.w = f.low_weight * choice_weight(item, f.low_choice, t) + f.high_weight * choice_weight(item, f.high_choice, t);
      c.mu = f.low_weight * choice_truncated_mean(item, f.low_choice, t) +
             f.high_weight * choice_truncated_mean(item, f.high_choice, t);
      out.push_back(std::move(c));
      continue;
    }
    for (std::size_t j = 1; j < item.choice_count(); ++j) {
      if (phi.x[i][j].sign() > 0) {
        out.push_back(SkcCandidate{i, j, std::nullopt, choice_weight(item, j, t), choice_truncated_mean(item, j, t)});
      }
    }
  }
  return out;
}

NonAdaptiveStep to_step(const SkcCandidate& c) { return NonAdaptiveStep{c.item, c.choice, c.mix}; }

// Decreasing density w / mu; mu = 0 first; ties by item then choice.
void sort_by_density(std::vector<SkcCandidate>& cs) {
  std::stable_sort(cs.begin(), cs.end(), [](const SkcCandidate& a, const SkcCandidate& b) {
    const bool az = a.mu.is_zero();
    const bool bz = b.mu.is_zero();
    if (az != bz) return az;
    if (!az) {
      const Rational lhs = a.w * b.mu;
      const Rational rhs = b.w * a.mu;
      if (lhs != rhs) return lhs > rhs;
    }
    if (a.item != b.item) return a.item < b.item;
    return a.choice < b.choice;
  });
}

// Fix the virtual step's choice by scoring both sub-choices exactly.
void derandomize_virtual(NonAdaptivePolicy& policy, const MskcInstance& eval_inst, const EngineOptions& opts) {
  for (NonAdaptiveStep& step : policy.steps) {
    if (!step.mix) continue;
    VirtualMix& mix = *step.mix;
    mix.randomized = false;
    const std::size_t fallback = mix.first_weight >= mix.second_weight ? mix.first : mix.second;
    try {
      NonAdaptivePolicy a = policy;
      NonAdaptivePolicy b = policy;
      for (NonAdaptiveStep& s : a.steps) {
        if (s.item == step.item) s.choice = mix.first;
      }
      for (NonAdaptiveStep& s : b.steps) {
        if (s.item == step.item) s.choice = mix.second;
      }
      const Rational va = expected_profit_exact(Policy(a), eval_inst, opts);
      const Rational vb = expected_profit_exact(Policy(b), eval_inst, opts);
      if (va != vb) {
        step.choice = va > vb ? mix.first : mix.second;
      } else {
        step.choice = fallback;
      }
    } catch (const Error&) {
      step.choice = fallback;
    }
  }
}

NonAdaptivePolicy skc_with_threshold(const MskcInstance& inst, const Rational& t, const Rational& threshold,
                                     bool derandomize, const MskcInstance& eval_inst, const EngineOptions& eval_opts,
                                     SkcReport& report) {
  report.phi = solve_phi(inst, t);
  report.threshold = threshold;
  report.candidates = candidates_from(inst, report.phi);

  NonAdaptivePolicy policy;
  report.w_max = Rational(0);
  const SkcCandidate* best = nullptr;
  for (const SkcCandidate& c : report.candidates) {
    if (best == nullptr || c.w > best->w) best = &c;
  }
  if (best != nullptr) report.w_max = best->w;
  report.single_step = best != nullptr && report.w_max > threshold;
  if (report.single_step) {
    policy.steps.push_back(to_step(*best));
  } else {
    std::vector<SkcCandidate> order = report.candidates;
    sort_by_density(order);
    for (const SkcCandidate& c : order) policy.steps.push_back(to_step(c));
  }
  if (derandomize) derandomize_virtual(policy, eval_inst, eval_opts);
  return policy;
}

}  // namespace

NonAdaptivePolicy build_skc(const MskcInstance& inst, bool derandomize, SkcReport* report) {
  SkcReport local;
  SkcReport& r = report != nullptr ? *report : local;
  r.alpha = compute_ior(inst);
  const Rational phi = solve_phi(inst, inst.budget()).value;
  const Rational threshold = phi / (Rational(4) * (Rational(1) + *r.alpha));
  return skc_with_threshold(inst, inst.budget(), threshold, derandomize, inst, EngineOptions{}, r);
}

NonAdaptivePolicy build_skc_of(const MskcInstance& inst, const Rational& t, bool derandomize, SkcReport* report) {
  if (t.sign() <= 0) throw ParameterOutOfRange("SKC-OF requires t > 0");
  SkcReport local;
  SkcReport& r = report != nullptr ? *report : local;
  const Rational threshold = solve_phi(inst, t).value / Rational(4);
  EngineOptions opts;
  opts.overflow_collects = true;
  return skc_with_threshold(inst, t, threshold, derandomize, inst.with_budget(t), opts, r);
}

StoppingTimePolicy build_skc_bound(const MskcInstance& inst, const Rational& delta, bool derandomize) {
  if (delta.sign() <= 0 || delta > inst.budget()) throw ParameterOutOfRange("SKC-BOUND requires 0 < delta <= budget");
  return StoppingTimePolicy{build_skc_of(inst, delta, derandomize), BudgetThreshold{delta}};
}

OrderedAdaptivePolicy build_ordered_adaptive(const MskcInstance& inst, const Rational& eps) {
  if (eps.sign() <= 0) throw ParameterOutOfRange("ordered DP requires eps > 0");
  if (inst.size() == 0) throw ParameterOutOfRange("ordered DP needs at least one item");
  const std::size_t n = inst.size();
  OrderedDpTable tab;
  tab.delta = eps * inst.budget() / Rational(static_cast<long>(n));
  tab.units = (inst.budget() / tab.delta).floor_int();
  const auto K = static_cast<std::size_t>(tab.units);
  tab.d.assign(n + 1, std::vector<Rational>(K + 1, Rational(0)));
  tab.best.assign(n + 1, std::vector<std::size_t>(K + 1, kNullChoice));

  for (std::size_t i = n; i-- > 0;) {
    const MskcItem& item = inst.item(i);
    // Rounded-down size distribution per choice, in units of delta.
    std::vector<std::vector<Rational>> mass(item.choice_count(), std::vector<Rational>(K + 1, Rational(0)));
    for (std::size_t j = 1; j < item.choice_count(); ++j) {
      for (const Atom& a : item.choice(j).dist.atoms()) {
        const std::int64_t u = (a.size / tab.delta).floor_int();
        if (u <= tab.units) mass[j][static_cast<std::size_t>(u)] += a.prob;
      }
    }
    for (std::size_t k = 0; k <= K; ++k) {
      Rational best = tab.d[i + 1][k];
      std::size_t arg = kNullChoice;
      for (std::size_t j = 1; j < item.choice_count(); ++j) {
        Rational fit(0);
        Rational cont(0);
        for (std::size_t t = 0; t <= k; ++t) {
          ++tab.work;
          if (mass[j][t].is_zero()) continue;
          fit += mass[j][t];
          cont += tab.d[i + 1][k - t] * mass[j][t];
        }
        const Rational val = item.value() * fit - item.choice(j).cost + cont;
        if (val > best) {
          best = val;
          arg = j;
        }
      }
      tab.d[i][k] = std::move(best);
      tab.best[i][k] = arg;
    }
  }
  return OrderedAdaptivePolicy{std::move(tab), (Rational(1) + eps) * inst.budget()};
}

StoppingTimePolicy optimal_stopping_rule(const MskcInstance& inst, const NonAdaptivePolicy& order,
                                         StoppingArithmetic arithmetic, std::size_t state_cap) {
  validate_policy(Policy(order), inst);
  const std::size_t L = order.steps.size();
  const Policy as_policy(order);

  // Forward pass: reachable remaining capacities before each step.
  std::vector<std::vector<Rational>> reach(L + 1);
  reach[0] = {inst.budget()};
  std::size_t states = 1;
  for (std::size_t l = 0; l < L; ++l) {
    const Decision d = decide(as_policy, inst, History{l, Rational(0), 0, 0});
    std::vector<Rational> next;
    for (const auto& [choice, weight] : d.mix) {
      if (weight.is_zero()) continue;
      for (const Atom& a : inst.item(d.item).choice(choice).dist.atoms()) {
        for (const Rational& b : reach[l]) {
          if (a.size <= b) next.push_back(b - a.size);
        }
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    states += next.size();
    if (states > state_cap) throw StateSpaceTooLarge("stopping rule exceeded " + std::to_string(state_cap) + " states");
    reach[l + 1] = std::move(next);
  }

  auto find_index = [](const std::vector<Rational>& row, const Rational& b) {
    return static_cast<std::size_t>(std::lower_bound(row.begin(), row.end(), b) - row.begin());
  };

  ValueTable table;
  table.values.resize(L);
  if (arithmetic == StoppingArithmetic::Exact) {
    std::vector<Rational> after(reach[L].size(), Rational(0));
    for (std::size_t l = L; l-- > 0;) {
      const Decision d = decide(as_policy, inst, History{l, Rational(0), 0, 0});
      const MskcItem& item = inst.item(d.item);
      std::vector<Rational> here(reach[l].size(), Rational(0));
      auto& row = table.values[l];
      for (std::size_t bi = 0; bi < reach[l].size(); ++bi) {
        const Rational& b = reach[l][bi];
        Rational cont(0);
        for (const auto& [choice, weight] : d.mix) {
          if (weight.is_zero()) continue;
          Rational v(0);
          if (choice != kNullChoice) v -= item.choice(choice).cost;
          for (const Atom& a : item.choice(choice).dist.atoms()) {
            if (a.size > b) continue;
            Rational gain = after[find_index(reach[l + 1], b - a.size)];
            if (choice != kNullChoice) gain += item.value();
            v += a.prob * gain;
          }
          cont += weight * v;
        }
        row.emplace_back(b, cont);
        here[bi] = cont.sign() > 0 ? cont : Rational(0);
      }
      after = std::move(here);
    }
  } else {
    std::vector<double> after(reach[L].size(), 0.0);
    for (std::size_t l = L; l-- > 0;) {
      const Decision d = decide(as_policy, inst, History{l, Rational(0), 0, 0});
      const MskcItem& item = inst.item(d.item);
      std::vector<double> here(reach[l].size(), 0.0);
      auto& row = table.values[l];
      for (std::size_t bi = 0; bi < reach[l].size(); ++bi) {
        const Rational& b = reach[l][bi];
        double cont = 0;
        for (const auto& [choice, weight] : d.mix) {
          if (weight.is_zero()) continue;
          double v = choice != kNullChoice ? -item.choice(choice).cost.to_double() : 0.0;
          for (const Atom& a : item.choice(choice).dist.atoms()) {
            if (a.size > b) continue;
            double gain = after[find_index(reach[l + 1], b - a.size)];
            if (choice != kNullChoice) gain += item.value().to_double();
            v += a.prob.to_double() * gain;
          }
          cont += weight.to_double() * v;
        }
        row.emplace_back(b, Rational(mpq_class(cont)));
        here[bi] = cont > 0 ? cont : 0.0;
      }
      after = std::move(here);
    }
  }
  return StoppingTimePolicy{order, std::move(table)};
}

Rational stopping_value(const StoppingTimePolicy& policy, const MskcInstance& inst) {
  const auto* table = std::get_if<ValueTable>(&policy.rule);
  if (table == nullptr) throw InvalidPolicy("policy has no value table");
  if (table->values.empty()) return Rational(0);
  const std::optional<Rational> v = table->lookup(0, inst.budget());
  return v && v->sign() > 0 ? *v : Rational(0);
}

NonAdaptivePolicy order_of(const std::vector<std::pair<std::size_t, std::size_t>>& steps) {
  NonAdaptivePolicy p;
  for (const auto& [item, choice] : steps) p.steps.push_back(NonAdaptiveStep{item, choice, std::nullopt});
  return p;
}

AdaptivePolicy build_type_walk_policy(const Rational& eps, const Rational& gamma, std::size_t copies) {
  if (eps.sign() <= 0 || copies == 0) throw ParameterOutOfRange("type walk needs eps > 0 and copies >= 1");
  const std::size_t types = static_cast<std::size_t>((Rational(1) / eps).floor_int() +
                                                     ((Rational(1) / eps).is_integer() ? 0 : 1));
  const std::vector<Rational> a = gap_small_sizes(gamma, types);
  // prefix[i] is the used capacity while walking type i.
  std::vector<Rational> prefix{Rational(0)};
  for (std::size_t i = 0; i + 1 < types; ++i) prefix.push_back(prefix.back() + a[i]);

  AdaptivePolicy policy;
  policy.rule = [prefix, copies](const History& h) -> std::optional<Action> {
    const auto it = std::find(prefix.begin(), prefix.end(), h.used);
    if (it == prefix.end() || h.steps >= copies) return std::nullopt;
    const auto type = static_cast<std::size_t>(it - prefix.begin());
    return Action{type * copies + h.steps, 1};
  };
  return policy;
}

}  // namespace kc
