#include "kc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <unordered_map>

#include "kc/errors.hpp"

namespace kc {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31U);
}

// Cumulative probabilities as doubles, one table per (item, choice).
class Sampler {
 public:
  explicit Sampler(const MskcInstance& inst) {
    for (const MskcItem& item : inst.items()) {
      auto& rows = tables_.emplace_back();
      for (const MskcChoice& c : item.choices()) {
        auto& row = rows.emplace_back();
        Rational cum(0);
        for (const Atom& a : c.dist.atoms()) {
          cum += a.prob;
          row.push_back(cum.to_double());
        }
        row.back() = 1.0;
      }
    }
  }

  [[nodiscard]] std::size_t atom(std::size_t item, std::size_t choice, double u) const {
    const auto& row = tables_[item][choice];
    const auto it = std::upper_bound(row.begin(), row.end(), u);
    return std::min(static_cast<std::size_t>(it - row.begin()), row.size() - 1);
  }

 private:
  std::vector<std::vector<std::vector<double>>> tables_;
};

std::size_t pick_mix(const Decision& d, double u) {
  if (d.mix.size() == 1) return d.mix.front().first;
  double cum = 0;
  for (const auto& [choice, weight] : d.mix) {
    cum += weight.to_double();
    if (u < cum) return choice;
  }
  return d.mix.back().first;
}

ExecutionTrace run_once(const Policy& policy, const MskcInstance& inst, const Sampler& sampler, std::uint64_t seed,
                        std::uint64_t trial, const EngineOptions& opts) {
  const Rational budget = execution_budget(policy, inst);
  const std::optional<Rational> unit = rounding_unit(policy);
  ExecutionTrace trace;
  trace.profit = Rational(0);
  History h;
  h.used = Rational(0);
  std::uint64_t counter = 0;
  while (true) {
    const Decision d = decide(policy, inst, h);
    if (d.stop) {
      trace.reason = d.exhausted ? Termination::Exhausted : Termination::PolicyStop;
      return trace;
    }
    const std::size_t choice = pick_mix(d, uniform01(seed, trial, counter++));
    const MskcItem& item = inst.item(d.item);
    const Atom& atom = item.choice(choice).dist.atoms()[sampler.atom(d.item, choice, uniform01(seed, trial, counter++))];
    if (choice != kNullChoice) {
      trace.profit -= opts.transfer ? opts.transfer(d.item, choice, atom.size) : item.choice(choice).cost;
    }
    h.used += atom.size;
    const bool fits = h.used <= budget;
    if (choice != kNullChoice && (fits || opts.overflow_collects)) trace.profit += item.value();
    trace.steps.push_back(TraceStep{d.item, choice, atom.size, fits});
    if (!fits) {
      trace.reason = Termination::Overflow;
      return trace;
    }
    ++h.steps;
    if (d.item < 64) h.attempted |= std::uint64_t{1} << d.item;
    if (unit) h.rounded_units += (atom.size / *unit).floor_int();
  }
}

struct StateKey {
  std::size_t steps;
  Rational used;
  std::int64_t rounded;
  std::uint64_t attempted;
  friend bool operator==(const StateKey&, const StateKey&) = default;
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const {
    std::size_t h = k.used.hash();
    h ^= splitmix64(k.steps) + (h << 6U);
    h ^= splitmix64(static_cast<std::uint64_t>(k.rounded) ^ 0x5bd1e995ULL) + (h << 6U);
    h ^= splitmix64(k.attempted) + (h >> 2U);
    return h;
  }
};

}  // namespace

double uniform01(std::uint64_t seed, std::uint64_t trial, std::uint64_t counter) {
  const std::uint64_t x = splitmix64(splitmix64(splitmix64(seed) ^ trial) ^ counter);
  return static_cast<double>(x >> 11U) * 0x1.0p-53;
}

ExecutionTrace execute(const Policy& policy, const MskcInstance& inst, std::uint64_t seed, std::uint64_t trial,
                       const EngineOptions& opts) {
  validate_policy(policy, inst);
  return run_once(policy, inst, Sampler(inst), seed, trial, opts);
}

ExactEvaluation evaluate_exact(const Policy& policy, const MskcInstance& inst, const EngineOptions& opts) {
  validate_policy(policy, inst);
  const Rational budget = execution_budget(policy, inst);
  const std::optional<Rational> unit = rounding_unit(policy);

  ExactEvaluation out;
  out.profit = Rational(0);
  out.overflow_prob = Rational(0);
  for (const MskcItem& item : inst.items()) out.attempt_prob.emplace_back(item.choice_count(), Rational(0));

  std::unordered_map<StateKey, Rational, StateKeyHash> layer;
  layer.emplace(StateKey{0, Rational(0), 0, 0}, Rational(1));
  while (!layer.empty()) {
    out.states += layer.size();
    if (out.states > opts.state_cap) {
      throw StateSpaceTooLarge("exact evaluation exceeded " + std::to_string(opts.state_cap) + " states");
    }
    std::unordered_map<StateKey, Rational, StateKeyHash> next;
    for (const auto& [key, prob] : layer) {
      History h{key.steps, key.used, key.rounded, key.attempted};
      const Decision d = decide(policy, inst, h);
      if (d.stop) continue;
      const MskcItem& item = inst.item(d.item);
      for (const auto& [choice, weight] : d.mix) {
        if (weight.is_zero()) continue;
        const Rational p = prob * weight;
        if (choice != kNullChoice) {
          out.attempt_prob[d.item][choice] += p;
          if (!opts.transfer) out.profit -= p * item.choice(choice).cost;
        }
        for (const Atom& atom : item.choice(choice).dist.atoms()) {
          const Rational q = p * atom.prob;
          if (choice != kNullChoice && opts.transfer) out.profit -= q * opts.transfer(d.item, choice, atom.size);
          Rational used = key.used + atom.size;
          const bool fits = used <= budget;
          if (choice != kNullChoice && (fits || opts.overflow_collects)) out.profit += q * item.value();
          if (!fits) {
            out.overflow_prob += q;
            continue;
          }
          StateKey nk{key.steps + 1, std::move(used), key.rounded,
                      d.item < 64 ? key.attempted | (std::uint64_t{1} << d.item) : key.attempted};
          if (unit) nk.rounded += (atom.size / *unit).floor_int();
          auto [it, inserted] = next.try_emplace(std::move(nk), q);
          if (!inserted) it->second += q;
        }
      }
    }
    layer = std::move(next);
  }
  return out;
}

Rational expected_profit_exact(const Policy& policy, const MskcInstance& inst, const EngineOptions& opts) {
  return evaluate_exact(policy, inst, opts).profit;
}

Rational expected_truncated_size(const ExactEvaluation& eval, const MskcInstance& inst, const Rational& t) {
  Rational total(0);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    for (std::size_t j = 1; j < inst.item(i).choice_count(); ++j) {
      if (!eval.attempt_prob[i][j].is_zero()) total += eval.attempt_prob[i][j] * choice_truncated_mean(inst.item(i), j, t);
    }
  }
  return total;
}

unsigned default_workers() {
  if (const char* env = std::getenv("KC_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

ProfitEstimate estimate_profit_mc(const Policy& policy, const MskcInstance& inst, std::uint64_t trials,
                                  std::uint64_t seed, const EngineOptions& opts, unsigned workers) {
  if (trials == 0) throw ParameterOutOfRange("Monte Carlo needs at least one trial");
  validate_policy(policy, inst);
  if (workers == 0) workers = default_workers();
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, trials));

  const Sampler sampler(inst);
  std::vector<double> profits(trials);
  auto work = [&](unsigned w) {
    for (std::uint64_t t = w; t < trials; t += workers) {
      profits[t] = run_once(policy, inst, sampler, seed, t, opts).profit.to_double();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  // Sequential reduction keeps the result independent of the worker count.
  // Shifting by the first sample makes constant samples exact.
  const double shift = profits.front();
  double sum = 0;
  for (double p : profits) sum += p - shift;
  const double mean = shift + sum / static_cast<double>(trials);
  double ss = 0;
  for (double p : profits) ss += (p - mean) * (p - mean);
  const double sd = trials > 1 ? std::sqrt(ss / static_cast<double>(trials - 1)) : 0.0;
  return ProfitEstimate{mean, 1.96 * sd / std::sqrt(static_cast<double>(trials)), trials, seed};
}

}  // namespace kc
