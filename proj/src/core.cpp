#include "kc/core.hpp"

#include <algorithm>

#include "kc/errors.hpp"

namespace kc {

FiniteDistribution::FiniteDistribution(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.size < b.size; });
  Rational total(0);
  for (Atom& atom : atoms) {
    if (atom.size.sign() < 0) throw InvalidDistribution("negative size " + atom.size.str());
    if (atom.prob.sign() < 0) throw InvalidDistribution("negative probability " + atom.prob.str());
    if (atom.prob.is_zero()) continue;
    total += atom.prob;
    if (!atoms_.empty() && atoms_.back().size == atom.size) {
      atoms_.back().prob += atom.prob;
    } else {
      atoms_.push_back(std::move(atom));
    }
  }
  if (total != Rational(1)) {
    throw InvalidDistribution("probabilities sum to " + total.str() + ", expected 1");
  }
}

FiniteDistribution FiniteDistribution::point_mass(const Rational& size) {
  return FiniteDistribution({Atom{size, Rational(1)}});
}

Rational FiniteDistribution::mass_at(const Rational& size) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), size,
                             [](const Atom& a, const Rational& s) { return a.size < s; });
  if (it != atoms_.end() && it->size == size) return it->prob;
  return Rational(0);
}

Rational cdf_at(const FiniteDistribution& dist, const Rational& b) {
  Rational total(0);
  for (const Atom& atom : dist.atoms()) {
    if (atom.size > b) break;
    total += atom.prob;
  }
  return total;
}

Rational truncated_mean(const FiniteDistribution& dist, const Rational& t) {
  if (t.sign() <= 0) throw Error("truncated_mean requires t > 0");
  Rational total(0);
  for (const Atom& atom : dist.atoms()) total += min(atom.size, t) * atom.prob;
  return total;
}

Rational raw_moment(const FiniteDistribution& dist, unsigned r) {
  if (r == 0) throw Error("raw_moment requires r >= 1");
  Rational total(0);
  for (const Atom& atom : dist.atoms()) total += pow(atom.size, r) * atom.prob;
  return total;
}

MskcItem::MskcItem(Rational value, std::vector<MskcChoice> real_choices) : value_(std::move(value)) {
  if (value_.sign() < 0) throw InvalidInstance("negative item value " + value_.str());
  choices_.reserve(real_choices.size() + 1);
  choices_.push_back(MskcChoice{Rational(0), FiniteDistribution::point_mass(Rational(0))});
  for (MskcChoice& c : real_choices) {
    if (c.cost.sign() < 0) throw InvalidInstance("negative choice cost " + c.cost.str());
    choices_.push_back(std::move(c));
  }
}

MskcInstance::MskcInstance(std::vector<MskcItem> items, Rational budget)
    : items_(std::move(items)), budget_(std::move(budget)) {
  if (budget_.sign() <= 0) throw InvalidInstance("budget must be positive");
}

MskcInstance MskcInstance::with_budget(const Rational& budget) const { return MskcInstance(items_, budget); }

Rational choice_weight(const MskcItem& item, std::size_t choice_index, const Rational& t) {
  if (choice_index == kNullChoice) return Rational(0);
  const MskcChoice& c = item.choice(choice_index);
  return item.value() * cdf_at(c.dist, t) - c.cost;
}

Rational choice_truncated_mean(const MskcItem& item, std::size_t choice_index, const Rational& t) {
  if (choice_index == kNullChoice) return Rational(0);
  return truncated_mean(item.choice(choice_index).dist, t);
}

ContractAgent::ContractAgent(Rational value, std::vector<ContractAction> actions)
    : value_(std::move(value)), actions_(std::move(actions)) {
  if (actions_.empty()) throw InvalidInstance("agent needs at least one action");
  if (value_.sign() < 0) throw InvalidInstance("negative agent value " + value_.str());
  for (const ContractAction& a : actions_) {
    if (a.cost.sign() < 0) throw InvalidInstance("negative action cost " + a.cost.str());
  }
  std::stable_sort(actions_.begin(), actions_.end(),
                   [](const ContractAction& a, const ContractAction& b) { return a.cost < b.cost; });
}

std::vector<Rational> ContractAgent::support() const {
  std::vector<Rational> sizes;
  for (const ContractAction& a : actions_) {
    for (const Atom& atom : a.dist.atoms()) sizes.push_back(atom.size);
  }
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  return sizes;
}

ContractInstance::ContractInstance(std::vector<ContractAgent> agents, Rational budget)
    : agents_(std::move(agents)), budget_(std::move(budget)) {
  if (budget_.sign() <= 0) throw InvalidInstance("budget must be positive");
}

const Rational& Contract::payment_at(const Rational& size) const {
  auto it = payments.find(size);
  if (it == payments.end()) throw Error("contract has no payment for size " + size.str());
  return it->second;
}

Rational Contract::expected_transfer(const FiniteDistribution& dist) const {
  Rational total(0);
  for (const Atom& atom : dist.atoms()) total += payment_at(atom.size) * atom.prob;
  return total;
}

bool Contract::is_monotone() const {
  const Rational* previous = nullptr;
  for (const auto& [size, pay] : payments) {
    if (pay.sign() < 0) return false;
    if (previous != nullptr && pay > *previous) return false;
    previous = &pay;
  }
  return true;
}

}  // namespace kc
