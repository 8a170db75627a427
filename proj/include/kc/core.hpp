#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "kc/rational.hpp"

namespace kc {

/// One support point of a finite distribution.
struct Atom {
  Rational size;
  Rational prob;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finite-support size distribution with exact sizes and probabilities.
///
/// Atoms are kept sorted by size with distinct sizes; duplicate sizes are
/// merged on construction and zero-probability atoms are dropped. The
/// probabilities must sum to exactly one.
class FiniteDistribution {
 public:
  FiniteDistribution() : FiniteDistribution(point_mass(Rational(0))) {}
  explicit FiniteDistribution(std::vector<Atom> atoms);

  static FiniteDistribution point_mass(const Rational& size);

  [[nodiscard]] std::span<const Atom> atoms() const { return atoms_; }
  [[nodiscard]] std::size_t support_size() const { return atoms_.size(); }
  [[nodiscard]] const Rational& max_size() const { return atoms_.back().size; }
  [[nodiscard]] const Rational& min_size() const { return atoms_.front().size; }
  /// Probability mass at exactly `size` (zero off the support).
  [[nodiscard]] Rational mass_at(const Rational& size) const;

  friend bool operator==(const FiniteDistribution&, const FiniteDistribution&) = default;

 private:
  std::vector<Atom> atoms_;
};

/// Pr[s <= b].
Rational cdf_at(const FiniteDistribution& dist, const Rational& b);
/// E[min{s, t}]; requires t > 0.
Rational truncated_mean(const FiniteDistribution& dist, const Rational& t);
/// E[s^r]; requires r >= 1.
Rational raw_moment(const FiniteDistribution& dist, unsigned r);

struct MskcChoice {
  Rational cost;
  FiniteDistribution dist;

  friend bool operator==(const MskcChoice&, const MskcChoice&) = default;
};

/// Index of the null choice (zero cost, size zero, no value) in every item.
inline constexpr std::size_t kNullChoice = 0;

/// MSKC item: a value plus a list of (cost, distribution) choices.
///
/// The null choice is always stored at index kNullChoice; the choices passed
/// to the constructor follow it at indices 1..m.
class MskcItem {
 public:
  MskcItem(Rational value, std::vector<MskcChoice> real_choices);

  [[nodiscard]] const Rational& value() const { return value_; }
  [[nodiscard]] std::span<const MskcChoice> choices() const { return choices_; }
  [[nodiscard]] const MskcChoice& choice(std::size_t j) const { return choices_.at(j); }
  [[nodiscard]] std::size_t choice_count() const { return choices_.size(); }
  [[nodiscard]] std::size_t real_choice_count() const { return choices_.size() - 1; }

  friend bool operator==(const MskcItem&, const MskcItem&) = default;

 private:
  Rational value_;
  std::vector<MskcChoice> choices_;
};

class MskcInstance {
 public:
  MskcInstance() = default;
  explicit MskcInstance(std::vector<MskcItem> items, Rational budget = Rational(1));

  [[nodiscard]] std::span<const MskcItem> items() const { return items_; }
  [[nodiscard]] const MskcItem& item(std::size_t i) const { return items_.at(i); }
  [[nodiscard]] std::size_t size() const { return items_.size(); }
  [[nodiscard]] const Rational& budget() const { return budget_; }
  /// Same items, different budget.
  [[nodiscard]] MskcInstance with_budget(const Rational& budget) const;

  friend bool operator==(const MskcInstance&, const MskcInstance&) = default;

 private:
  std::vector<MskcItem> items_;
  Rational budget_{1};
};

/// w_ij = v_i * Pr[s <= t] - p_ij. Zero for the null choice.
Rational choice_weight(const MskcItem& item, std::size_t choice_index, const Rational& t);
/// mu_ij = E[min{s, t}]. Zero for the null choice.
Rational choice_truncated_mean(const MskcItem& item, std::size_t choice_index, const Rational& t);

struct ContractAction {
  Rational cost;
  FiniteDistribution dist;

  friend bool operator==(const ContractAction&, const ContractAction&) = default;
};

/// An agent with costly effort levels. Actions are kept in non-decreasing cost
/// order (stable with respect to the input order).
class ContractAgent {
 public:
  ContractAgent(Rational value, std::vector<ContractAction> actions);

  [[nodiscard]] const Rational& value() const { return value_; }
  [[nodiscard]] std::span<const ContractAction> actions() const { return actions_; }
  [[nodiscard]] const ContractAction& action(std::size_t j) const { return actions_.at(j); }
  /// Sorted union of the supports of all actions.
  [[nodiscard]] std::vector<Rational> support() const;

  friend bool operator==(const ContractAgent&, const ContractAgent&) = default;

 private:
  Rational value_;
  std::vector<ContractAction> actions_;
};

class ContractInstance {
 public:
  ContractInstance() = default;
  explicit ContractInstance(std::vector<ContractAgent> agents, Rational budget = Rational(1));

  [[nodiscard]] std::span<const ContractAgent> agents() const { return agents_; }
  [[nodiscard]] const ContractAgent& agent(std::size_t i) const { return agents_.at(i); }
  [[nodiscard]] std::size_t size() const { return agents_.size(); }
  [[nodiscard]] const Rational& budget() const { return budget_; }

  friend bool operator==(const ContractInstance&, const ContractInstance&) = default;

 private:
  std::vector<ContractAgent> agents_;
  Rational budget_{1};
};

/// Payment schedule on observed completion times.
struct Contract {
  std::map<Rational, Rational> payments;

  /// Payment for an observed size; throws if the size is outside the domain.
  [[nodiscard]] const Rational& payment_at(const Rational& size) const;
  [[nodiscard]] Rational expected_transfer(const FiniteDistribution& dist) const;
  /// Non-negative and non-increasing in completion time.
  [[nodiscard]] bool is_monotone() const;

  friend bool operator==(const Contract&, const Contract&) = default;
};

}  // namespace kc
