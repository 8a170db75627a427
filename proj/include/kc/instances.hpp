#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kc/core.hpp"

namespace kc {

struct InstanceBundle {
  std::string family;
  /// Generator parameters as exact strings; regenerate the instance bit-exactly.
  std::map<std::string, std::string> params;
  std::variant<MskcInstance, ContractInstance> instance;
  /// Quantities the construction is expected to exhibit.
  std::map<std::string, std::string> claims;

  [[nodiscard]] bool is_contract() const { return std::holds_alternative<ContractInstance>(instance); }
  [[nodiscard]] const MskcInstance& mskc() const { return std::get<MskcInstance>(instance); }
  [[nodiscard]] const ContractInstance& contracts() const { return std::get<ContractInstance>(instance); }

  friend bool operator==(const InstanceBundle&, const InstanceBundle&) = default;
};

/// a_i = gamma^(n - i + 1) for i = 1..n (returned 0-based).
std::vector<Rational> gap_small_sizes(const Rational& gamma, std::size_t n);
/// b_i = 1 - sum_{j < i} a_j.
std::vector<Rational> gap_large_sizes(const std::vector<Rational>& a);

/// Single-action jobs, value 2, cost 2 - eps, size a_i w.p. 1 - eps and b_i
/// w.p. eps. n defaults to ceil(1/eps).
InstanceBundle gen_alpha_gap(const Rational& eps, const Rational& gamma, std::optional<std::size_t> n = std::nullopt);

/// ceil(1/eps) job types with `copies` jobs each (type-major order); value
/// 15/eps, cost 15/eps - eps^2, sizes 0 / a_i / b_i w.p. 1-eps-eps^2 / eps / eps^2.
InstanceBundle gen_fully_vs_stop(const Rational& eps, const Rational& gamma, std::size_t copies);

struct MomentMatch {
  std::vector<Rational> support;  // t_1..t_{k+1}
  std::vector<Rational> x;
  std::vector<Rational> p;
};

/// Solves sum_j t_j^r x_j = rhs_r (r = 0..k) for distinct nodes t with the
/// dual Bjorck-Pereyra recurrences.
std::vector<Rational> solve_transposed_vandermonde(const std::vector<Rational>& nodes, std::vector<Rational> rhs);

/// Moment-matching probabilities; throws DeltaTooLarge if any p_j < 0.
MomentMatch solve_moment_match(std::size_t k, const Rational& eps, const Rational& delta);

/// Good and bad item size distributions; k = 0 gives the first-moment pair.
std::pair<FiniteDistribution, FiniteDistribution> info_gap_types(std::size_t k, const Rational& eps,
                                                                 const Rational& delta);

/// n good items followed by n^2 - n bad items, value 2, cost 2 - eps.
InstanceBundle gen_info_gap(std::size_t k, const Rational& eps, const Rational& delta, std::size_t n);

/// Jobs of value 1, cost 1 - eps, size eps^copies w.p. 1 - eps and 1 w.p. eps.
InstanceBundle gen_lp_gap(const Rational& eps, std::size_t copies);

/// Jobs of value 2, cost 2 - eps^2, size eps^copies w.p. 1 - eps and 1/2 w.p. eps.
InstanceBundle gen_bounded_gap(const Rational& eps, std::size_t copies);

enum class RandomProfile { Generic, PositiveW, BoundedSize };

struct RandomSpec {
  std::size_t n = 4;
  std::size_t m = 2;
  std::size_t support = 3;
  std::uint64_t seed = 0;
  RandomProfile profile = RandomProfile::Generic;
  Rational delta{1, 4};  // bounded-size profile only
};

/// Reproducible random MSKC instance with budget 1 and sizes in [0, 1].
/// Each item has m choices with 1..support atoms on the grid k/12.
InstanceBundle gen_random(const RandomSpec& spec);

/// Random contract instance whose first action per agent costs 0, so every
/// agent has an implementable action.
InstanceBundle gen_random_contract(std::size_t n, std::size_t m, std::size_t support, std::uint64_t seed);

std::string to_json_text(const InstanceBundle& bundle);
InstanceBundle from_json_text(const std::string& text);
void write_json(const InstanceBundle& bundle, const std::string& path);
InstanceBundle read_json(const std::string& path);

}  // namespace kc
