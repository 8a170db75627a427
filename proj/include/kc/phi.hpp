#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kc/core.hpp"
#include "kc/lp.hpp"

namespace kc {

/// A choice placed in the (w, mu) plane.
struct FrontierPoint {
  std::size_t choice = 0;
  Rational w;
  Rational mu;
};

/// Undominated choices of one item, starting at the null choice (0, 0).
///
/// After the anchor, w is strictly increasing, mu is non-decreasing and the
/// slopes d(mu)/d(w) of consecutive segments are strictly increasing.
struct ParetoFrontier {
  std::vector<FrontierPoint> points;
};

/// Frontier of arbitrary (choice, w, mu) points; the null anchor is added.
ParetoFrontier frontier_from_points(std::vector<FrontierPoint> candidates);
/// Frontier of an item's choices evaluated at capacity t.
ParetoFrontier eliminate_dominated(const MskcItem& item, const Rational& t);

/// The only item split between two choices in a structured solution.
struct FractionalItem {
  std::size_t item = 0;
  std::size_t low_choice = 0;   // smaller w
  std::size_t high_choice = 0;  // larger w
  Rational low_weight;
  Rational high_weight;
};

struct PhiSolution {
  Rational budget;
  Rational value;
  /// x[i][j], one row per item, null choice included.
  std::vector<std::vector<Rational>> x;
  std::optional<FractionalItem> fractional;

  [[nodiscard]] Rational used_capacity(const MskcInstance& inst) const;
};

/// Phi(t) by greedy over frontier segments in increasing slope order.
PhiSolution solve_phi(const MskcInstance& inst, const Rational& t);

/// Turns any feasible x into a solution with the structure above and an
/// objective value at least as large. Throws InfeasibleInput on bad x.
PhiSolution structure_solution(const MskcInstance& inst, const Rational& t,
                               const std::vector<std::vector<Rational>>& x);

/// The raw LP for Phi(t), one variable per (item, choice) in row-major order.
LpProblem phi_lp(const MskcInstance& inst, const Rational& t);
/// Phi(t) from the generic simplex; used as a reference.
Rational phi_by_simplex(const MskcInstance& inst, const Rational& t);

/// Objective of x at capacity t.
Rational phi_objective(const MskcInstance& inst, const Rational& t, const std::vector<std::vector<Rational>>& x);
/// Checks feasibility and the at-most-one-fractional-item structure.
bool phi_structure_holds(const MskcInstance& inst, const PhiSolution& sol);

}  // namespace kc
