#pragma once

#include <cstddef>
#include <vector>

#include "kc/rational.hpp"

namespace kc {

enum class LpSense { Maximize, Minimize };
enum class LpRelation { LessEqual, GreaterEqual, Equal };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpConstraint {
  std::vector<Rational> coeffs;
  LpRelation relation = LpRelation::LessEqual;
  Rational rhs;
};

/// Small dense LP over non-negative variables.
struct LpProblem {
  LpSense sense = LpSense::Maximize;
  std::vector<Rational> objective;
  std::vector<LpConstraint> constraints;

  [[nodiscard]] std::size_t variable_count() const { return objective.size(); }
  void add(std::vector<Rational> coeffs, LpRelation relation, Rational rhs);
  /// Adds x_var <= bound.
  void add_upper_bound(std::size_t var, Rational bound);
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  std::vector<Rational> x;
};

/// Two-phase primal simplex in exact arithmetic with Bland's pivoting rule.
LpSolution solve_lp_exact(const LpProblem& problem);

/// True when x is non-negative and satisfies every constraint exactly.
bool lp_feasible(const LpProblem& problem, const std::vector<Rational>& x);

}  // namespace kc
