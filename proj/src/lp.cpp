#include "kc/lp.hpp"

#include <optional>

#include "kc/errors.hpp"

namespace kc {
namespace {

// Tableau for max c.x, Ax = b, x >= 0 with b >= 0. Row 0 holds reduced costs
// (z - c.x = 0 form) and the current objective value in the last column.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_((rows + 1) * (cols + 1)) {}

  Rational& at(std::size_t r, std::size_t c) { return cells_[r * (cols_ + 1) + c]; }
  [[nodiscard]] const Rational& at(std::size_t r, std::size_t c) const { return cells_[r * (cols_ + 1) + c]; }
  Rational& rhs(std::size_t r) { return at(r, cols_); }
  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const Rational inv = Rational(1) / at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) {
      if (!at(pr, c).is_zero()) at(pr, c) *= inv;
    }
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const Rational factor = at(r, pc);
      if (factor.is_zero()) continue;
      for (std::size_t c = 0; c <= cols_; ++c) {
        if (!at(pr, c).is_zero()) at(r, c) -= factor * at(pr, c);
      }
    }
  }

  void drop_row(std::size_t r) {
    // Row indices are 1-based for constraints; row 0 is the objective.
    cells_.erase(cells_.begin() + static_cast<std::ptrdiff_t>(r * (cols_ + 1)),
                 cells_.begin() + static_cast<std::ptrdiff_t>((r + 1) * (cols_ + 1)));
    --rows_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Rational> cells_;
};

enum class PhaseResult { Optimal, Unbounded };

// Bland's rule: lowest-index improving column, ties in the ratio test broken
// by lowest basic-variable index. `allowed` masks columns that may enter.
PhaseResult run_simplex(Tableau& t, std::vector<std::size_t>& basis, const std::vector<bool>& allowed) {
  while (true) {
    std::optional<std::size_t> entering;
    for (std::size_t c = 0; c < t.cols(); ++c) {
      if (allowed[c] && t.at(0, c).sign() < 0) {
        entering = c;
        break;
      }
    }
    if (!entering) return PhaseResult::Optimal;

    std::optional<std::size_t> leaving;
    Rational best_ratio;
    for (std::size_t r = 1; r <= t.rows(); ++r) {
      const Rational& a = t.at(r, *entering);
      if (a.sign() <= 0) continue;
      Rational ratio = t.rhs(r) / a;
      if (!leaving || ratio < best_ratio || (ratio == best_ratio && basis[r - 1] < basis[*leaving - 1])) {
        leaving = r;
        best_ratio = std::move(ratio);
      }
    }
    if (!leaving) return PhaseResult::Unbounded;
    t.pivot(*leaving, *entering);
    basis[*leaving - 1] = *entering;
  }
}

}  // namespace

void LpProblem::add(std::vector<Rational> coeffs, LpRelation relation, Rational rhs) {
  coeffs.resize(variable_count());
  constraints.push_back(LpConstraint{std::move(coeffs), relation, std::move(rhs)});
}

void LpProblem::add_upper_bound(std::size_t var, Rational bound) {
  std::vector<Rational> row(variable_count());
  row.at(var) = Rational(1);
  add(std::move(row), LpRelation::LessEqual, std::move(bound));
}

bool lp_feasible(const LpProblem& problem, const std::vector<Rational>& x) {
  if (x.size() != problem.variable_count()) return false;
  for (const Rational& v : x) {
    if (v.sign() < 0) return false;
  }
  for (const LpConstraint& c : problem.constraints) {
    Rational lhs(0);
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j < c.coeffs.size() && !c.coeffs[j].is_zero()) lhs += c.coeffs[j] * x[j];
    }
    switch (c.relation) {
      case LpRelation::LessEqual:
        if (lhs > c.rhs) return false;
        break;
      case LpRelation::GreaterEqual:
        if (lhs < c.rhs) return false;
        break;
      case LpRelation::Equal:
        if (lhs != c.rhs) return false;
        break;
    }
  }
  return true;
}

LpSolution solve_lp_exact(const LpProblem& problem) {
  const std::size_t n = problem.variable_count();
  const std::size_t m = problem.constraints.size();

  // Column layout: structural | slack/surplus (one per inequality) | artificial.
  std::size_t slack_count = 0;
  std::size_t art_count = 0;
  struct RowPlan {
    bool negate = false;
    std::optional<std::size_t> slack;
    Rational slack_sign;
    std::optional<std::size_t> artificial;
  };
  std::vector<RowPlan> plans(m);
  for (std::size_t r = 0; r < m; ++r) {
    const LpConstraint& c = problem.constraints[r];
    RowPlan& plan = plans[r];
    plan.negate = c.rhs.sign() < 0;
    LpRelation rel = c.relation;
    if (plan.negate && rel != LpRelation::Equal) {
      rel = rel == LpRelation::LessEqual ? LpRelation::GreaterEqual : LpRelation::LessEqual;
    }
    if (rel == LpRelation::LessEqual) {
      plan.slack = slack_count++;
      plan.slack_sign = Rational(1);
    } else if (rel == LpRelation::GreaterEqual) {
      plan.slack = slack_count++;
      plan.slack_sign = Rational(-1);
      plan.artificial = art_count++;
    } else {
      plan.artificial = art_count++;
    }
  }
  const std::size_t art_begin = n + slack_count;
  const std::size_t cols = art_begin + art_count;

  Tableau t(m, cols);
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    const LpConstraint& c = problem.constraints[r];
    const RowPlan& plan = plans[r];
    const Rational sign = plan.negate ? Rational(-1) : Rational(1);
    for (std::size_t j = 0; j < n && j < c.coeffs.size(); ++j) t.at(r + 1, j) = sign * c.coeffs[j];
    t.rhs(r + 1) = sign * c.rhs;
    if (plan.slack) t.at(r + 1, n + *plan.slack) = plan.slack_sign;
    if (plan.artificial) {
      t.at(r + 1, art_begin + *plan.artificial) = Rational(1);
      basis[r] = art_begin + *plan.artificial;
    } else {
      basis[r] = n + *plan.slack;
    }
  }

  // Phase 1: maximize -sum(artificials). Reduced costs start at +1 on the
  // artificial columns, then are priced out against the initial basis.
  if (art_count > 0) {
    for (std::size_t a = 0; a < art_count; ++a) t.at(0, art_begin + a) = Rational(1);
    for (std::size_t r = 0; r < m; ++r) {
      if (basis[r] < art_begin) continue;
      for (std::size_t c = 0; c <= cols; ++c) {
        if (!t.at(r + 1, c).is_zero()) t.at(0, c) -= t.at(r + 1, c);
      }
    }
    std::vector<bool> allowed(cols, true);
    run_simplex(t, basis, allowed);
    if (t.rhs(0).sign() != 0) return LpSolution{LpStatus::Infeasible, Rational(0), {}};

    // Drive zero-level artificials out of the basis; drop redundant rows.
    for (std::size_t r = t.rows(); r >= 1; --r) {
      if (basis[r - 1] < art_begin) continue;
      std::optional<std::size_t> col;
      for (std::size_t c = 0; c < art_begin; ++c) {
        if (!t.at(r, c).is_zero()) {
          col = c;
          break;
        }
      }
      if (col) {
        t.pivot(r, *col);
        basis[r - 1] = *col;
      } else {
        t.drop_row(r);
        basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(r - 1));
      }
    }
  }

  // Phase 2 objective row: z - c.x = 0, priced out against the basis.
  const Rational obj_sign = problem.sense == LpSense::Maximize ? Rational(1) : Rational(-1);
  for (std::size_t c = 0; c <= cols; ++c) t.at(0, c) = Rational(0);
  for (std::size_t j = 0; j < n; ++j) t.at(0, j) = -(obj_sign * problem.objective[j]);
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const Rational factor = t.at(0, basis[r]);
    if (factor.is_zero()) continue;
    for (std::size_t c = 0; c <= cols; ++c) {
      if (!t.at(r + 1, c).is_zero()) t.at(0, c) -= factor * t.at(r + 1, c);
    }
  }
  std::vector<bool> allowed(cols, true);
  for (std::size_t c = art_begin; c < cols; ++c) allowed[c] = false;
  if (run_simplex(t, basis, allowed) == PhaseResult::Unbounded) {
    return LpSolution{LpStatus::Unbounded, Rational(0), {}};
  }

  LpSolution sol;
  sol.status = LpStatus::Optimal;
  sol.x.assign(n, Rational(0));
  for (std::size_t r = 0; r < basis.size(); ++r) {
    if (basis[r] < n) sol.x[basis[r]] = t.rhs(r + 1);
  }
  sol.value = Rational(0);
  for (std::size_t j = 0; j < n; ++j) sol.value += problem.objective[j] * sol.x[j];
  if (!lp_feasible(problem, sol.x)) throw Error("simplex produced an infeasible point");
  return sol;
}

}  // namespace kc
