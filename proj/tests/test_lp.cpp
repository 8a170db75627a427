#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "kc/lp.hpp"

using namespace kc;

TEST_CASE("bounded single variable") {
  LpProblem p;
  p.objective = {Rational(1)};
  p.add({Rational(1)}, LpRelation::LessEqual, Rational(3));
  const LpSolution s = solve_lp_exact(p);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.value == Rational(3));
}

TEST_CASE("infeasible") {
  LpProblem p;
  p.sense = LpSense::Minimize;
  p.objective = {Rational(0)};
  p.add({Rational(1)}, LpRelation::GreaterEqual, Rational(1));
  p.add({Rational(1)}, LpRelation::LessEqual, Rational(0));
  CHECK(solve_lp_exact(p).status == LpStatus::Infeasible);
}

TEST_CASE("unbounded") {
  LpProblem p;
  p.objective = {Rational(1), Rational(-1)};
  p.add({Rational(1), Rational(-1)}, LpRelation::LessEqual, Rational(1));
  p.add({Rational(-1), Rational(1)}, LpRelation::LessEqual, Rational(5));
  // x - y <= 1 caps the objective; so this one is bounded at 1.
  CHECK(solve_lp_exact(p).value == Rational(1));
  LpProblem q;
  q.objective = {Rational(1)};
  q.add({Rational(-1)}, LpRelation::LessEqual, Rational(1));
  CHECK(solve_lp_exact(q).status == LpStatus::Unbounded);
}

TEST_CASE("equality rows and redundant constraints") {
  LpProblem p;
  p.sense = LpSense::Minimize;
  p.objective = {Rational(2), Rational(3)};
  p.add({Rational(1), Rational(1)}, LpRelation::Equal, Rational(4));
  p.add({Rational(2), Rational(2)}, LpRelation::Equal, Rational(8));
  p.add({Rational(1), Rational(0)}, LpRelation::LessEqual, Rational(3));
  const LpSolution s = solve_lp_exact(p);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.value == Rational(9));
  CHECK(s.x[0] == Rational(3));
}

TEST_CASE("negative right-hand sides") {
  LpProblem p;
  p.sense = LpSense::Minimize;
  p.objective = {Rational(1), Rational(1)};
  p.add({Rational(-1), Rational(-2)}, LpRelation::LessEqual, Rational(-4));
  const LpSolution s = solve_lp_exact(p);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.value == Rational(2));
}

// Degenerate cycling example (Beale); Bland's rule must terminate.
TEST_CASE("degenerate problem terminates") {
  LpProblem p;
  p.objective = {Rational(3, 4), Rational(-150), Rational(1, 50), Rational(-6)};
  p.add({Rational(1, 4), Rational(-60), Rational(-1, 25), Rational(9)}, LpRelation::LessEqual, Rational(0));
  p.add({Rational(1, 2), Rational(-90), Rational(-1, 50), Rational(3)}, LpRelation::LessEqual, Rational(0));
  p.add({Rational(0), Rational(0), Rational(1), Rational(0)}, LpRelation::LessEqual, Rational(1));
  const LpSolution s = solve_lp_exact(p);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.value == Rational(1, 20));
}

// Two-variable LPs checked against brute-force vertex enumeration.
TEST_CASE("random 2d problems match vertex enumeration") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<int> rhs(0, 10);
  for (int trial = 0; trial < 200; ++trial) {
    LpProblem p;
    p.objective = {Rational(coef(rng)), Rational(coef(rng))};
    for (int r = 0; r < 4; ++r) p.add({Rational(coef(rng)), Rational(coef(rng))}, LpRelation::LessEqual, Rational(rhs(rng)));
    p.add_upper_bound(0, Rational(20));
    p.add_upper_bound(1, Rational(20));
    // Lines: every constraint plus the axes.
    std::vector<std::vector<Rational>> lines;
    for (const auto& c : p.constraints) lines.push_back({c.coeffs[0], c.coeffs[1], c.rhs});
    lines.push_back({Rational(1), Rational(0), Rational(0)});
    lines.push_back({Rational(0), Rational(1), Rational(0)});
    bool any = false;
    Rational best;
    for (std::size_t a = 0; a < lines.size(); ++a) {
      for (std::size_t b = a + 1; b < lines.size(); ++b) {
        const Rational det = lines[a][0] * lines[b][1] - lines[a][1] * lines[b][0];
        if (det.is_zero()) continue;
        const Rational x = (lines[a][2] * lines[b][1] - lines[a][1] * lines[b][2]) / det;
        const Rational y = (lines[a][0] * lines[b][2] - lines[a][2] * lines[b][0]) / det;
        if (!lp_feasible(p, {x, y})) continue;
        const Rational v = p.objective[0] * x + p.objective[1] * y;
        if (!any || v > best) best = v;
        any = true;
      }
    }
    const LpSolution s = solve_lp_exact(p);
    REQUIRE(any);  // origin is always feasible
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.value == best);
  }
}
