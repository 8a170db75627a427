#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"
#include "kc/errors.hpp"
#include "kc/instances.hpp"
#include "kc/phi.hpp"

using namespace kc;
using kc::test::dist;
using kc::test::item;
using kc::test::R;

namespace {

bool frontier_well_formed(const ParetoFrontier& f) {
  const auto& p = f.points;
  if (p.empty() || p[0].choice != kNullChoice || !p[0].w.is_zero() || !p[0].mu.is_zero()) return false;
  for (std::size_t k = 1; k < p.size(); ++k) {
    if (p[k].w <= p[k - 1].w || p[k].mu < p[k - 1].mu) return false;
    if (k >= 2) {
      // slope(k-2, k-1) < slope(k-1, k)
      if ((p[k - 1].mu - p[k - 2].mu) * (p[k].w - p[k - 1].w) >= (p[k].mu - p[k - 1].mu) * (p[k - 1].w - p[k - 2].w)) {
        return false;
      }
    }
  }
  return true;
}

MskcInstance figure_one_item() {
  return MskcInstance({item("1", {{"7/10", dist({{"2/10", "1"}})},
                                  {"2/10", dist({{"9/10", "1"}})},
                                  {"5/10", dist({{"6/10", "1"}})}})});
}

}  // namespace

TEST_CASE("double dominance from the declared coordinates") {
  const ParetoFrontier f = frontier_from_points({{1, R("3/10"), R("2/10")}, {2, R("8/10"), R("9/10")}, {3, R("5/10"), R("6/10")}});
  REQUIRE(f.points.size() == 3);
  CHECK(f.points[1].choice == 1);
  CHECK(f.points[2].choice == 2);
  CHECK(frontier_well_formed(f));
}

TEST_CASE("single dominance and the null anchor") {
  const ParetoFrontier f = frontier_from_points({{1, R("1/2"), R("1/2")}, {2, R("1/2"), R("3/4")}});
  REQUIRE(f.points.size() == 2);
  CHECK(f.points[1].choice == 1);

  const ParetoFrontier g = frontier_from_points({{1, R("-1"), R("0")}, {2, R("0"), R("1/2")}});
  REQUIRE(g.points.size() == 1);
  CHECK(g.points[0].choice == kNullChoice);

  // Collinear middle point is merged away.
  const ParetoFrontier h = frontier_from_points({{1, R("1"), R("1")}, {2, R("2"), R("2")}});
  REQUIRE(h.points.size() == 2);
  CHECK(h.points[1].choice == 2);
}

TEST_CASE("solve_phi examples") {
  const MskcInstance two({item("10", {{"2", dist({{"1/2", "1"}})}}), item("6", {{"1", dist({{"1/2", "1"}})}})});
  const PhiSolution s = solve_phi(two, R("1"));
  CHECK(s.value == Rational(13));
  CHECK(s.x[0][1] == Rational(1));
  CHECK(s.x[1][1] == Rational(1));
  CHECK(phi_by_simplex(two, R("1")) == Rational(13));

  CHECK(solve_phi(MskcInstance(), R("1")).value == Rational(0));

  const MskcInstance lp_gap = gen_lp_gap(R("1/10"), 5).mskc();
  CHECK(solve_phi(lp_gap, R("1")).value >= R("1/2"));
  CHECK_THROWS_AS(solve_phi(two, R("0")), ParameterOutOfRange);
}

TEST_CASE("solve_phi matches the simplex on random instances") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const std::size_t n = 1 + seed % 6;
    const std::size_t m = 1 + seed % 4;
    const MskcInstance inst = gen_random({n, m, 3, seed, RandomProfile::Generic, {}}).mskc();
    Rational prev(0);
    for (const char* t : {"1/6", "1/2", "1", "3/2", "2"}) {
      const PhiSolution s = solve_phi(inst, R(t));
      CHECK(s.value == phi_by_simplex(inst, R(t)));
      CHECK(phi_structure_holds(inst, s));
      CHECK(s.value >= prev);
      prev = s.value;
    }
    for (std::size_t i = 0; i < inst.size(); ++i) CHECK(frontier_well_formed(eliminate_dominated(inst.item(i), R("1"))));
    const Rational phi1 = solve_phi(inst, R("1")).value;
    for (const char* c : {"1", "3/2", "2", "3"}) CHECK(solve_phi(inst, R(c)).value <= R(c) * phi1);
  }
}

TEST_CASE("structure_solution keeps structured input") {
  const MskcInstance inst = gen_random({4, 3, 3, 7, RandomProfile::PositiveW, {}}).mskc();
  const PhiSolution s = solve_phi(inst, R("1"));
  const PhiSolution t = structure_solution(inst, R("1"), s.x);
  CHECK(t.x == s.x);
  CHECK(t.value == s.value);
}

TEST_CASE("structure_solution resolves two split items") {
  const MskcItem it = item("4", {{"2", dist({{"1/4", "1"}})}, {"1", dist({{"3/4", "1"}})}});
  const MskcInstance inst({it, it});
  const std::vector<std::vector<Rational>> x{{R("0"), R("1/2"), R("1/2")}, {R("0"), R("1/2"), R("1/2")}};
  CHECK(phi_objective(inst, R("1"), x) == Rational(5));
  const PhiSolution s = structure_solution(inst, R("1"), x);
  CHECK(s.value == Rational(5));
  CHECK(phi_structure_holds(inst, s));
  CHECK_FALSE(s.fractional.has_value());
  CHECK(solve_phi(inst, R("1")).value == Rational(5));
}

TEST_CASE("structure_solution projects off dominated choices") {
  const MskcInstance inst = figure_one_item();
  const std::vector<std::vector<Rational>> x{{R("0"), R("0"), R("0"), R("1")}};
  const PhiSolution s = structure_solution(inst, R("1"), x);
  CHECK(s.x[0][3] == Rational(0));
  CHECK(s.value >= phi_objective(inst, R("1"), x));
  CHECK(phi_structure_holds(inst, s));
  CHECK(s.used_capacity(inst) <= R("6/10"));
}

TEST_CASE("structure_solution improves random feasible points") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const MskcInstance inst = gen_random({4, 3, 3, seed, RandomProfile::Generic, {}}).mskc();
    // Uniform mix over all choices, scaled into capacity by the null choice.
    std::vector<std::vector<Rational>> x;
    Rational used(0);
    for (const MskcItem& it : inst.items()) {
      const Rational share(1, static_cast<long>(it.choice_count()));
      x.emplace_back(it.choice_count(), share);
      for (std::size_t j = 0; j < it.choice_count(); ++j) used += share * choice_truncated_mean(it, j, R("1"));
    }
    if (used > Rational(1)) {
      const Rational scale = Rational(1) / used;
      for (auto& row : x) {
        for (std::size_t j = 1; j < row.size(); ++j) row[j] *= scale;
        Rational rest(1);
        for (std::size_t j = 1; j < row.size(); ++j) rest -= row[j];
        row[0] = rest;
      }
    }
    const PhiSolution s = structure_solution(inst, R("1"), x);
    CHECK(phi_structure_holds(inst, s));
    CHECK(s.value >= phi_objective(inst, R("1"), x));
    CHECK(s.used_capacity(inst) <= Rational(1));
  }
}

TEST_CASE("structure_solution rejects infeasible input") {
  const MskcInstance inst = figure_one_item();
  CHECK_THROWS_AS(structure_solution(inst, R("1"), {{R("1/2"), R("0"), R("0"), R("0")}}), InfeasibleInput);
  // Truncated means never exceed t, so over-capacity needs two items.
  const MskcInstance pair({inst.item(0), inst.item(0)});
  CHECK_THROWS_AS(structure_solution(pair, R("1/10"), {{R("0"), R("0"), R("1"), R("0")}, {R("0"), R("0"), R("1"), R("0")}}),
                  InfeasibleInput);
}
