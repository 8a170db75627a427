#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <functional>

#include "helpers.hpp"
#include "kc/contracts.hpp"
#include "kc/engine.hpp"
#include "kc/errors.hpp"
#include "kc/instances.hpp"
#include "kc/oracle.hpp"
#include "kc/phi.hpp"
#include "kc/policies.hpp"

using namespace kc;
using kc::test::dist;
using kc::test::item;
using kc::test::R;

namespace {

Rational w_max(const MskcInstance& inst, const Rational& t) {
  Rational best(0);
  for (const MskcItem& it : inst.items()) {
    for (std::size_t j = 1; j < it.choice_count(); ++j) best = max(best, choice_weight(it, j, t));
  }
  return best;
}

// Every ordered subset with every choice assignment, scored by the engine.
Rational brute_nonadapt(const MskcInstance& inst) {
  Rational best(0);
  std::vector<std::pair<std::size_t, std::size_t>> seq;
  std::vector<bool> used(inst.size(), false);
  std::function<void()> rec = [&] {
    best = max(best, expected_profit_exact(order_of(seq), inst));
    for (std::size_t i = 0; i < inst.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      for (std::size_t j = 1; j < inst.item(i).choice_count(); ++j) {
        seq.emplace_back(i, j);
        rec();
        seq.pop_back();
      }
      used[i] = false;
    }
  };
  rec();
  return best;
}

MskcInstance alpha_gap(std::size_t n) {
  return reduce_to_mskc(gen_alpha_gap(R("1/10"), R("1/4"), n).contracts()).instance;
}

}  // namespace

TEST_CASE("single-item values") {
  const MskcInstance one({item("2", {{"1", dist({{"1/2", "1"}})}})});
  CHECK(adapt_opt(one).value == Rational(1));
  CHECK(nonadapt_opt(one).value == Rational(1));
  CHECK(stopadapt_opt(one).value == Rational(1));

  const MskcInstance big({item("2", {{"1", dist({{"1/2", "1/3"}, {"3", "2/3"}})}})});
  CHECK(adapt_of_opt(big).value == Rational(1));
  CHECK(adapt_opt(big).value == Rational(0));

  const MskcInstance two({item("3", {{"2", dist({{"1/2", "1/2"}, {"2", "1/2"}})}, {"1", dist({{"1", "1"}})}})});
  CHECK(nonadapt_opt(two).value == max(Rational(0), max(choice_weight(two.item(0), 1, R("1")),
                                                       choice_weight(two.item(0), 2, R("1")))));
}

TEST_CASE("LP-gap: one job is optimal") {
  const MskcInstance inst = gen_lp_gap(R("1/10"), 5).mskc();
  const OracleResult r = adapt_opt(inst);
  CHECK(r.value == R("1/10"));
  CHECK(solve_phi(inst, R("1")).value >= R("1/2"));
}

TEST_CASE("alpha-gap: non-adaptive and stopping values") {
  const MskcInstance inst = alpha_gap(6);
  CHECK(nonadapt_opt(inst).value == R("1/10"));
  const OracleResult s = stopadapt_opt(inst);
  CHECK(s.value >= Rational(1) - pow(R("9/10"), 6));
  CHECK(expected_profit_exact(s.policy, inst) == s.value);
}

TEST_CASE("bounded-gap: non-adaptive optimum") {
  const MskcInstance inst = gen_bounded_gap(R("1/10"), 6).mskc();
  const OracleResult r = nonadapt_opt(inst);
  CHECK(r.value == R("1/50"));
  CHECK(expected_profit_exact(r.policy, inst) == R("1/50"));
}

TEST_CASE("stopping oracle when everything fits") {
  const MskcItem a = item("2", {{"1", dist({{"1/10", "1"}})}, {"1/2", dist({{"1/5", "1"}})}});
  const MskcItem b = item("3", {{"1", dist({{"1/4", "1"}})}});
  const MskcInstance inst({a, b, a});
  CHECK(stopadapt_opt(inst).value == R("3/2") + Rational(2) + R("3/2"));
  CHECK(adapt_opt(inst).value == Rational(5));
}

TEST_CASE("policy-class ordering and LP bounds on random instances") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const std::size_t n = 2 + seed % 3;
    const MskcInstance inst = gen_random({n, 2, 3, seed, RandomProfile::Generic, {}}).mskc();
    const OracleResult ad = adapt_opt(inst);
    const OracleResult st = stopadapt_opt(inst);
    const OracleResult na = nonadapt_opt(inst);
    const OracleResult of = adapt_of_opt(inst);
    const OracleResult od = ordered_adapt_opt(inst);
    CHECK(ad.value >= st.value);
    CHECK(st.value >= na.value);
    CHECK(na.value >= Rational(0));
    CHECK(of.value >= ad.value);
    CHECK(ad.value >= od.value);
    for (const OracleResult* r : {&ad, &st, &na, &od}) CHECK(expected_profit_exact(r->policy, inst) == r->value);
    EngineOptions ofo;
    ofo.overflow_collects = true;
    CHECK(expected_profit_exact(of.policy, inst, ofo) == of.value);

    const Rational phi1 = solve_phi(inst, R("1")).value;
    const Rational phi2 = solve_phi(inst, R("2")).value;
    CHECK(ad.value <= phi2);
    CHECK(phi2 <= Rational(2) * phi1);
    CHECK(of.value <= Rational(2) * phi1 + w_max(inst, R("1")));
  }
}

TEST_CASE("non-adaptive oracle matches brute force") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const MskcInstance inst = gen_random({1 + seed % 3, 2, 2, seed, RandomProfile::Generic, {}}).mskc();
    CHECK(nonadapt_opt(inst).value == brute_nonadapt(inst));
  }
}

TEST_CASE("sequence step profits add up") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const MskcInstance inst = gen_random({4, 2, 3, seed, RandomProfile::Generic, {}}).mskc();
    const std::vector<std::pair<std::size_t, std::size_t>> seq{{2, 1}, {0, 2}, {3, 1}, {1, 1}};
    Rational sum(0);
    for (const Rational& p : sequence_step_profits(inst, seq)) sum += p;
    CHECK(sum == expected_profit_exact(order_of(seq), inst));
  }
}

TEST_CASE("oracle limits") {
  const MskcInstance inst = alpha_gap(10);
  CHECK_THROWS_AS(nonadapt_opt(inst), StateSpaceTooLarge);
  CHECK_THROWS_AS(stopadapt_opt(inst), StateSpaceTooLarge);
  CHECK_THROWS_AS(adapt_opt(inst), StateSpaceTooLarge);
  OracleLimits tight;
  tight.state_cap = 4;
  CHECK_THROWS_AS(adapt_opt(alpha_gap(6), false, tight), StateSpaceTooLarge);
}
