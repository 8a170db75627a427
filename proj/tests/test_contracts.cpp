#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "helpers.hpp"
#include "kc/contracts.hpp"
#include "kc/errors.hpp"
#include "kc/instances.hpp"

using namespace kc;
using kc::test::dist;
using kc::test::item;
using kc::test::R;

namespace {

ContractAgent two_action_agent() {
  return ContractAgent(R("3"), {ContractAction{R("0"), dist({{"1", "1"}})},
                                ContractAction{R("1"), dist({{"0", "1/2"}, {"1", "1/2"}})}});
}

}  // namespace

TEST_CASE("single action with and without participation") {
  const ContractAgent agent(R("2"), {ContractAction{R("1"), dist({{"0", "1/2"}, {"1", "1/2"}})}});
  const IncentivizedChoice with_ir = min_payment_contract(agent, 0, true);
  CHECK(with_ir.expected_transfer == Rational(1));
  CHECK(with_ir.contract.payment_at(R("0")) == Rational(1));
  CHECK(with_ir.contract.payment_at(R("1")) == Rational(1));
  const IncentivizedChoice without = min_payment_contract(agent, 0, false);
  CHECK(without.expected_transfer == Rational(0));
  CHECK(without.contract.payment_at(R("0")) == Rational(0));
  CHECK(without.contract.payment_at(R("1")) == Rational(0));
}

TEST_CASE("two-action agent, incentivize high effort") {
  const IncentivizedChoice c = min_payment_contract(two_action_agent(), 1, true);
  CHECK(c.contract.payment_at(R("0")) == Rational(2));
  CHECK(c.contract.payment_at(R("1")) == Rational(0));
  CHECK(c.expected_transfer == Rational(1));
  CHECK(c.contract.is_monotone());
}

// Vertex enumeration of the 2-variable contract LP: t0 >= t1 >= 0,
// IC: t0/2 + t1/2 - 1 >= t1, IR: t0/2 + t1/2 >= 1.
TEST_CASE("two-action LP matches vertex enumeration") {
  Rational best;
  bool any = false;
  for (int a = 0; a <= 40; ++a) {
    for (int b = 0; b <= a; ++b) {
      const Rational t0(a, 10);
      const Rational t1(b, 10);
      if (t0 / Rational(2) + t1 / Rational(2) - Rational(1) < t1) continue;
      if (t0 / Rational(2) + t1 / Rational(2) < Rational(1)) continue;
      const Rational obj = t0 / Rational(2) + t1 / Rational(2);
      if (!any || obj < best) best = obj;
      any = true;
    }
  }
  REQUIRE(any);
  CHECK(best == Rational(1));
  CHECK(solve_lp_exact(contract_lp(two_action_agent(), 1, true)).value == best);
}

TEST_CASE("implementable actions") {
  const ContractAgent single(R("1"), {ContractAction{R("1/2"), dist({{"1", "1"}})}});
  REQUIRE(implementable_actions(single).size() == 1);

  const auto d = dist({{"0", "1/2"}, {"1", "1/2"}});
  const ContractAgent twins(R("1"), {ContractAction{R("0"), d}, ContractAction{R("1"), d}});
  const auto acts = implementable_actions(twins);
  REQUIRE(acts.size() == 1);
  CHECK(acts[0].action == 0);
  CHECK_THROWS_AS(min_payment_contract(twins, 1), NotImplementable);

  const InstanceBundle gap = gen_alpha_gap(R("1/10"), R("1/4"));
  for (const ContractAgent& a : gap.contracts().agents()) {
    const auto r = implementable_actions(a);
    REQUIRE(r.size() == 1);
    CHECK(r[0].expected_transfer == a.action(0).cost);
  }
}

TEST_CASE("reduction to MSKC") {
  const InstanceBundle gap = gen_alpha_gap(R("1/10"), R("1/4"));
  const Reduction red = reduce_to_mskc(gap.contracts());
  REQUIRE(red.instance.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    const MskcItem& it = red.instance.item(i);
    CHECK(it.value() == Rational(2));
    REQUIRE(it.real_choice_count() == 1);
    CHECK(it.choice(1).cost == R("19/10"));
    CHECK(it.choice(1).dist == gap.contracts().agent(i).action(0).dist);
    CHECK(red.source(i, 1).agent == i);
  }

  const ContractInstance zero({ContractAgent(R("1"), {ContractAction{R("0"), dist({{"1/2", "1"}})}})});
  const Reduction rz = reduce_to_mskc(zero);
  CHECK(rz.instance.item(0).choice_count() == 2);
  CHECK(rz.instance.item(0).choice(1).cost == Rational(0));

  const Reduction r2 = reduce_to_mskc(ContractInstance({two_action_agent()}));
  REQUIRE(r2.instance.item(0).real_choice_count() == 2);
  CHECK(r2.instance.item(0).choice(1).cost == Rational(0));
  CHECK(r2.instance.item(0).choice(2).cost == Rational(1));
}

TEST_CASE("IOR") {
  CHECK(compute_ior(reduce_to_mskc(gen_alpha_gap(R("1/10"), R("1/4")).contracts()).instance) == Rational(19));
  const MskcInstance one({item("2", {{"1", dist({{"1", "1"}})}})});
  CHECK(compute_ior(one) == Rational(1));
  CHECK(compute_ior(gen_fully_vs_stop(R("1/2"), R("1/4"), 1).mskc()) == Rational(119));

  const MskcInstance none({item("1", {{"2", dist({{"0", "1"}})}})});
  CHECK_THROWS_AS(compute_ior(none), NoPositiveChoice);

  const MskcInstance mixed({item("2", {{"1", dist({{"1", "1"}})}, {"3", dist({{"0", "1"}})}})});
  const IorResult r = compute_ior_detailed(mixed);
  CHECK(r.alpha == Rational(1));
  REQUIRE(r.excluded.size() == 1);
  CHECK(r.excluded[0] == std::make_pair(std::size_t{0}, std::size_t{2}));
}

TEST_CASE("IOR invariant under duplicating items") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const MskcInstance inst = gen_random({3, 2, 3, seed, RandomProfile::PositiveW, {}}).mskc();
    std::vector<MskcItem> doubled(inst.items().begin(), inst.items().end());
    doubled.insert(doubled.end(), inst.items().begin(), inst.items().end());
    CHECK(compute_ior(MskcInstance(doubled)) == compute_ior(inst));
  }
}

// Random monotone contracts that satisfy every constraint never beat the LP.
TEST_CASE("optimal contract beats sampled feasible contracts") {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const ContractInstance ci = gen_random_contract(1, 3, 3, seed).contracts();
    const ContractAgent& agent = ci.agent(0);
    const std::vector<Rational> support = agent.support();
    for (const IncentivizedChoice& opt : implementable_actions(agent)) {
      CHECK(opt.contract.is_monotone());
      const LpProblem lp = contract_lp(agent, opt.action, true);
      for (int trial = 0; trial < 300; ++trial) {
        std::vector<Rational> t(support.size());
        long level = std::uniform_int_distribution<long>(0, 40)(rng);
        for (std::size_t k = 0; k < support.size(); ++k) {
          t[k] = Rational(level, 10);
          level -= std::uniform_int_distribution<long>(0, std::max(0L, level))(rng);
        }
        if (!lp_feasible(lp, t)) continue;
        Contract c;
        for (std::size_t k = 0; k < support.size(); ++k) c.payments.emplace(support[k], t[k]);
        CHECK(c.expected_transfer(agent.action(opt.action).dist) >= opt.expected_transfer);
      }
    }
  }
}
