#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <random>

#include "helpers.hpp"
#include "kc/contracts.hpp"
#include "kc/errors.hpp"
#include "kc/instances.hpp"
#include "kc/policies.hpp"

using namespace kc;
using kc::test::R;

namespace {

// Gauss-Jordan on the (k+1)x(k+1) system sum_j t_j^r x_j = rhs_r.
std::vector<Rational> gauss_vandermonde(const std::vector<Rational>& t, const std::vector<Rational>& rhs) {
  const std::size_t n = t.size();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < n; ++j) a[r][j] = pow(t[j], static_cast<unsigned>(r));
    a[r][n] = rhs[r];
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (a[p][c].is_zero()) ++p;
    std::swap(a[p], a[c]);
    const Rational inv = Rational(1) / a[c][c];
    for (Rational& v : a[c]) v *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c].is_zero()) continue;
      const Rational f = a[r][c];
      for (std::size_t k = 0; k <= n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t r = 0; r < n; ++r) x[r] = a[r][n];
  return x;
}

Rational first_cost(const InstanceBundle& b) {
  const MskcInstance inst = b.is_contract() ? reduce_to_mskc(b.contracts()).instance : b.mskc();
  return compute_ior(inst);
}

}  // namespace

TEST_CASE("alpha-gap sizes") {
  const InstanceBundle b = gen_alpha_gap(R("1/10"), R("1/4"));
  REQUIRE(b.is_contract());
  const ContractInstance& ci = b.contracts();
  REQUIRE(ci.size() == 10);
  CHECK(first_cost(b) == Rational(19));
  const auto a = gap_small_sizes(R("1/4"), 10);
  const auto bb = gap_large_sizes(a);
  Rational prefix(0);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(prefix + bb[i] == Rational(1));
    prefix += a[i];
    CHECK(ci.agent(i).action(0).dist.mass_at(a[i]) == R("9/10"));
    CHECK(ci.agent(i).action(0).dist.mass_at(bb[i]) == R("1/10"));
    CHECK(ci.agent(i).action(0).cost == R("19/10"));
    for (std::size_t k = i + 1; k < 10; ++k) CHECK(bb[i] + a[k] > Rational(1));
  }
  CHECK(a[0] == pow(R("1/4"), 10));
  CHECK(a[9] == R("1/4"));

  const InstanceBundle c = gen_alpha_gap(R("1/3"), R("1/3"));
  CHECK(c.contracts().size() == 3);
  CHECK(gap_large_sizes(gap_small_sizes(R("1/3"), 3))[0] == Rational(1));
  CHECK_THROWS_AS(gen_alpha_gap(R("1/2"), R("1/4")), ParameterOutOfRange);
  CHECK_THROWS_AS(gen_alpha_gap(R("1/10"), R("1/2")), ParameterOutOfRange);
}

TEST_CASE("fully-vs-stop family") {
  const InstanceBundle b = gen_fully_vs_stop(R("1/5"), R("1/4"), 3);
  const MskcInstance& inst = b.mskc();
  CHECK(inst.size() == 15);
  CHECK(compute_ior(inst) == Rational(1874));
  CHECK(inst.item(0).value() == Rational(75));
  CHECK(inst.item(0).choice(1).cost == R("75") - R("1/25"));
  for (const MskcItem& it : inst.items()) {
    Rational total(0);
    for (const Atom& a : it.choice(1).dist.atoms()) total += a.prob;
    CHECK(total == Rational(1));
    CHECK(it.choice(1).dist.mass_at(Rational(0)) == R("19/25"));
  }
  // Type-major: copies of the first type come first.
  CHECK(inst.item(0) == inst.item(2));
  CHECK_FALSE(inst.item(2) == inst.item(3));
  CHECK_THROWS_AS(gen_fully_vs_stop(R("1/5"), R("1/4"), 0), ParameterOutOfRange);
  CHECK_THROWS_AS(gen_fully_vs_stop(R("9/10"), R("1/4"), 1), ParameterOutOfRange);
}

TEST_CASE("LP-gap and bounded-gap families") {
  const InstanceBundle l = gen_lp_gap(R("1/10"), 5);
  CHECK(l.mskc().size() == 5);
  CHECK(compute_ior(l.mskc()) == Rational(9));
  CHECK(l.mskc().item(0).choice(1).dist.min_size() == pow(R("1/10"), 5));
  CHECK_THROWS_AS(gen_lp_gap(R("1/10"), 4), ParameterOutOfRange);

  const InstanceBundle g = gen_bounded_gap(R("1/10"), 6);
  CHECK(compute_ior(g.mskc()) == Rational(199));
  for (const MskcItem& it : g.mskc().items()) CHECK(it.choice(1).dist.max_size() == R("1/2"));
  CHECK_THROWS_AS(gen_bounded_gap(R("1/2"), 6), ParameterOutOfRange);
}

TEST_CASE("transposed Vandermonde solve matches elimination") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 1 + rep % 5;
    std::vector<Rational> nodes;
    while (nodes.size() < n) {
      const Rational t(std::uniform_int_distribution<long>(-20, 20)(rng), 7);
      if (std::find(nodes.begin(), nodes.end(), t) == nodes.end()) nodes.push_back(t);
    }
    std::vector<Rational> rhs;
    for (std::size_t r = 0; r < n; ++r) rhs.emplace_back(std::uniform_int_distribution<long>(-9, 9)(rng), 5);
    CHECK(solve_transposed_vandermonde(nodes, rhs) == gauss_vandermonde(nodes, rhs));
  }
}

TEST_CASE("moment matching") {
  const Rational eps = R("1/10");
  for (std::size_t k = 1; k <= 3; ++k) {
    for (const char* d : {"1/10000", "1/100000"}) {
      const MomentMatch mm = solve_moment_match(k, eps, R(d));
      REQUIRE(mm.support.size() == k + 1);
      CHECK(mm.support.back() == Rational(1));
      for (std::size_t j = 0; j < k; ++j) CHECK(mm.support[j] == Rational(1) - pow(R("1/2"), static_cast<unsigned>(j + 1)));
      Rational sx(0);
      Rational sp(0);
      for (const Rational& x : mm.x) sx += x;
      for (const Rational& p : mm.p) {
        CHECK(p.sign() >= 0);
        sp += p;
      }
      CHECK(sx == Rational(0));
      CHECK(sp == eps);
      const auto [good, bad] = info_gap_types(k, eps, R(d));
      for (unsigned r = 1; r <= k; ++r) CHECK(raw_moment(good, r) == raw_moment(bad, r));
      CHECK(raw_moment(good, static_cast<unsigned>(k + 1)) != raw_moment(bad, static_cast<unsigned>(k + 1)));
      CHECK(cdf_at(good, R("1")) == Rational(1));
      CHECK(cdf_at(bad, R("1")) == Rational(1));
      CHECK(bad.mass_at(R(d)) == Rational(1) - Rational(2) * eps);
    }
  }
  CHECK_NOTHROW(solve_moment_match(2, eps, R("1/1000")));
  // p_2 = -12527883/78125000 at k = 3.
  CHECK_THROWS_AS(solve_moment_match(3, eps, R("1/1000")), DeltaTooLarge);
  CHECK_THROWS_AS(solve_moment_match(2, eps, R("1/100")), DeltaTooLarge);
}

TEST_CASE("information-gap warm-up pair") {
  const auto [good, bad] = info_gap_types(0, R("1/10"), R("1/1000"));
  CHECK(good.mass_at(Rational(0)) == R("9/10"));
  CHECK(good.mass_at(Rational(1)) == R("1/10"));
  CHECK(bad.mass_at(R("1/20")) == Rational(1) - R("1/19"));
  CHECK(bad.mass_at(Rational(1)) == R("1/19"));
  CHECK(raw_moment(good, 1) == R("1/10"));
  CHECK(raw_moment(bad, 1) == R("1/10"));

  const InstanceBundle b = gen_info_gap(2, R("1/10"), R("1/1000"), 5);
  CHECK(b.mskc().size() == 25);
  for (const MskcItem& it : b.mskc().items()) {
    CHECK(it.value() == Rational(2));
    CHECK(it.choice(1).cost == R("19/10"));
    CHECK(cdf_at(it.choice(1).dist, R("1")) == Rational(1));
  }
}

TEST_CASE("information-gap good items alone: finite-n adaptive value") {
  // Identical good items: continuing until the first unit size is optimal.
  const InstanceBundle b = gen_info_gap(0, R("1/10"), R("1/1000"), 20);
  std::vector<MskcItem> good(b.mskc().items().begin(), b.mskc().items().begin() + 20);
  const MskcInstance inst(good);
  std::vector<std::pair<std::size_t, std::size_t>> id;
  for (std::size_t i = 0; i < inst.size(); ++i) id.emplace_back(i, 1);
  const StoppingTimePolicy p = optimal_stopping_rule(inst, order_of(id));
  CHECK(stopping_value(p, inst) == Rational(1) - pow(R("9/10"), 20));
}

TEST_CASE("random generator") {
  const RandomSpec spec{4, 3, 3, 17, RandomProfile::Generic, R("1/4")};
  CHECK(gen_random(spec) == gen_random(spec));
  RandomSpec other = spec;
  other.seed = 18;
  CHECK_FALSE(gen_random(spec) == gen_random(other));

  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const MskcInstance pw = gen_random({4, 3, 3, seed, RandomProfile::PositiveW, R("1/4")}).mskc();
    CHECK_NOTHROW(compute_ior(pw));
    for (const MskcItem& it : pw.items()) {
      CHECK(it.real_choice_count() == 3);
      for (std::size_t j = 1; j < it.choice_count(); ++j) {
        CHECK(it.choice(j).dist.support_size() <= 3);
        CHECK(it.choice(j).dist.max_size() <= Rational(1));
      }
    }

    const MskcInstance bs = gen_random({4, 3, 3, seed, RandomProfile::BoundedSize, R("1/4")}).mskc();
    const Rational alpha = compute_ior(bs);
    const Rational limit = Rational(1) / (Rational(2 * 4) * alpha);
    for (const MskcItem& it : bs.items()) {
      for (std::size_t j = 1; j < it.choice_count(); ++j) {
        CHECK(Rational(1) - cdf_at(it.choice(j).dist, R("3/4")) <= limit);
      }
    }
  }

  const InstanceBundle c = gen_random_contract(3, 3, 3, 4);
  REQUIRE(c.is_contract());
  CHECK(c.contracts() == gen_random_contract(3, 3, 3, 4).contracts());
  CHECK_NOTHROW(reduce_to_mskc(c.contracts()));
}

TEST_CASE("JSON round trip") {
  std::vector<InstanceBundle> bundles{gen_alpha_gap(R("1/10"), R("1/4")), gen_fully_vs_stop(R("1/5"), R("1/4"), 2),
                                      gen_info_gap(2, R("1/10"), R("1/1000"), 3), gen_lp_gap(R("1/10"), 5),
                                      gen_bounded_gap(R("1/10"), 6), gen_random({4, 3, 3, 9, RandomProfile::BoundedSize, R("1/4")}),
                                      gen_random_contract(3, 2, 3, 1)};
  for (const InstanceBundle& b : bundles) CHECK(from_json_text(to_json_text(b)) == b);

  const std::string path = "kc_test_roundtrip.json";
  write_json(bundles[2], path);
  CHECK(read_json(path) == bundles[2]);
  std::remove(path.c_str());
}

TEST_CASE("JSON parsing details") {
  const InstanceBundle b = from_json_text(
      R"({"items":[{"value":"1","choices":[{"cost":"1/3","dist":[["1/3","1/3"],["2/3","2/3"]]}]}]})");
  CHECK(b.family == "custom");
  CHECK(b.mskc().budget() == Rational(1));
  CHECK(b.mskc().item(0).choice(1).cost == Rational(1, 3));
  CHECK(b.mskc().item(0).choice(1).dist.mass_at(Rational(1, 3)) == Rational(1, 3));

  try {
    from_json_text(R"({"items":[{"value":"1","choices":[]},{"value":"1","choices":[{"cost":"0","dist":[["1","1/2"]]}]}]})");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("items[1]") != std::string::npos);
  }
  CHECK_THROWS_AS(from_json_text("{"), ParseError);
  CHECK_THROWS_AS(from_json_text(R"({"items":[{"value":"x","choices":[]}]})"), ParseError);
  CHECK_THROWS_AS(from_json_text(R"({"items":[{"choices":[]}]})"), ParseError);
  CHECK_THROWS_AS(read_json("/nonexistent/kc.json"), ParseError);
}
