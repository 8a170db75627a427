#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"
#include "kc/errors.hpp"

using namespace kc;
using kc::test::dist;
using kc::test::item;
using kc::test::R;

TEST_CASE("rational parsing and normalization") {
  CHECK(R("2/4") == Rational(1, 2));
  CHECK(R("-3/6").str() == "-1/2");
  CHECK(R("0.125") == Rational(1, 8));
  CHECK(R("7").str() == "7");
  CHECK(R("1/3") * Rational(3) == Rational(1));
  CHECK_THROWS_AS(R("1/0"), ParseError);
  CHECK_THROWS_AS(R("abc"), ParseError);
  CHECK_THROWS_AS(R(""), ParseError);
}

TEST_CASE("rational bit cap reports overflow") {
  const std::size_t old = Rational::bit_cap();
  Rational::set_bit_cap(64);
  CHECK_THROWS_AS(pow(Rational(1, 3), 100), RationalOverflow);
  Rational::set_bit_cap(old);
  CHECK(pow(Rational(1, 3), 100).bit_length() > 64);
}

TEST_CASE("distribution canonical form") {
  const auto d = dist({{"1", "1/4"}, {"0", "1/2"}, {"1", "1/4"}});
  REQUIRE(d.support_size() == 2);
  CHECK(d.atoms()[0].size == Rational(0));
  CHECK(d.atoms()[1].prob == Rational(1, 2));
  CHECK_THROWS_AS(dist({{"0", "1/2"}}), InvalidDistribution);
  CHECK_THROWS_AS(dist({{"-1", "1"}}), InvalidDistribution);
  CHECK(dist({{"0", "0"}, {"2", "1"}}).support_size() == 1);
}

TEST_CASE("cdf_at") {
  const auto d = dist({{"0", "9/10"}, {"1", "1/10"}});
  CHECK(cdf_at(d, R("1")) == Rational(1));
  CHECK(cdf_at(d, R("1/2")) == R("9/10"));
  CHECK(cdf_at(dist({{"1/2", "1"}}), R("1/4")) == Rational(0));
}

TEST_CASE("truncated_mean") {
  CHECK(truncated_mean(dist({{"0", "9/10"}, {"1", "1/10"}}), R("1")) == R("1/10"));
  CHECK(truncated_mean(dist({{"3", "1"}}), R("1")) == Rational(1));
  CHECK(truncated_mean(dist({{"1/4", "1/2"}, {"2", "1/2"}}), R("1")) == R("5/8"));
  CHECK_THROWS(truncated_mean(dist({{"1", "1"}}), R("0")));
}

TEST_CASE("raw_moment") {
  CHECK(raw_moment(dist({{"0", "1/2"}, {"1", "1/2"}}), 3) == R("1/2"));
  CHECK(raw_moment(dist({{"1/2", "1"}}), 2) == R("1/4"));
  CHECK(raw_moment(dist({{"1/2", "1/2"}, {"1", "1/2"}}), 2) == R("5/8"));
  CHECK_THROWS(raw_moment(dist({{"1", "1"}}), 0));
}

TEST_CASE("choice_weight") {
  const auto a = item("2", {{"19/10", dist({{"0", "9/10"}, {"1", "1/10"}})}});
  CHECK(choice_weight(a, 1, R("1")) == R("1/10"));
  CHECK(choice_weight(a, kNullChoice, R("1")) == Rational(0));
  CHECK(choice_weight(a, kNullChoice, R("1/3")) == Rational(0));
  const auto b = item("1", {{"2", dist({{"1/2", "1"}})}});
  CHECK(choice_weight(b, 1, R("1")) == Rational(-1));
}

TEST_CASE("null choice is always present") {
  const auto a = item("3", {});
  CHECK(a.choice_count() == 1);
  CHECK(a.choice(kNullChoice).cost == Rational(0));
  CHECK(a.choice(kNullChoice).dist == FiniteDistribution::point_mass(Rational(0)));
}

TEST_CASE("distribution query invariants") {
  const auto d = dist({{"1/5", "1/3"}, {"3/5", "1/3"}, {"7/5", "1/3"}});
  Rational prev(0);
  for (int k = 0; k <= 30; ++k) {
    const Rational b(k, 20);
    const Rational c = cdf_at(d, b);
    CHECK(c >= prev);
    prev = c;
  }
  CHECK(cdf_at(d, d.max_size()) == Rational(1));
  for (const char* t : {"1/10", "1/2", "1", "7/5", "2"}) {
    const Rational mu = truncated_mean(d, R(t));
    CHECK(mu <= min(raw_moment(d, 1), R(t)));
  }
  CHECK(truncated_mean(d, R("7/5")) == raw_moment(d, 1));
}

TEST_CASE("contract agent sorts actions by cost") {
  ContractAgent agent(R("1"), {ContractAction{R("2"), dist({{"1", "1"}})}, ContractAction{R("0"), dist({{"0", "1"}})}});
  CHECK(agent.action(0).cost == Rational(0));
  CHECK(agent.support() == std::vector<Rational>{Rational(0), Rational(1)});
  CHECK_THROWS_AS(ContractAgent(R("1"), {}), InvalidInstance);
}
