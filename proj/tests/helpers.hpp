#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "kc/core.hpp"

namespace kc::test {

inline Rational R(const char* text) { return Rational::parse(text); }

inline FiniteDistribution dist(std::initializer_list<std::pair<const char*, const char*>> atoms) {
  std::vector<Atom> out;
  for (const auto& [s, p] : atoms) out.push_back(Atom{R(s), R(p)});
  return FiniteDistribution(std::move(out));
}

inline MskcItem item(const char* value, std::initializer_list<std::pair<const char*, FiniteDistribution>> choices) {
  std::vector<MskcChoice> cs;
  for (const auto& [cost, d] : choices) cs.push_back(MskcChoice{R(cost), d});
  return MskcItem(R(value), std::move(cs));
}

}  // namespace kc::test
