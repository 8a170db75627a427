#include "kc/policy_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "kc/errors.hpp"

namespace kc {
namespace {

using json = nlohmann::json;

Rational rat(const json& j, const char* what) {
  if (!j.is_string()) throw ParseError(std::string(what) + ": expected a rational string");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const Error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

json steps_json(const NonAdaptivePolicy& p) {
  json steps = json::array();
  for (const NonAdaptiveStep& s : p.steps) {
    json js{{"item", s.item}, {"choice", s.choice}};
    if (s.mix) {
      js["mix"] = {{"first", s.mix->first},
                   {"second", s.mix->second},
                   {"first_weight", s.mix->first_weight.str()},
                   {"second_weight", s.mix->second_weight.str()},
                   {"randomized", s.mix->randomized}};
    }
    steps.push_back(js);
  }
  return steps;
}

NonAdaptivePolicy steps_from(const json& arr) {
  if (!arr.is_array()) throw ParseError("steps: expected an array");
  NonAdaptivePolicy p;
  for (const json& js : arr) {
    NonAdaptiveStep s{js.at("item").get<std::size_t>(), js.at("choice").get<std::size_t>(), std::nullopt};
    if (js.contains("mix")) {
      const json& m = js.at("mix");
      s.mix = VirtualMix{m.at("first").get<std::size_t>(), m.at("second").get<std::size_t>(),
                         rat(m.at("first_weight"), "mix.first_weight"), rat(m.at("second_weight"), "mix.second_weight"),
                         m.value("randomized", false)};
    }
    p.steps.push_back(std::move(s));
  }
  return p;
}

json to_json(const Policy& policy) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, NonAdaptivePolicy>) {
          return {{"kind", "non-adaptive"}, {"steps", steps_json(p)}};
        } else if constexpr (std::is_same_v<T, StoppingTimePolicy>) {
          json rule;
          if (const auto* b = std::get_if<BudgetThreshold>(&p.rule)) {
            rule = {{"type", "threshold"}, {"theta", b->theta.str()}};
          } else if (const auto* v = std::get_if<ValueTable>(&p.rule)) {
            json entries = json::array();
            for (std::size_t k = 0; k < v->values.size(); ++k) {
              for (const auto& [cap, val] : v->values[k]) entries.push_back(json::array({k, cap.str(), val.str()}));
            }
            rule = {{"type", "value-table"}, {"steps", v->values.size()}, {"entries", entries}};
          } else {
            rule = {{"type", "none"}};
          }
          return {{"kind", "stopping-time"}, {"steps", steps_json(p.order)}, {"rule", rule}};
        } else if constexpr (std::is_same_v<T, AdaptivePolicy>) {
          if (p.rule) throw InvalidPolicy("rule-backed adaptive policies cannot be serialized");
          json table = json::array();
          for (const auto& [key, act] : p.table) {
            json row{{"attempted", key.attempted}, {"remaining", key.remaining.str()}};
            row["action"] = act ? json::array({act->item, act->choice}) : json(nullptr);
            table.push_back(row);
          }
          return {{"kind", "adaptive"}, {"table", table}};
        } else {
          json d = json::array();
          for (const auto& row : p.table.d) {
            json r = json::array();
            for (const Rational& x : row) r.push_back(x.str());
            d.push_back(r);
          }
          return {{"kind", "ordered"},
                  {"capacity", p.capacity.str()},
                  {"delta", p.table.delta.str()},
                  {"units", p.table.units},
                  {"work", p.table.work},
                  {"d", d},
                  {"best", p.table.best}};
        }
      },
      policy);
}

Policy from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "non-adaptive") return steps_from(j.at("steps"));
  if (kind == "stopping-time") {
    StoppingTimePolicy p{steps_from(j.at("steps")), std::monostate{}};
    const json& rule = j.at("rule");
    const std::string type = rule.at("type").get<std::string>();
    if (type == "threshold") {
      p.rule = BudgetThreshold{rat(rule.at("theta"), "rule.theta")};
    } else if (type == "value-table") {
      ValueTable v;
      v.values.resize(rule.at("steps").get<std::size_t>());
      for (const json& e : rule.at("entries")) {
        const auto k = e.at(0).get<std::size_t>();
        if (k >= v.values.size()) throw ParseError("rule.entries: step out of range");
        v.values[k].emplace_back(rat(e.at(1), "rule.entries capacity"), rat(e.at(2), "rule.entries value"));
      }
      for (auto& row : v.values) std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      p.rule = std::move(v);
    } else if (type != "none") {
      throw ParseError("rule.type: unknown stop rule \"" + type + "\"");
    }
    return p;
  }
  if (kind == "adaptive") {
    AdaptivePolicy p;
    for (const json& row : j.at("table")) {
      AdaptivePolicy::Key key{row.at("attempted").get<std::uint64_t>(), rat(row.at("remaining"), "table.remaining")};
      std::optional<Action> act;
      if (!row.at("action").is_null()) act = Action{row.at("action").at(0).get<std::size_t>(), row.at("action").at(1).get<std::size_t>()};
      p.table.emplace(std::move(key), act);
    }
    return p;
  }
  if (kind == "ordered") {
    OrderedAdaptivePolicy p;
    p.capacity = rat(j.at("capacity"), "capacity");
    p.table.delta = rat(j.at("delta"), "delta");
    p.table.units = j.at("units").get<std::int64_t>();
    p.table.work = j.at("work").get<std::uint64_t>();
    for (const json& row : j.at("d")) {
      std::vector<Rational> r;
      for (const json& x : row) r.push_back(rat(x, "d"));
      p.table.d.push_back(std::move(r));
    }
    p.table.best = j.at("best").get<std::vector<std::vector<std::size_t>>>();
    return p;
  }
  throw ParseError("kind: unknown policy kind \"" + kind + "\"");
}

}  // namespace

std::string policy_to_json_text(const Policy& policy) { return to_json(policy).dump(2); }

Policy policy_from_json_text(const std::string& text) {
  try {
    return from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw ParseError(std::string("policy JSON: ") + e.what());
  }
}

void write_policy(const Policy& policy, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << policy_to_json_text(policy) << '\n';
}

Policy read_policy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return policy_from_json_text(ss.str());
}

}  // namespace kc
