#include "kc/instances.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "kc/errors.hpp"

namespace kc {
namespace {

using nlohmann::json;

std::size_t ceil_inverse(const Rational& eps) {
  const Rational inv = Rational(1) / eps;
  const std::int64_t f = inv.floor_int();
  return static_cast<std::size_t>(inv.is_integer() ? f : f + 1);
}

void require_open_interval(const Rational& x, const Rational& lo, const Rational& hi, const std::string& name) {
  if (x <= lo || x >= hi) {
    throw ParameterOutOfRange(name + " = " + x.str() + " must lie in (" + lo.str() + ", " + hi.str() + ")");
  }
}

MskcInstance identical_jobs(const Rational& value, const Rational& cost, const FiniteDistribution& dist,
                            std::size_t copies) {
  std::vector<MskcItem> items;
  for (std::size_t c = 0; c < copies; ++c) items.emplace_back(value, std::vector<MskcChoice>{MskcChoice{cost, dist}});
  return MskcInstance(std::move(items));
}

// ---- JSON ----

Rational rational_field(const json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw ParseError(where + ": expected a rational string");
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing field \"" + key + "\"");
  return j.at(key);
}

const json& array_field(const json& j, const char* key, const std::string& where) {
  const json& a = field(j, key, where);
  if (!a.is_array()) throw ParseError(where + "." + key + ": expected an array");
  return a;
}

json dist_json(const FiniteDistribution& d) {
  json out = json::array();
  for (const Atom& a : d.atoms()) out.push_back(json::array({a.size.str(), a.prob.str()}));
  return out;
}

FiniteDistribution dist_from(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected a list of [size, prob] pairs");
  std::vector<Atom> atoms;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string w = where + "[" + std::to_string(k) + "]";
    if (!j[k].is_array() || j[k].size() != 2) throw ParseError(w + ": expected [size, prob]");
    atoms.push_back(Atom{rational_field(j[k][0], w + ".size"), rational_field(j[k][1], w + ".prob")});
  }
  try {
    return FiniteDistribution(std::move(atoms));
  } catch (const Error& e) {
    throw ParseError(where + ": " + e.what());
  }
}

}  // namespace

std::vector<Rational> gap_small_sizes(const Rational& gamma, std::size_t n) {
  std::vector<Rational> a;
  for (std::size_t i = 1; i <= n; ++i) a.push_back(pow(gamma, static_cast<unsigned>(n - i + 1)));
  return a;
}

std::vector<Rational> gap_large_sizes(const std::vector<Rational>& a) {
  std::vector<Rational> b;
  Rational prefix(0);
  for (const Rational& ai : a) {
    b.push_back(Rational(1) - prefix);
    prefix += ai;
  }
  return b;
}

InstanceBundle gen_alpha_gap(const Rational& eps, const Rational& gamma, std::optional<std::size_t> n_override) {
  require_open_interval(eps, Rational(0), Rational(1, 2), "eps");
  require_open_interval(gamma, Rational(0), Rational(1, 2), "gamma");
  const std::size_t n = n_override.value_or(ceil_inverse(eps));
  if (n == 0) throw ParameterOutOfRange("n must be positive");
  const std::vector<Rational> a = gap_small_sizes(gamma, n);
  const std::vector<Rational> b = gap_large_sizes(a);
  std::vector<ContractAgent> agents;
  for (std::size_t i = 0; i < n; ++i) {
    FiniteDistribution d({Atom{a[i], Rational(1) - eps}, Atom{b[i], eps}});
    agents.emplace_back(Rational(2), std::vector<ContractAction>{ContractAction{Rational(2) - eps, std::move(d)}});
  }
  InstanceBundle out;
  out.family = "alpha-gap";
  out.params = {{"eps", eps.str()}, {"gamma", gamma.str()}, {"n", std::to_string(n)}};
  out.instance = ContractInstance(std::move(agents));
  out.claims = {{"alpha", ((Rational(2) - eps) / eps).str()},
                {"nonadapt", eps.str()},
                {"stop_identity", (Rational(1) - pow(Rational(1) - eps, static_cast<unsigned>(n))).str()}};
  return out;
}

InstanceBundle gen_fully_vs_stop(const Rational& eps, const Rational& gamma, std::size_t copies) {
  require_open_interval(eps, Rational(0), Rational(1), "eps");
  require_open_interval(gamma, Rational(0), Rational(1, 2), "gamma");
  if (copies == 0) throw ParameterOutOfRange("copies must be positive");
  const Rational eps2 = eps * eps;
  if (Rational(1) - eps - eps2 <= Rational(0)) throw ParameterOutOfRange("eps too large for the size table");
  const std::size_t types = ceil_inverse(eps);
  const std::vector<Rational> a = gap_small_sizes(gamma, types);
  const std::vector<Rational> b = gap_large_sizes(a);
  const Rational value = Rational(15) / eps;
  const Rational cost = value - eps2;
  std::vector<MskcItem> items;
  for (std::size_t i = 0; i < types; ++i) {
    const FiniteDistribution d({Atom{Rational(0), Rational(1) - eps - eps2}, Atom{a[i], eps}, Atom{b[i], eps2}});
    for (std::size_t c = 0; c < copies; ++c) items.emplace_back(value, std::vector<MskcChoice>{MskcChoice{cost, d}});
  }
  InstanceBundle out;
  out.family = "fully-vs-stop";
  out.params = {{"eps", eps.str()}, {"gamma", gamma.str()}, {"copies", std::to_string(copies)},
                {"types", std::to_string(types)}};
  out.instance = MskcInstance(std::move(items));
  out.claims = {{"alpha", (cost / eps2).str()}, {"stop_adapt_upper", (Rational(4) * eps).str()}};
  return out;
}

std::vector<Rational> solve_transposed_vandermonde(const std::vector<Rational>& x, std::vector<Rational> b) {
  if (x.size() != b.size() || x.empty()) throw ParameterOutOfRange("Vandermonde system size mismatch");
  const std::size_t n = x.size() - 1;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = n; i > k; --i) b[i] -= x[k] * b[i - 1];
  }
  for (std::size_t k = n; k-- > 0;) {
    for (std::size_t i = k + 1; i <= n; ++i) {
      const Rational gap = x[i] - x[i - k - 1];
      if (gap.is_zero()) throw ParameterOutOfRange("Vandermonde nodes must be distinct");
      b[i] /= gap;
    }
    for (std::size_t i = k; i < n; ++i) b[i] -= b[i + 1];
  }
  return b;
}

MomentMatch solve_moment_match(std::size_t k, const Rational& eps, const Rational& delta) {
  if (k == 0) throw ParameterOutOfRange("moment matching needs k >= 1");
  require_open_interval(eps, Rational(0), Rational(1, 2), "eps");
  if (delta.sign() <= 0) throw ParameterOutOfRange("delta must be positive");
  MomentMatch out;
  for (std::size_t j = 1; j <= k; ++j) out.support.push_back(Rational(1) - pow(Rational(1, 2), static_cast<unsigned>(j)));
  out.support.emplace_back(1);
  std::vector<Rational> rhs{Rational(0)};
  for (std::size_t r = 1; r <= k; ++r) rhs.push_back((Rational(1) - Rational(2) * eps) * pow(delta, static_cast<unsigned>(r)));
  out.x = solve_transposed_vandermonde(out.support, rhs);
  const Rational share = eps / Rational(static_cast<long>(k + 1));
  for (std::size_t j = 0; j <= k; ++j) {
    out.p.push_back(share - out.x[j]);
    if (out.p.back().sign() < 0) {
      throw DeltaTooLarge("p_" + std::to_string(j + 1) + " = " + out.p.back().str() + " < 0; shrink delta");
    }
  }
  return out;
}

std::pair<FiniteDistribution, FiniteDistribution> info_gap_types(std::size_t k, const Rational& eps,
                                                                 const Rational& delta) {
  if (k == 0) {
    require_open_interval(eps, Rational(0), Rational(1), "eps");
    const Rational tail = eps / (Rational(2) - eps);
    return {FiniteDistribution({Atom{Rational(0), Rational(1) - eps}, Atom{Rational(1), eps}}),
            FiniteDistribution({Atom{eps / Rational(2), Rational(1) - tail}, Atom{Rational(1), tail}})};
  }
  const MomentMatch mm = solve_moment_match(k, eps, delta);
  const Rational share = eps / Rational(static_cast<long>(k + 1));
  std::vector<Atom> good{Atom{Rational(0), Rational(1) - Rational(2) * eps}, Atom{Rational(1), eps}};
  std::vector<Atom> bad{Atom{delta, Rational(1) - Rational(2) * eps}, Atom{Rational(1), eps}};
  for (std::size_t j = 0; j <= k; ++j) {
    good.push_back(Atom{mm.support[j], share});
    bad.push_back(Atom{mm.support[j], mm.p[j]});
  }
  return {FiniteDistribution(std::move(good)), FiniteDistribution(std::move(bad))};
}

InstanceBundle gen_info_gap(std::size_t k, const Rational& eps, const Rational& delta, std::size_t n) {
  if (n == 0) throw ParameterOutOfRange("n must be positive");
  const auto [good, bad] = info_gap_types(k, eps, delta);
  const Rational value(2);
  const Rational cost = Rational(2) - eps;
  std::vector<MskcItem> items;
  for (std::size_t i = 0; i < n; ++i) items.emplace_back(value, std::vector<MskcChoice>{MskcChoice{cost, good}});
  for (std::size_t i = 0; i < n * n - n; ++i) items.emplace_back(value, std::vector<MskcChoice>{MskcChoice{cost, bad}});
  InstanceBundle out;
  out.family = "info-gap";
  out.params = {{"k", std::to_string(k)}, {"eps", eps.str()}, {"delta", delta.str()}, {"n", std::to_string(n)}};
  out.instance = MskcInstance(std::move(items));
  out.claims = {{"alpha", (cost / eps).str()}, {"bad_first_profit", eps.str()}};
  return out;
}

InstanceBundle gen_lp_gap(const Rational& eps, std::size_t copies) {
  require_open_interval(eps, Rational(0), Rational(1, 2), "eps");
  const std::size_t need = ceil_inverse(Rational(2) * eps);
  if (copies < need) throw ParameterOutOfRange("copies must be at least " + std::to_string(need));
  const FiniteDistribution d({Atom{pow(eps, static_cast<unsigned>(copies)), Rational(1) - eps}, Atom{Rational(1), eps}});
  InstanceBundle out;
  out.family = "lp-gap";
  out.params = {{"eps", eps.str()}, {"copies", std::to_string(copies)}};
  out.instance = identical_jobs(Rational(1), Rational(1) - eps, d, copies);
  out.claims = {{"alpha", ((Rational(1) - eps) / eps).str()}, {"adapt", eps.str()}, {"phi_lower", "1/2"}};
  return out;
}

InstanceBundle gen_bounded_gap(const Rational& eps, std::size_t copies) {
  require_open_interval(eps, Rational(0), Rational(1, 2), "eps");
  if (copies == 0) throw ParameterOutOfRange("copies must be positive");
  const Rational eps2 = eps * eps;
  const FiniteDistribution d(
      {Atom{pow(eps, static_cast<unsigned>(copies)), Rational(1) - eps}, Atom{Rational(1, 2), eps}});
  InstanceBundle out;
  out.family = "bounded-gap";
  out.params = {{"eps", eps.str()}, {"copies", std::to_string(copies)}};
  out.instance = identical_jobs(Rational(2), Rational(2) - eps2, d, copies);
  out.claims = {{"alpha", ((Rational(2) - eps2) / eps2).str()}, {"nonadapt", (Rational(2) * eps2).str()}};
  return out;
}

InstanceBundle gen_random(const RandomSpec& spec) {
  if (spec.n == 0 || spec.m == 0 || spec.support == 0) throw ParameterOutOfRange("random bounds must be positive");
  std::mt19937_64 rng(spec.seed);
  auto uniform = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  constexpr long kGrid = 12;

  std::vector<MskcItem> items;
  for (std::size_t i = 0; i < spec.n; ++i) {
    const Rational value(uniform(1, 10));
    std::vector<MskcChoice> choices;
    for (std::size_t j = 0; j < spec.m; ++j) {
      const auto atoms = static_cast<std::size_t>(uniform(1, static_cast<long>(spec.support)));
      std::vector<long> grid;
      while (grid.size() < atoms) {
        const long g = uniform(0, kGrid);
        if (std::find(grid.begin(), grid.end(), g) == grid.end()) grid.push_back(g);
      }
      std::vector<long> weights;
      long total = 0;
      for (std::size_t a = 0; a < atoms; ++a) total += weights.emplace_back(uniform(1, 6));
      std::vector<Atom> dist;
      for (std::size_t a = 0; a < atoms; ++a) dist.push_back(Atom{Rational(grid[a], kGrid), Rational(weights[a], total)});
      const long frac = spec.profile == RandomProfile::Generic ? uniform(0, 24) : uniform(1, 19);
      choices.push_back(MskcChoice{value * Rational(frac, 20), FiniteDistribution(std::move(dist))});
    }
    items.emplace_back(value, std::move(choices));
  }

  if (spec.profile == RandomProfile::BoundedSize) {
    // w = v - p because every size is at most 1, so alpha ignores the
    // distributions and the rescaling below leaves it unchanged.
    Rational alpha(0);
    for (const MskcItem& item : items) {
      for (std::size_t j = 1; j < item.choice_count(); ++j) {
        alpha = max(alpha, item.choice(j).cost / (item.value() - item.choice(j).cost));
      }
    }
    const Rational cap = Rational(1) / (Rational(2) * Rational(static_cast<long>(spec.n)) * alpha);
    const Rational limit = Rational(1) - spec.delta;
    std::vector<MskcItem> bounded;
    for (const MskcItem& item : items) {
      std::vector<MskcChoice> choices;
      for (std::size_t j = 1; j < item.choice_count(); ++j) {
        const MskcChoice& c = item.choice(j);
        Rational heavy(0);
        for (const Atom& a : c.dist.atoms()) {
          if (a.size > limit) heavy += a.prob;
        }
        if (heavy <= cap) {
          choices.push_back(c);
          continue;
        }
        const Rational scale = cap / heavy;
        std::vector<Atom> atoms;
        for (const Atom& a : c.dist.atoms()) atoms.push_back(a.size > limit ? Atom{a.size, a.prob * scale} : a);
        const Rational moved = heavy - cap;
        if (c.dist.min_size() <= limit) {
          atoms.front().prob += moved;
        } else {
          atoms.push_back(Atom{Rational(0), moved});
        }
        choices.push_back(MskcChoice{c.cost, FiniteDistribution(std::move(atoms))});
      }
      bounded.emplace_back(item.value(), std::move(choices));
    }
    items = std::move(bounded);
  }

  InstanceBundle out;
  out.family = "random";
  const char* profile = spec.profile == RandomProfile::Generic ? "generic"
                        : spec.profile == RandomProfile::PositiveW ? "positive-w"
                                                                    : "bounded-size";
  out.params = {{"n", std::to_string(spec.n)},       {"m", std::to_string(spec.m)},
                {"support", std::to_string(spec.support)}, {"seed", std::to_string(spec.seed)},
                {"profile", profile}};
  if (spec.profile == RandomProfile::BoundedSize) out.params["delta"] = spec.delta.str();
  out.instance = MskcInstance(std::move(items));
  return out;
}

InstanceBundle gen_random_contract(std::size_t n, std::size_t m, std::size_t support, std::uint64_t seed) {
  if (n == 0 || m == 0 || support == 0) throw ParameterOutOfRange("random bounds must be positive");
  std::mt19937_64 rng(seed);
  auto uniform = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  constexpr long kGrid = 8;
  std::vector<ContractAgent> agents;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<ContractAction> actions;
    for (std::size_t j = 0; j < m; ++j) {
      const auto atoms = static_cast<std::size_t>(uniform(1, static_cast<long>(support)));
      std::vector<long> grid;
      while (grid.size() < atoms) {
        const long g = uniform(0, kGrid);
        if (std::find(grid.begin(), grid.end(), g) == grid.end()) grid.push_back(g);
      }
      std::vector<long> weights;
      long total = 0;
      for (std::size_t a = 0; a < atoms; ++a) total += weights.emplace_back(uniform(1, 5));
      std::vector<Atom> dist;
      for (std::size_t a = 0; a < atoms; ++a) dist.push_back(Atom{Rational(grid[a], kGrid), Rational(weights[a], total)});
      const Rational cost = j == 0 ? Rational(0) : Rational(uniform(0, 10), 10);
      actions.push_back(ContractAction{cost, FiniteDistribution(std::move(dist))});
    }
    agents.emplace_back(Rational(uniform(1, 6)), std::move(actions));
  }
  InstanceBundle out;
  out.family = "random-contract";
  out.params = {{"n", std::to_string(n)}, {"m", std::to_string(m)}, {"support", std::to_string(support)},
                {"seed", std::to_string(seed)}};
  out.instance = ContractInstance(std::move(agents));
  return out;
}

std::string to_json_text(const InstanceBundle& bundle) {
  json j;
  j["family"] = bundle.family;
  j["params"] = bundle.params;
  if (!bundle.claims.empty()) j["claims"] = bundle.claims;
  if (bundle.is_contract()) {
    const ContractInstance& ci = bundle.contracts();
    j["budget"] = ci.budget().str();
    json agents = json::array();
    for (const ContractAgent& a : ci.agents()) {
      json actions = json::array();
      for (const ContractAction& act : a.actions()) actions.push_back({{"cost", act.cost.str()}, {"dist", dist_json(act.dist)}});
      agents.push_back({{"value", a.value().str()}, {"actions", actions}});
    }
    j["agents"] = agents;
  } else {
    const MskcInstance& inst = bundle.mskc();
    j["budget"] = inst.budget().str();
    json items = json::array();
    for (const MskcItem& it : inst.items()) {
      json choices = json::array();
      for (std::size_t c = 1; c < it.choice_count(); ++c) {
        choices.push_back({{"cost", it.choice(c).cost.str()}, {"dist", dist_json(it.choice(c).dist)}});
      }
      items.push_back({{"value", it.value().str()}, {"choices", choices}});
    }
    j["items"] = items;
  }
  return j.dump(2);
}

InstanceBundle from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  InstanceBundle out;
  out.family = j.value("family", std::string("custom"));
  try {
    if (j.contains("params")) out.params = j.at("params").get<std::map<std::string, std::string>>();
    if (j.contains("claims")) out.claims = j.at("claims").get<std::map<std::string, std::string>>();
  } catch (const json::exception&) {
    throw ParseError("params/claims must map names to strings");
  }
  const Rational budget = j.contains("budget") ? rational_field(j.at("budget"), "budget") : Rational(1);
  try {
    if (j.contains("agents")) {
      std::vector<ContractAgent> agents;
      const json& arr = array_field(j, "agents", "root");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string w = "agents[" + std::to_string(i) + "]";
        std::vector<ContractAction> actions;
        const json& acts = array_field(arr[i], "actions", w);
        for (std::size_t a = 0; a < acts.size(); ++a) {
          const std::string wa = w + ".actions[" + std::to_string(a) + "]";
          actions.push_back(ContractAction{rational_field(field(acts[a], "cost", wa), wa + ".cost"),
                                           dist_from(field(acts[a], "dist", wa), wa + ".dist")});
        }
        try {
          agents.emplace_back(rational_field(field(arr[i], "value", w), w + ".value"), std::move(actions));
        } catch (const InvalidInstance& e) {
          throw ParseError(w + ": " + e.what());
        }
      }
      out.instance = ContractInstance(std::move(agents), budget);
    } else {
      std::vector<MskcItem> items;
      const json& arr = array_field(j, "items", "root");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string w = "items[" + std::to_string(i) + "]";
        std::vector<MskcChoice> choices;
        const json& cs = array_field(arr[i], "choices", w);
        for (std::size_t c = 0; c < cs.size(); ++c) {
          const std::string wc = w + ".choices[" + std::to_string(c) + "]";
          choices.push_back(MskcChoice{rational_field(field(cs[c], "cost", wc), wc + ".cost"),
                                       dist_from(field(cs[c], "dist", wc), wc + ".dist")});
        }
        try {
          items.emplace_back(rational_field(field(arr[i], "value", w), w + ".value"), std::move(choices));
        } catch (const InvalidInstance& e) {
          throw ParseError(w + ": " + e.what());
        }
      }
      out.instance = MskcInstance(std::move(items), budget);
    }
  } catch (const InvalidInstance& e) {
    throw ParseError(e.what());
  }
  return out;
}

void write_json(const InstanceBundle& bundle, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << to_json_text(bundle) << '\n';
}

InstanceBundle read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

}  // namespace kc
