// Command-line front end for the knapsack-contracts toolkit.
//
// Exit codes: 0 success, 1 failed check or computation error, 2 usage or
// input error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "kc/contracts.hpp"
#include "kc/engine.hpp"
#include "kc/errors.hpp"
#include "kc/experiments.hpp"
#include "kc/instances.hpp"
#include "kc/oracle.hpp"
#include "kc/phi.hpp"
#include "kc/policies.hpp"
#include "kc/policy_io.hpp"

namespace {

using kc::Rational;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string show(const Rational& r) {
  if (r.is_integer()) return r.str();
  std::ostringstream os;
  os.precision(12);
  os << r.str() << " (" << r.to_double() << ")";
  return os.str();
}

Rational parse_rational(const std::string& text, const char* flag) {
  try {
    return Rational::parse(text);
  } catch (const kc::Error& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

// Contract instances are reduced before MSKC-only commands.
kc::MskcInstance load_mskc(const std::string& path) {
  const kc::InstanceBundle b = kc::read_json(path);
  if (!b.is_contract()) return b.mskc();
  std::cout << "# contract instance reduced to MSKC\n";
  return kc::reduce_to_mskc(b.contracts()).instance;
}

void print_phi(const kc::MskcInstance& inst, const Rational& t) {
  const kc::PhiSolution s = kc::solve_phi(inst, t);
  std::cout << "Phi(" << t.str() << ") = " << show(s.value) << "\n";
  std::cout << "used capacity = " << show(s.used_capacity(inst)) << "\n";
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    for (std::size_t j = 1; j < s.x[i].size(); ++j) {
      if (s.x[i][j].is_zero()) continue;
      std::cout << "x[" << i << "][" << j << "] = " << s.x[i][j].str() << "  w = " << kc::choice_weight(inst.item(i), j, t).str()
                << "  mu = " << kc::choice_truncated_mean(inst.item(i), j, t).str() << "\n";
    }
  }
  if (s.fractional) {
    std::cout << "fractional item " << s.fractional->item << ": choices " << s.fractional->low_choice << " / "
              << s.fractional->high_choice << " with weights " << s.fractional->low_weight.str() << " / "
              << s.fractional->high_weight.str() << "\n";
  }
}

void print_contract(const kc::IncentivizedChoice& c) {
  std::cout << "agent " << c.agent << " action " << c.action << ": expected transfer = " << show(c.expected_transfer) << "\n";
  for (const auto& [size, pay] : c.contract.payments) std::cout << "  t(" << size.str() << ") = " << pay.str() << "\n";
}

std::string join_args(int argc, char** argv) {
  std::string out = "kc";
  for (int i = 1; i < argc; ++i) {
    out += ' ';
    out += argv[i];
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knapsack contracts: exact solvers, policies, oracles and experiments"};
  app.require_subcommand(1);

  std::string instance_path;
  std::string policy_path;
  std::string out_path;
  std::string budget_text;

  auto* solve = app.add_subcommand("solve-phi", "Solve the LP relaxation Phi(t) and print the structured solution");
  solve->add_option("instance", instance_path, "Instance JSON")->required();
  solve->add_option("--budget", budget_text, "Capacity t (default: instance budget)");

  std::optional<std::size_t> agent_index;
  std::optional<std::size_t> action_index;
  bool no_ir = false;
  auto* contract = app.add_subcommand("contract", "Minimum-payment contract for an agent's action");
  contract->add_option("instance", instance_path, "Contract instance JSON")->required();
  contract->add_option("--agent", agent_index, "Agent index")->required();
  contract->add_option("--action", action_index, "Action index (default: all implementable actions)");
  contract->add_flag("--no-ir", no_ir, "Drop the individual-rationality constraint");

  auto* reduce = app.add_subcommand("reduce", "Reduce a contract instance to MSKC");
  reduce->add_option("instance", instance_path, "Contract instance JSON")->required();
  reduce->add_option("--out", out_path, "Output path")->required();
  reduce->add_flag("--no-ir", no_ir, "Drop the individual-rationality constraint");

  std::string algo;
  std::string delta_text;
  std::string eps_text;
  bool randomized = false;
  auto* policy = app.add_subcommand("policy", "Build a policy and write it as JSON");
  policy->add_option("instance", instance_path, "Instance JSON")->required();
  policy->add_option("--algo", algo, "Algorithm")
      ->required()
      ->check(CLI::IsMember({"skc", "skc-of", "skc-bound", "ordered", "stop-identity"}));
  policy->add_option("--delta", delta_text, "Budget for skc-of / threshold for skc-bound");
  policy->add_option("--epsilon", eps_text, "Augmentation for ordered");
  policy->add_flag("--randomized", randomized, "Keep the virtual item randomized");
  policy->add_option("--out", out_path, "Output path")->required();

  bool exact = false;
  std::uint64_t trials = 0;
  std::uint64_t seed = 1;
  bool overflow_collects = false;
  auto* eval = app.add_subcommand("eval", "Evaluate a policy exactly or by Monte Carlo");
  eval->add_option("instance", instance_path, "Instance JSON")->required();
  eval->add_option("policy", policy_path, "Policy JSON")->required();
  auto* exact_flag = eval->add_flag("--exact", exact, "Exact expected profit");
  auto* mc_opt = eval->add_option("--mc", trials, "Monte Carlo trials");
  eval->add_option("--seed", seed, "Monte Carlo seed");
  eval->add_flag("--of", overflow_collects, "Overflowing jobs still pay their value");
  exact_flag->excludes(mc_opt);

  std::string oracle_class;
  auto* oracle = app.add_subcommand("oracle", "Exact optimum of a policy class on a small instance");
  oracle->add_option("instance", instance_path, "Instance JSON")->required();
  oracle->add_option("--class", oracle_class, "Policy class")
      ->required()
      ->check(CLI::IsMember({"adapt", "stop", "nonadapt", "adapt-of", "ordered"}));
  oracle->add_option("--out", out_path, "Write the optimal policy here");
  kc::OracleLimits limits;
  oracle->add_option("--max-items", limits.max_items_enumerative, "Item cap for the enumerative oracles (default 6)");
  oracle->add_option("--max-items-adaptive", limits.max_items_adaptive, "Item cap for the adaptive oracles (default 8)");
  oracle->add_option("--state-cap", limits.state_cap, "State or candidate cap");

  std::string family;
  std::string gamma_text = "1/4";
  std::size_t k = 0;
  std::size_t n = 4;
  std::size_t m = 2;
  std::size_t support = 3;
  std::size_t copies = 0;
  std::string profile = "generic";
  auto* gen = app.add_subcommand("gen", "Generate an instance family");
  gen->add_option("family", family, "Family")
      ->required()
      ->check(CLI::IsMember({"alpha-gap", "fully-vs-stop", "info-gap", "lp-gap", "bounded-gap", "random", "random-contract"}));
  gen->add_option("--eps", eps_text, "epsilon");
  gen->add_option("--gamma", gamma_text, "gamma (default 1/4)");
  gen->add_option("--k", k, "Number of matched moments (info-gap)");
  gen->add_option("--delta", delta_text, "delta (info-gap, bounded-size profile)");
  gen->add_option("--n", n, "Item count (random, info-gap, alpha-gap)");
  gen->add_option("--m", m, "Choices per item (random)");
  gen->add_option("--support", support, "Atoms per distribution (random)");
  gen->add_option("--copies", copies, "Copies (fully-vs-stop, lp-gap, bounded-gap)");
  gen->add_option("--seed", seed, "Seed (random)");
  gen->add_option("--profile", profile, "Random profile")->check(CLI::IsMember({"generic", "positive-w", "bounded-size"}));
  gen->add_option("--out", out_path, "Output path")->required();

  std::string preset;
  std::string out_dir = ".";
  auto* experiment = app.add_subcommand("experiment", "Run an acceptance preset and write CSV and JSON reports");
  std::vector<std::string> choices = kc::experiment_names();
  choices.emplace_back("all");
  experiment->add_option("preset", preset, "Preset name or 'all'")->required()->check(CLI::IsMember(choices));
  experiment->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    std::cout << "# " << join_args(argc, argv) << "\n";

    if (*solve) {
      const kc::MskcInstance inst = load_mskc(instance_path);
      print_phi(inst, budget_text.empty() ? inst.budget() : parse_rational(budget_text, "--budget"));
    } else if (*contract) {
      const kc::InstanceBundle b = kc::read_json(instance_path);
      if (!b.is_contract()) throw UsageError("contract needs a contract instance");
      const kc::ContractAgent& agent = b.contracts().agent(*agent_index);
      if (action_index) {
        print_contract(kc::min_payment_contract(agent, *action_index, !no_ir, *agent_index));
      } else {
        for (const auto& c : kc::implementable_actions(agent, !no_ir, *agent_index)) print_contract(c);
      }
    } else if (*reduce) {
      const kc::InstanceBundle b = kc::read_json(instance_path);
      if (!b.is_contract()) throw UsageError("reduce needs a contract instance");
      kc::InstanceBundle out;
      out.family = "reduced:" + b.family;
      out.params = b.params;
      out.params["ir"] = no_ir ? "off" : "on";
      out.instance = kc::reduce_to_mskc(b.contracts(), !no_ir).instance;
      kc::write_json(out, out_path);
      std::cout << "wrote " << out_path << " (" << out.mskc().size() << " items)\n";
    } else if (*policy) {
      const kc::MskcInstance inst = load_mskc(instance_path);
      kc::Policy p;
      if (algo == "skc") {
        kc::SkcReport rep;
        p = kc::build_skc(inst, !randomized, &rep);
        std::cout << "Phi = " << show(rep.phi.value) << ", alpha = " << show(*rep.alpha)
                  << ", threshold = " << show(rep.threshold) << ", branch = " << (rep.single_step ? "single" : "density")
                  << "\n";
      } else if (algo == "skc-of") {
        const Rational t = delta_text.empty() ? inst.budget() : parse_rational(delta_text, "--delta");
        p = kc::build_skc_of(inst, t, !randomized);
      } else if (algo == "skc-bound") {
        if (delta_text.empty()) throw UsageError("skc-bound needs --delta");
        p = kc::build_skc_bound(inst, parse_rational(delta_text, "--delta"), !randomized);
      } else if (algo == "ordered") {
        if (eps_text.empty()) throw UsageError("ordered needs --epsilon");
        const kc::OrderedAdaptivePolicy op = kc::build_ordered_adaptive(inst, parse_rational(eps_text, "--epsilon"));
        std::cout << "D(1, K) = " << show(op.table.d[0][static_cast<std::size_t>(op.table.units)])
                  << ", capacity = " << op.capacity.str() << ", work = " << op.table.work << "\n";
        p = op;
      } else {
        std::vector<std::pair<std::size_t, std::size_t>> id;
        for (std::size_t i = 0; i < inst.size(); ++i) id.emplace_back(i, 1);
        p = kc::optimal_stopping_rule(inst, kc::order_of(id));
      }
      kc::write_policy(p, out_path);
      std::cout << "wrote " << out_path << "\n";
    } else if (*eval) {
      const kc::MskcInstance inst = load_mskc(instance_path);
      const kc::Policy p = kc::read_policy(policy_path);
      kc::EngineOptions opts;
      opts.overflow_collects = overflow_collects;
      if (trials > 0) {
        const kc::ProfitEstimate e = kc::estimate_profit_mc(p, inst, trials, seed, opts);
        std::cout.precision(12);
        std::cout << "mean = " << e.mean << "\nhalf_width_95 = " << e.half_width_95 << "\ntrials = " << e.trials
                  << "\nseed = " << e.seed << "\n";
      } else {
        const kc::ExactEvaluation e = kc::evaluate_exact(p, inst, opts);
        std::cout << "profit = " << show(e.profit) << "\noverflow probability = " << show(e.overflow_prob) << "\n";
      }
    } else if (*oracle) {
      const kc::MskcInstance inst = load_mskc(instance_path);
      kc::OracleResult r;
      if (oracle_class == "adapt") r = kc::adapt_opt(inst, false, limits);
      if (oracle_class == "adapt-of") r = kc::adapt_of_opt(inst, limits);
      if (oracle_class == "nonadapt") r = kc::nonadapt_opt(inst, limits);
      if (oracle_class == "stop") r = kc::stopadapt_opt(inst, limits);
      if (oracle_class == "ordered") r = kc::ordered_adapt_opt(inst, limits);
      std::cout << show(r.value) << "\n";
      std::cout << "# states explored: " << r.states_explored << "\n";
      if (!out_path.empty()) kc::write_policy(r.policy, out_path);
    } else if (*gen) {
      auto need_eps = [&] {
        if (eps_text.empty()) throw UsageError(family + " needs --eps");
        return parse_rational(eps_text, "--eps");
      };
      const Rational gamma = parse_rational(gamma_text, "--gamma");
      kc::InstanceBundle b;
      if (family == "alpha-gap") {
        b = gen->count("--n") > 0 ? kc::gen_alpha_gap(need_eps(), gamma, n) : kc::gen_alpha_gap(need_eps(), gamma);
      } else if (family == "fully-vs-stop") {
        b = kc::gen_fully_vs_stop(need_eps(), gamma, copies);
      } else if (family == "info-gap") {
        if (delta_text.empty()) throw UsageError("info-gap needs --delta");
        b = kc::gen_info_gap(k, need_eps(), parse_rational(delta_text, "--delta"), n);
      } else if (family == "lp-gap") {
        b = kc::gen_lp_gap(need_eps(), copies);
      } else if (family == "bounded-gap") {
        b = kc::gen_bounded_gap(need_eps(), copies);
      } else if (family == "random") {
        kc::RandomSpec spec{n, m, support, seed, kc::RandomProfile::Generic, Rational(1, 4)};
        if (profile == "positive-w") spec.profile = kc::RandomProfile::PositiveW;
        if (profile == "bounded-size") spec.profile = kc::RandomProfile::BoundedSize;
        if (!delta_text.empty()) spec.delta = parse_rational(delta_text, "--delta");
        b = kc::gen_random(spec);
      } else {
        b = kc::gen_random_contract(n, m, support, seed);
      }
      kc::write_json(b, out_path);
      std::cout << "wrote " << out_path << "\n";
    } else if (*experiment) {
      std::filesystem::create_directories(out_dir);
      const std::vector<std::string> run = preset == "all" ? kc::experiment_names() : std::vector<std::string>{preset};
      bool all_pass = true;
      for (const std::string& name : run) {
        const kc::ExperimentReport r = kc::run_experiment(name);
        kc::write_report(r, out_dir);
        all_pass = all_pass && r.passed();
        std::cout << (r.passed() ? "PASS" : "FAIL") << " " << r.id << " (criterion " << r.criterion << "): "
                  << (r.counted_rows() - r.failed_rows()) << "/" << r.counted_rows() << " checks, " << r.seconds
                  << " s\n";
      }
      return all_pass ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const kc::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const kc::ParameterOutOfRange& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "index out of range: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
