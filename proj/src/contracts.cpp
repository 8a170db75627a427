#include "kc/contracts.hpp"

#include <algorithm>
#include <optional>

#include "kc/errors.hpp"

namespace kc {
namespace {

// Row of expectation coefficients of an action's distribution over `support`.
std::vector<Rational> expectation_row(const FiniteDistribution& dist, const std::vector<Rational>& support) {
  std::vector<Rational> row(support.size());
  for (const Atom& atom : dist.atoms()) {
    const auto it = std::lower_bound(support.begin(), support.end(), atom.size);
    row[static_cast<std::size_t>(it - support.begin())] = atom.prob;
  }
  return row;
}

}  // namespace

LpProblem contract_lp(const ContractAgent& agent, std::size_t j, bool include_ir) {
  const std::vector<Rational> support = agent.support();
  const std::size_t n = support.size();
  const ContractAction& target = agent.action(j);
  const std::vector<Rational> target_row = expectation_row(target.dist, support);

  LpProblem lp;
  lp.sense = LpSense::Minimize;
  lp.objective = target_row;
  for (std::size_t other = 0; other < agent.actions().size(); ++other) {
    if (other == j) continue;
    const ContractAction& alt = agent.action(other);
    const std::vector<Rational> alt_row = expectation_row(alt.dist, support);
    std::vector<Rational> row(n);
    for (std::size_t k = 0; k < n; ++k) row[k] = target_row[k] - alt_row[k];
    lp.add(std::move(row), LpRelation::GreaterEqual, target.cost - alt.cost);
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::vector<Rational> row(n);
    row[k] = Rational(1);
    row[k + 1] = Rational(-1);
    lp.add(std::move(row), LpRelation::GreaterEqual, Rational(0));
  }
  if (include_ir) lp.add(target_row, LpRelation::GreaterEqual, target.cost);
  return lp;
}

IncentivizedChoice min_payment_contract(const ContractAgent& agent, std::size_t j, bool include_ir,
                                        std::size_t agent_index) {
  if (j >= agent.actions().size()) throw InvalidInstance("action index out of range");
  const LpSolution sol = solve_lp_exact(contract_lp(agent, j, include_ir));
  if (sol.status != LpStatus::Optimal) {
    throw NotImplementable("action " + std::to_string(j) + " of agent " + std::to_string(agent_index) +
                           " is not implementable");
  }
  IncentivizedChoice out;
  out.agent = agent_index;
  out.action = j;
  const std::vector<Rational> support = agent.support();
  for (std::size_t k = 0; k < support.size(); ++k) out.contract.payments.emplace(support[k], sol.x[k]);
  out.expected_transfer = out.contract.expected_transfer(agent.action(j).dist);
  return out;
}

std::vector<IncentivizedChoice> implementable_actions(const ContractAgent& agent, bool include_ir,
                                                      std::size_t agent_index) {
  std::vector<IncentivizedChoice> out;
  for (std::size_t j = 0; j < agent.actions().size(); ++j) {
    try {
      out.push_back(min_payment_contract(agent, j, include_ir, agent_index));
    } catch (const NotImplementable&) {
    }
  }
  return out;
}

Reduction reduce_to_mskc(const ContractInstance& ci, bool include_ir) {
  Reduction red;
  std::vector<MskcItem> items;
  for (std::size_t i = 0; i < ci.size(); ++i) {
    const ContractAgent& agent = ci.agent(i);
    std::vector<IncentivizedChoice> choices = implementable_actions(agent, include_ir, i);
    if (choices.empty()) throw NoImplementableAction("agent " + std::to_string(i) + " has no implementable action");
    std::vector<MskcChoice> mskc;
    for (const IncentivizedChoice& c : choices) {
      mskc.push_back(MskcChoice{c.expected_transfer, agent.action(c.action).dist});
    }
    items.emplace_back(agent.value(), std::move(mskc));
    red.origin.push_back(std::move(choices));
  }
  red.instance = MskcInstance(std::move(items), ci.budget());
  return red;
}

IorResult compute_ior_detailed(const MskcInstance& inst) {
  IorResult out;
  std::optional<Rational> alpha;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const MskcItem& item = inst.item(i);
    for (std::size_t j = 1; j < item.choice_count(); ++j) {
      const Rational w = choice_weight(item, j, inst.budget());
      if (w.sign() <= 0) {
        out.excluded.emplace_back(i, j);
        continue;
      }
      const Rational ratio = item.choice(j).cost / w;
      if (!alpha || ratio > *alpha) alpha = ratio;
    }
  }
  if (!alpha) throw NoPositiveChoice("no choice has positive profit proxy");
  out.alpha = *alpha;
  return out;
}

Rational compute_ior(const MskcInstance& inst) { return compute_ior_detailed(inst).alpha; }

}  // namespace kc
