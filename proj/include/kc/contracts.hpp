#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "kc/core.hpp"
#include "kc/lp.hpp"

namespace kc {

/// An action together with the cheapest monotone contract that incentivizes it.
struct IncentivizedChoice {
  std::size_t agent = 0;
  std::size_t action = 0;
  Contract contract;
  Rational expected_transfer;
};

/// The contract LP for action j of an agent. Variables are the payments on
/// the sorted union support; include_ir adds E_j[t] >= c_j.
LpProblem contract_lp(const ContractAgent& agent, std::size_t j, bool include_ir);

/// Payment-minimizing monotone contract for action j. Throws NotImplementable
/// when no contract makes j a best response.
IncentivizedChoice min_payment_contract(const ContractAgent& agent, std::size_t j, bool include_ir = true,
                                        std::size_t agent_index = 0);

/// All implementable actions, in action order, each with its optimal contract.
std::vector<IncentivizedChoice> implementable_actions(const ContractAgent& agent, bool include_ir = true,
                                                      std::size_t agent_index = 0);

struct Reduction {
  MskcInstance instance;
  /// origin[i][j - 1] is the contract behind choice j of item i.
  std::vector<std::vector<IncentivizedChoice>> origin;

  [[nodiscard]] const IncentivizedChoice& source(std::size_t item, std::size_t choice) const {
    return origin.at(item).at(choice - 1);
  }
};

/// One MSKC item per agent and one choice per implementable action, costed
/// at the action's minimum expected transfer.
Reduction reduce_to_mskc(const ContractInstance& ci, bool include_ir = true);

struct IorResult {
  Rational alpha;
  /// (item, choice) pairs left out because w <= 0.
  std::vector<std::pair<std::size_t, std::size_t>> excluded;
};

/// alpha = max p / w over non-null choices with w = v * Pr[s <= budget] - p > 0.
IorResult compute_ior_detailed(const MskcInstance& inst);
Rational compute_ior(const MskcInstance& inst);

}  // namespace kc
