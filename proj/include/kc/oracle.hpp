#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "kc/core.hpp"
#include "kc/policy.hpp"

namespace kc {

struct OracleResult {
  Rational value;
  Policy policy;
  std::size_t states_explored = 0;
};

struct OracleLimits {
  std::size_t max_items_adaptive = 8;
  std::size_t max_items_enumerative = 6;
  std::size_t state_cap = 1'000'000;
};

/// Optimal fully adaptive value by memoized recursion on (attempted items,
/// remaining capacity). With overflow_collecting, an overflowing job still
/// pays its value.
OracleResult adapt_opt(const MskcInstance& inst, bool overflow_collecting = false, const OracleLimits& limits = {});
OracleResult adapt_of_opt(const MskcInstance& inst, const OracleLimits& limits = {});

/// Optimal policy that visits items in index order and may skip any of them.
OracleResult ordered_adapt_opt(const MskcInstance& inst, const OracleLimits& limits = {});

/// Best fixed sequence over all ordered subsets and choice assignments.
OracleResult nonadapt_opt(const MskcInstance& inst, const OracleLimits& limits = {});

/// Best order (with the optimal stopping rule) over all permutations and
/// choice assignments.
OracleResult stopadapt_opt(const MskcInstance& inst, const OracleLimits& limits = {});

/// Expected profit contributed by each step of a fixed sequence.
std::vector<Rational> sequence_step_profits(const MskcInstance& inst,
                                            const std::vector<std::pair<std::size_t, std::size_t>>& sequence);

}  // namespace kc
