#ifndef CKM_EXACT_ORACLE_HPP
#define CKM_EXACT_ORACLE_HPP

// Exhaustive optimum over all k-subsets of facilities, each evaluated with
// the optimal flow assignment. Ground truth for ratio checks at desk scale.

#include <chrono>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "ckm/assignment_flow.hpp"
#include "ckm/instance.hpp"
#include "ckm/local_search.hpp"

namespace ckm {

struct OracleBudget {
  std::int64_t max_subsets = 2'000'000;
  double time_cap_seconds = 600.0;
};

/// C(n, r), saturating at int64 max.
inline std::int64_t binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  __int128 acc = 1;
  for (int i = 1; i <= r; ++i) {
    acc = acc * (n - r + i) / i;
    if (acc > std::numeric_limits<std::int64_t>::max())
      return std::numeric_limits<std::int64_t>::max();
  }
  return static_cast<std::int64_t>(acc);
}

/// Minimum-cost solution opening exactly k facilities (k clamped to |F|);
/// ties go to the lexicographically smallest open set.
inline OptimumRecord exact_optimal(const Instance& inst, int k, bool penalty_mode,
                                   const OracleBudget& budget = {}) {
  if (k <= 0) throw Error(ErrorKind::kValidation, "k must be positive");
  if (budget.max_subsets <= 0 || budget.time_cap_seconds <= 0)
    throw Error(ErrorKind::kValidation, "oracle budget must be positive");
  if (penalty_mode && !inst.penalties)
    throw Error(ErrorKind::kValidation, "penalty mode requires penalties");
  k = std::min(k, inst.num_facilities);
  if (!penalty_mode && static_cast<std::int64_t>(k) * inst.capacity < inst.num_clients)
    throw Error(ErrorKind::kInfeasible, "insufficient capacity: k*U < |C|");
  if (binomial(inst.num_facilities, k) > budget.max_subsets)
    throw Error(ErrorKind::kInfeasible, "oracle budget: C(" + std::to_string(inst.num_facilities) +
                                            "," + std::to_string(k) + ") subsets exceeds " +
                                            std::to_string(budget.max_subsets));

  const auto started = std::chrono::steady_clock::now();
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  OptimumRecord best;
  best.k = k;
  bool have = false;
  std::int64_t scanned = 0;
  do {
    Solution cand = assign_to(inst, idx, penalty_mode);
    if (!have || cand.total_cost < best.solution.total_cost) {
      best.solution = std::move(cand);
      have = true;
    }
    if ((++scanned & 63) == 0 &&
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count() >
            budget.time_cap_seconds)
      throw Error(ErrorKind::kInfeasible, "oracle budget: time cap exceeded");
  } while (detail::next_combination(idx, inst.num_facilities));
  return best;
}

}  // namespace ckm

#endif  // CKM_EXACT_ORACLE_HPP
