#ifndef CKM_LOCAL_SEARCH_HPP
#define CKM_LOCAL_SEARCH_HPP

// Swap-based local search for capacitated k-median. The search keeps
// m = ceil(8k/3) facilities open and moves to S \ B u A, |A| = |B| <= p,
// whenever that cuts the cost by at least a delta_imp fraction, where
// delta_imp = epsilon / (|F| + |C|).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ckm/assignment_flow.hpp"
#include "ckm/instance.hpp"
#include "ckm/rational.hpp"

namespace ckm {

enum class InitKind { kRandom, kGreedy };

struct SearchConfig {
  int p = 2;
  Rational epsilon{1, 100};
  std::uint64_t seed = 0;
  bool penalty_mode = false;
  std::optional<std::int64_t> max_iterations;
  InitKind init = InitKind::kRandom;
};

inline void validate_config(const SearchConfig& cfg) {
  if (cfg.p < 1) throw Error(ErrorKind::kValidation, "p must be >= 1");
  if (cfg.epsilon.num <= 0 || cfg.epsilon.den <= 0)
    throw Error(ErrorKind::kValidation, "epsilon must be positive");
  if (cfg.max_iterations && *cfg.max_iterations < 0)
    throw Error(ErrorKind::kValidation, "max_iterations must be non-negative");
}

/// delta_imp = epsilon / (|F| + |C|).
inline Rational improvement_threshold(const Instance& inst, const Rational& epsilon) {
  return Rational{epsilon.num,
                  epsilon.den * static_cast<std::int64_t>(inst.num_facilities + inst.num_clients)};
}

/// new_cost <= (1 - delta) * old_cost, exactly.
inline bool meets_threshold(Cost new_cost, Cost old_cost, const Rational& delta) {
  using I = __int128;
  return static_cast<I>(new_cost) * delta.den <=
         static_cast<I>(old_cost) * (delta.den - delta.num);
}

/// A swap: close every facility in `close` (subset of S), open every facility
/// in `open` (subset of F \ S).
struct Move {
  std::vector<int> open;
  std::vector<int> close;

  int size() const { return static_cast<int>(open.size()); }
  friend bool operator==(const Move&, const Move&) = default;
};

inline std::string describe(const Move& mv) {
  std::string s = "swap(";
  for (std::size_t i = 0; i < mv.close.size(); ++i) s += (i ? "," : "") + std::to_string(mv.close[i]);
  s += " -> ";
  for (std::size_t i = 0; i < mv.open.size(); ++i) s += (i ? "," : "") + std::to_string(mv.open[i]);
  return s + ")";
}

namespace detail {

// Advances `idx` (strictly increasing indices into [0, n)) to the next
// combination in lexicographic order. Returns false after the last one.
inline bool next_combination(std::vector<int>& idx, int n) {
  const int r = static_cast<int>(idx.size());
  int i = r - 1;
  while (i >= 0 && idx[i] == n - r + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (int t = i + 1; t < r; ++t) idx[t] = idx[t - 1] + 1;
  return true;
}

}  // namespace detail

/// Streams all moves for the current open set ordered by (size, closed ids,
/// opened ids), each exactly once.
class MoveEnumerator {
 public:
  MoveEnumerator(const Instance& inst, const std::vector<int>& open, int p) {
    std::vector<char> in(inst.num_facilities, 0);
    for (int f : open) in[f] = 1;
    inside_ = open;
    std::sort(inside_.begin(), inside_.end());
    for (int f = 0; f < inst.num_facilities; ++f)
      if (!in[f]) outside_.push_back(f);
    max_size_ = std::min<int>({p, static_cast<int>(inside_.size()),
                               static_cast<int>(outside_.size())});
    size_ = 0;
  }

  /// Next move, or nullopt when exhausted.
  std::optional<Move> next() {
    if (!advance()) return std::nullopt;
    Move mv;
    for (int i : close_idx_) mv.close.push_back(inside_[i]);
    for (int i : open_idx_) mv.open.push_back(outside_[i]);
    return mv;
  }

 private:
  bool advance() {
    if (size_ == 0) return start_size(1);
    if (detail::next_combination(open_idx_, static_cast<int>(outside_.size()))) return true;
    if (detail::next_combination(close_idx_, static_cast<int>(inside_.size()))) {
      std::iota(open_idx_.begin(), open_idx_.end(), 0);
      return true;
    }
    return start_size(size_ + 1);
  }

  bool start_size(int s) {
    if (s > max_size_) {
      size_ = max_size_ + 1;
      return false;
    }
    size_ = s;
    close_idx_.resize(s);
    open_idx_.resize(s);
    std::iota(close_idx_.begin(), close_idx_.end(), 0);
    std::iota(open_idx_.begin(), open_idx_.end(), 0);
    return true;
  }

  std::vector<int> inside_;
  std::vector<int> outside_;
  std::vector<int> close_idx_;
  std::vector<int> open_idx_;
  int max_size_ = 0;
  int size_ = 0;
};

inline std::vector<Move> enumerate_moves(const Instance& inst, const Solution& current, int p) {
  std::vector<Move> moves;
  MoveEnumerator it(inst, current.open, p);
  while (auto mv = it.next()) moves.push_back(std::move(*mv));
  return moves;
}

/// S \ close u open, sorted.
inline std::vector<int> apply_move(const std::vector<int>& open, const Move& mv) {
  std::vector<int> out;
  for (int f : open)
    if (std::find(mv.close.begin(), mv.close.end(), f) == mv.close.end()) out.push_back(f);
  out.insert(out.end(), mv.open.begin(), mv.open.end());
  std::sort(out.begin(), out.end());
  return out;
}

inline Cost evaluate_move(const Instance& inst, const Solution& current, const Move& mv,
                          bool penalty_mode) {
  if (mv.open.size() != mv.close.size())
    throw Error(ErrorKind::kValidation, "move must open and close equally many facilities");
  for (int f : mv.close)
    if (!std::binary_search(current.open.begin(), current.open.end(), f))
      throw Error(ErrorKind::kValidation, "closing a facility that is not open");
  for (int f : mv.open)
    if (std::binary_search(current.open.begin(), current.open.end(), f))
      throw Error(ErrorKind::kValidation, "opening a facility that is already open");
  if (mv.open.empty()) return current.total_cost;
  return assign_to(inst, apply_move(current.open, mv), penalty_mode).total_cost;
}

namespace detail {

// Uniform draw in [0, bound) from a 64-bit engine, by rejection.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do x = rng(); while (x >= limit);
  return x % bound;
}

// Farthest-point traversal. Facility-facility distance is not part of the
// input, so min_j c(i,j) + c(i',j) (an upper bound under the metric) stands in.
inline std::vector<int> farthest_point_open_set(const Instance& inst, int m) {
  const int nf = inst.num_facilities;
  auto gap = [&](int a, int b) {
    Cost best = std::numeric_limits<Cost>::max();
    for (int j = 0; j < inst.num_clients; ++j)
      best = std::min(best, inst.cost[a][j] + inst.cost[b][j]);
    return inst.num_clients == 0 ? Cost{0} : best;
  };
  int first = 0;
  Cost first_sum = std::numeric_limits<Cost>::max();
  for (int i = 0; i < nf; ++i) {
    Cost s = 0;
    for (int j = 0; j < inst.num_clients; ++j) s += inst.cost[i][j];
    if (s < first_sum) first_sum = s, first = i;
  }
  std::vector<int> chosen{first};
  std::vector<Cost> nearest(nf, std::numeric_limits<Cost>::max());
  std::vector<char> used(nf, 0);
  used[first] = 1;
  while (static_cast<int>(chosen.size()) < m) {
    const int last = chosen.back();
    int pick = -1;
    for (int i = 0; i < nf; ++i) {
      if (used[i]) continue;
      nearest[i] = std::min(nearest[i], gap(i, last));
      if (pick < 0 || nearest[i] > nearest[pick]) pick = i;
    }
    used[pick] = 1;
    chosen.push_back(pick);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace detail

inline Solution initial_solution(const Instance& inst, const SearchConfig& cfg) {
  validate_config(cfg);
  const int m = open_count_target(inst);
  if (!cfg.penalty_mode && static_cast<std::int64_t>(m) * inst.capacity < inst.num_clients)
    throw Error(ErrorKind::kInfeasible, "insufficient capacity");

  std::vector<int> open;
  if (cfg.init == InitKind::kGreedy) {
    open = detail::farthest_point_open_set(inst, m);
  } else {
    std::vector<int> pool(inst.num_facilities);
    std::iota(pool.begin(), pool.end(), 0);
    std::mt19937_64 rng(cfg.seed);
    for (int t = 0; t < m; ++t) {
      const auto pick = t + detail::uniform_below(rng, pool.size() - t);
      std::swap(pool[t], pool[pick]);
    }
    open.assign(pool.begin(), pool.begin() + m);
    std::sort(open.begin(), open.end());
  }
  return assign_to(inst, open, cfg.penalty_mode);
}

struct TraceStep {
  Move move;
  Cost old_cost = 0;
  Cost new_cost = 0;
};

struct SearchTrace {
  Cost initial_cost = 0;
  std::vector<TraceStep> iterations;
  std::int64_t evaluations = 0;
  bool capped = false;
  double seconds = 0.0;
};

struct SearchResult {
  Solution solution;
  SearchTrace trace;
};

/// First-improvement local search: rescan the neighborhood in enumeration
/// order after every accepted move; stop when a full scan finds nothing that
/// meets the threshold.
inline SearchResult run(const Instance& inst, const SearchConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  validate_config(cfg);
  const Rational delta = improvement_threshold(inst, cfg.epsilon);
  SearchResult res;
  res.solution = initial_solution(inst, cfg);
  res.trace.initial_cost = res.solution.total_cost;

  while (true) {
    if (cfg.max_iterations &&
        static_cast<std::int64_t>(res.trace.iterations.size()) >= *cfg.max_iterations) {
      // Capped only if an acceptable move still exists.
      MoveEnumerator probe(inst, res.solution.open, cfg.p);
      while (auto mv = probe.next()) {
        Solution cand = assign_to(inst, apply_move(res.solution.open, *mv), cfg.penalty_mode);
        ++res.trace.evaluations;
        if (meets_threshold(cand.total_cost, res.solution.total_cost, delta)) {
          res.trace.capped = true;
          break;
        }
      }
      break;
    }
    // Zero cost cannot be improved.
    if (res.solution.total_cost == 0) break;
    bool moved = false;
    MoveEnumerator it(inst, res.solution.open, cfg.p);
    while (auto mv = it.next()) {
      Solution cand = assign_to(inst, apply_move(res.solution.open, *mv), cfg.penalty_mode);
      ++res.trace.evaluations;
      if (meets_threshold(cand.total_cost, res.solution.total_cost, delta)) {
        res.trace.iterations.push_back({*mv, res.solution.total_cost, cand.total_cost});
        res.solution = std::move(cand);
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  res.trace.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return res;
}

inline SearchResult run_with_penalties(const Instance& inst, SearchConfig cfg) {
  if (!inst.penalties)
    throw Error(ErrorKind::kValidation, "instance has no penalties");
  cfg.penalty_mode = true;
  return run(inst, cfg);
}

/// First move of size <= p that would still meet the threshold at `sol`, if
/// any. Used to check epsilon-local optimality after the fact.
inline std::optional<Move> find_improving_move(const Instance& inst, const Solution& sol, int p,
                                               const Rational& delta, bool penalty_mode) {
  MoveEnumerator it(inst, sol.open, p);
  while (auto mv = it.next()) {
    if (meets_threshold(evaluate_move(inst, sol, *mv, penalty_mode), sol.total_cost, delta))
      return mv;
  }
  return std::nullopt;
}

/// Largest iteration count the threshold rule permits between the initial
/// cost and the last positive cost on the trace.
inline double iteration_bound(Cost initial, Cost last_positive, const Rational& delta) {
  if (initial <= 0 || last_positive <= 0) return 0.0;
  const double d = static_cast<double>(delta.num) / static_cast<double>(delta.den);
  return std::log(static_cast<double>(initial) / static_cast<double>(last_positive)) /
         -std::log1p(-d);
}

}  // namespace ckm

#endif  // CKM_LOCAL_SEARCH_HPP
