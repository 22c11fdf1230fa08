#ifndef CKM_INSTANCE_HPP
#define CKM_INSTANCE_HPP

// Problem data shared by every part of the solver: the capacitated k-median
// instance, candidate solutions and their cost.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ckm {

using Cost = std::int64_t;

/// Marker stored in Solution::assign for a client that pays its penalty.
inline constexpr int kPenalty = -1;

enum class ErrorKind {
  kValidation,    // malformed input, bad parameters
  kInfeasible,    // capacity shortfall, oracle budget
  kInconsistent,  // a solution that contradicts its instance
  kCertification  // a certificate check failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct Point {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct PointSet {
  std::vector<Point> facilities;
  std::vector<Point> clients;
  friend bool operator==(const PointSet&, const PointSet&) = default;
};

/// Integer square root, floor(sqrt(v)) for v >= 0.
inline std::int64_t isqrt(std::int64_t v) {
  if (v <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

/// Euclidean distance rounded half-up, computed exactly in integers.
inline Cost rounded_distance(const Point& a, const Point& b) {
  const std::int64_t dx = a.x - b.x;
  const std::int64_t dy = a.y - b.y;
  const std::int64_t sq = dx * dx + dy * dy;
  std::int64_t r = isqrt(sq);
  // d >= r + 1/2  <=>  4 d^2 >= (2r + 1)^2
  if (4 * sq >= (2 * r + 1) * (2 * r + 1)) ++r;
  return r;
}

/// A hard uniform capacitated k-median instance, optionally with per-client
/// penalties. cost[i][j] is the cost of serving client j from facility i.
struct Instance {
  int num_facilities = 0;
  int num_clients = 0;
  int capacity = 0;
  int k = 0;
  bool metric = false;
  std::vector<std::vector<Cost>> cost;
  std::optional<std::vector<Cost>> penalties;
  // Kept so that instances described by coordinates serialize back the same way.
  std::optional<PointSet> points;
  // Denominator used to scale fractional input costs to integers (1 = none).
  std::int64_t cost_scale = 1;

  bool has_penalties() const { return penalties.has_value(); }
  Cost c(int facility, int client) const { return cost[facility][client]; }

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Builds the cost matrix from coordinates.
inline std::vector<std::vector<Cost>> costs_from_points(const PointSet& pts) {
  std::vector<std::vector<Cost>> cost(pts.facilities.size(),
                                      std::vector<Cost>(pts.clients.size()));
  for (std::size_t i = 0; i < pts.facilities.size(); ++i)
    for (std::size_t j = 0; j < pts.clients.size(); ++j)
      cost[i][j] = rounded_distance(pts.facilities[i], pts.clients[j]);
  return cost;
}

struct Solution {
  std::vector<int> open;    // sorted ascending
  std::vector<int> assign;  // facility id or kPenalty, per client
  Cost total_cost = 0;

  friend bool operator==(const Solution&, const Solution&) = default;
};

/// A solution known to be optimal among those opening at most k facilities.
struct OptimumRecord {
  Solution solution;
  int k = 0;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Finds a facility-client-facility-client path that beats a direct edge,
/// i.e. cost[i][j] > cost[i][j'] + cost[i'][j'] + cost[i'][j]. Returns
/// (i, j, i', j') of the first violation found.
///
/// For fixed (i, i') the right-hand side minus cost[i'][j] does not depend on
/// j, so one pass over clients per facility pair suffices.
inline std::optional<std::vector<int>> find_metric_violation(
    const std::vector<std::vector<Cost>>& cost) {
  const int nf = static_cast<int>(cost.size());
  if (nf == 0) return std::nullopt;
  const int nc = static_cast<int>(cost[0].size());
  for (int i = 0; i < nf; ++i) {
    for (int i2 = 0; i2 < nf; ++i2) {
      if (i == i2) continue;
      Cost bridge = 0;
      int bridge_client = -1;
      for (int j2 = 0; j2 < nc; ++j2) {
        const Cost via = cost[i][j2] + cost[i2][j2];
        if (bridge_client < 0 || via < bridge) {
          bridge = via;
          bridge_client = j2;
        }
      }
      for (int j = 0; j < nc; ++j) {
        if (cost[i][j] > bridge + cost[i2][j])
          return std::vector<int>{i, j, i2, bridge_client};
      }
    }
  }
  return std::nullopt;
}

inline ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  auto add = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

  if (inst.num_facilities <= 0) add("num_facilities must be positive");
  if (inst.num_clients < 0) add("num_clients must be non-negative");
  if (inst.capacity <= 0) add("capacity must be positive");
  if (inst.k <= 0) add("k must be positive");

  bool shape_ok = static_cast<int>(inst.cost.size()) == inst.num_facilities;
  for (const auto& row : inst.cost)
    if (static_cast<int>(row.size()) != inst.num_clients) shape_ok = false;
  if (!shape_ok) {
    add("cost matrix size mismatch");
    return report;
  }

  for (int i = 0; i < inst.num_facilities; ++i)
    for (int j = 0; j < inst.num_clients; ++j)
      if (inst.cost[i][j] < 0)
        add("negative cost at (" + std::to_string(i) + "," + std::to_string(j) + ")");

  if (inst.penalties) {
    if (static_cast<int>(inst.penalties->size()) != inst.num_clients)
      add("penalties size mismatch");
    for (std::size_t j = 0; j < inst.penalties->size(); ++j)
      if ((*inst.penalties)[j] < 0) add("negative penalty at " + std::to_string(j));
  }

  if (inst.metric) {
    if (auto v = find_metric_violation(inst.cost)) {
      const auto& w = *v;
      add("metric violated: c(" + std::to_string(w[0]) + "," + std::to_string(w[1]) +
          ") > c(" + std::to_string(w[0]) + "," + std::to_string(w[3]) + ") + c(" +
          std::to_string(w[2]) + "," + std::to_string(w[3]) + ") + c(" +
          std::to_string(w[2]) + "," + std::to_string(w[1]) + ")");
    }
  }
  return report;
}

/// Number of facilities the local search keeps open: ceil(8k/3), clamped to
/// the number of facilities.
inline int open_count_target(const Instance& inst) {
  const int target = (8 * inst.k + 2) / 3;
  return std::min(inst.num_facilities, target);
}

/// True when open_count_target had to be clamped to |F|.
inline bool open_count_clamped(const Instance& inst) {
  return inst.num_facilities < (8 * inst.k + 2) / 3;
}

/// Recomputes the cost of an assignment and checks it against the instance.
/// Throws Error(kInconsistent) on a closed or over-full facility.
inline Cost cost_of(const Instance& inst, const Solution& sol) {
  if (static_cast<int>(sol.assign.size()) != inst.num_clients)
    throw Error(ErrorKind::kInconsistent, "assignment length mismatch");
  std::vector<int> load(inst.num_facilities, 0);
  std::vector<char> is_open(inst.num_facilities, 0);
  for (int f : sol.open) {
    if (f < 0 || f >= inst.num_facilities)
      throw Error(ErrorKind::kInconsistent, "open facility id out of range: " + std::to_string(f));
    is_open[f] = 1;
  }
  Cost total = 0;
  for (int j = 0; j < inst.num_clients; ++j) {
    const int f = sol.assign[j];
    if (f == kPenalty) {
      if (!inst.penalties)
        throw Error(ErrorKind::kInconsistent,
                    "client " + std::to_string(j) + " penalized in an instance without penalties");
      total += (*inst.penalties)[j];
      continue;
    }
    if (f < 0 || f >= inst.num_facilities || !is_open[f])
      throw Error(ErrorKind::kInconsistent,
                  "client " + std::to_string(j) + " assigned to closed facility " + std::to_string(f));
    if (++load[f] > inst.capacity)
      throw Error(ErrorKind::kInconsistent,
                  "capacity exceeded at facility " + std::to_string(f));
    total += inst.cost[f][j];
  }
  return total;
}

/// Clients served by each facility, indexed by facility id.
inline std::vector<std::vector<int>> clients_by_facility(const Instance& inst,
                                                         const Solution& sol) {
  std::vector<std::vector<int>> out(inst.num_facilities);
  for (int j = 0; j < inst.num_clients; ++j)
    if (sol.assign[j] != kPenalty) out[sol.assign[j]].push_back(j);
  return out;
}

}  // namespace ckm

#endif  // CKM_INSTANCE_HPP
