#ifndef CKM_ASSIGNMENT_FLOW_HPP
#define CKM_ASSIGNMENT_FLOW_HPP

// Optimal capacitated assignment of clients to a fixed set of open facilities,
// solved as a min-cost flow on the bipartite network
//
//   source -> client (cap 1, cost 0)
//   client -> facility (cap 1, cost c(i,j))
//   client -> delta (cap 1, cost p_j)            penalty mode only
//   facility -> sink (cap U)
//   delta -> sink (cap |C|)                       penalty mode only
//
// Every source arc has capacity one, so |C| unit augmentations along shortest
// paths (Dijkstra on reduced costs) give an optimal integral flow.

#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "ckm/instance.hpp"

namespace ckm {

struct FlowArc {
  int from = 0;
  int to = 0;
  int capacity = 0;
  Cost cost = 0;
};

/// Node layout: 0 = source, 1..|C| = clients, then one node per open
/// facility in ascending id order, then the optional delta node, then sink.
struct FlowNetwork {
  int num_clients = 0;
  std::vector<int> facilities;  // node num_clients + 1 + t <-> facilities[t]
  bool penalty_mode = false;
  std::vector<FlowArc> arcs;

  int num_nodes() const {
    return 2 + num_clients + static_cast<int>(facilities.size()) + (penalty_mode ? 1 : 0);
  }
  int source() const { return 0; }
  int client_node(int j) const { return 1 + j; }
  int facility_node(int t) const { return 1 + num_clients + t; }
  int delta_node() const { return 1 + num_clients + static_cast<int>(facilities.size()); }
  int sink() const { return num_nodes() - 1; }
};

inline FlowNetwork build_network(const Instance& inst, std::vector<int> open,
                                 bool penalty_mode) {
  std::sort(open.begin(), open.end());
  open.erase(std::unique(open.begin(), open.end()), open.end());
  for (int f : open)
    if (f < 0 || f >= inst.num_facilities)
      throw Error(ErrorKind::kValidation, "facility id out of range: " + std::to_string(f));
  if (penalty_mode && !inst.penalties)
    throw Error(ErrorKind::kValidation, "penalty mode requires penalties");
  if (!penalty_mode &&
      static_cast<std::int64_t>(open.size()) * inst.capacity < inst.num_clients)
    throw Error(ErrorKind::kInfeasible, "insufficient capacity");

  FlowNetwork net;
  net.num_clients = inst.num_clients;
  net.facilities = std::move(open);
  net.penalty_mode = penalty_mode;
  const int nf = static_cast<int>(net.facilities.size());
  const int nc = inst.num_clients;
  net.arcs.reserve(static_cast<std::size_t>(nc) * (nf + 2) + nf + 1);

  for (int j = 0; j < nc; ++j) net.arcs.push_back({net.source(), net.client_node(j), 1, 0});
  for (int j = 0; j < nc; ++j) {
    for (int t = 0; t < nf; ++t)
      net.arcs.push_back({net.client_node(j), net.facility_node(t), 1,
                          inst.cost[net.facilities[t]][j]});
    if (penalty_mode)
      net.arcs.push_back({net.client_node(j), net.delta_node(), 1, (*inst.penalties)[j]});
  }
  for (int t = 0; t < nf; ++t)
    net.arcs.push_back({net.facility_node(t), net.sink(), inst.capacity, 0});
  if (penalty_mode) net.arcs.push_back({net.delta_node(), net.sink(), nc, 0});
  return net;
}

struct Assignment {
  std::vector<int> assign;  // facility id or kPenalty
  Cost cost = 0;
};

namespace detail {

// Residual graph for successive shortest paths. Arc 2e is forward, 2e+1 its
// reverse.
class ResidualGraph {
 public:
  explicit ResidualGraph(const FlowNetwork& net) : adj_(net.num_nodes()) {
    to_.reserve(net.arcs.size() * 2);
    for (const auto& a : net.arcs) {
      add(a.from, a.to, a.capacity, a.cost);
      add(a.to, a.from, 0, -a.cost);
    }
  }

  int num_nodes() const { return static_cast<int>(adj_.size()); }

  /// Pushes one unit along a shortest s-t path. Returns false when the sink
  /// is unreachable.
  bool augment_unit(int s, int t, std::vector<Cost>& potential, Cost& total) {
    constexpr Cost kInf = std::numeric_limits<Cost>::max();
    const int n = num_nodes();
    std::vector<Cost> dist(n, kInf);
    std::vector<int> pred_arc(n, -1);
    std::vector<char> done(n, 0);
    using Entry = std::pair<Cost, int>;  // (distance, node); smaller node wins ties
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    dist[s] = 0;
    heap.push({0, s});
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (done[u]) continue;
      done[u] = 1;
      for (int e : adj_[u]) {
        if (cap_[e] <= 0) continue;
        const int v = to_[e];
        if (done[v]) continue;
        const Cost nd = d + cost_[e] + potential[u] - potential[v];
        if (nd < dist[v]) {
          dist[v] = nd;
          pred_arc[v] = e;
          heap.push({nd, v});
        }
      }
    }
    if (dist[t] == kInf) return false;
    for (int v = 0; v < n; ++v)
      if (dist[v] != kInf) potential[v] += dist[v];
    for (int v = t; v != s; v = to_[pred_arc[v] ^ 1]) {
      const int e = pred_arc[v];
      cap_[e] -= 1;
      cap_[e ^ 1] += 1;
      total += cost_[e];
    }
    return true;
  }

  int residual(int arc_index) const { return cap_[2 * arc_index]; }

 private:
  void add(int from, int to, int cap, Cost cost) {
    adj_[from].push_back(static_cast<int>(to_.size()));
    to_.push_back(to);
    cap_.push_back(cap);
    cost_.push_back(cost);
  }

  std::vector<std::vector<int>> adj_;
  std::vector<int> to_;
  std::vector<int> cap_;
  std::vector<Cost> cost_;
};

}  // namespace detail

/// Min-cost integral flow of value |C|. Arcs are scanned in construction
/// order and Dijkstra ties resolve to the smaller node id, so the result is a
/// deterministic function of the network.
inline Assignment min_cost_assignment(const FlowNetwork& net) {
  detail::ResidualGraph g(net);
  // All original costs are non-negative, so zero potentials are feasible.
  std::vector<Cost> potential(net.num_nodes(), 0);
  Assignment out;
  out.assign.assign(net.num_clients, kPenalty);
  for (int unit = 0; unit < net.num_clients; ++unit) {
    if (!g.augment_unit(net.source(), net.sink(), potential, out.cost))
      throw Error(ErrorKind::kInfeasible, "insufficient capacity");
  }
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    const auto& arc = net.arcs[a];
    if (arc.from < 1 || arc.from > net.num_clients) continue;
    if (g.residual(static_cast<int>(a)) != 0) continue;  // unused
    const int j = arc.from - 1;
    if (net.penalty_mode && arc.to == net.delta_node()) {
      out.assign[j] = kPenalty;
    } else {
      out.assign[j] = net.facilities[arc.to - 1 - net.num_clients];
    }
  }
  return out;
}

/// Opens exactly `open` and assigns clients optimally.
inline Solution assign_to(const Instance& inst, const std::vector<int>& open,
                          bool penalty_mode) {
  FlowNetwork net = build_network(inst, open, penalty_mode);
  Assignment a = min_cost_assignment(net);
  Solution sol;
  sol.open = std::move(net.facilities);
  sol.assign = std::move(a.assign);
  sol.total_cost = a.cost;
  return sol;
}

}  // namespace ckm

#endif  // CKM_ASSIGNMENT_FLOW_HPP
