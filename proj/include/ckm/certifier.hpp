#ifndef CKM_CERTIFIER_HPP
#define CKM_CERTIFIER_HPP

// Rebuilds the 9-factor locality-gap argument for one concrete pair (S, O):
// heavy/light split, dominate/cover relations, the special-cover pairs, the
// client permutation tau, the swap plan and the summed swap inequalities.
// Every check is exact integer arithmetic; fractional thresholds such as
// 3U/5 are compared by cross-multiplication.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ckm/assignment_flow.hpp"
#include "ckm/instance.hpp"
#include "ckm/rational.hpp"

namespace ckm::cert {

using FacilitySet = std::set<int>;
using FacilityPair = std::pair<int, int>;  // always first < second

inline FacilityPair make_pair_sorted(int a, int b) {
  return a < b ? FacilityPair{a, b} : FacilityPair{b, a};
}

/// <s1, s2, o>: a nice pair together with the facility it specially covers.
struct Triplet {
  int s1 = 0;
  int s2 = 0;
  int o = 0;
  friend bool operator==(const Triplet&, const Triplet&) = default;
};

struct AnalysisContext {
  int capacity = 0;
  int num_clients = 0;
  std::vector<int> S;  // open facilities of the local solution
  std::vector<int> O;  // open facilities of the optimum
  std::vector<int> serve_S;  // per client
  std::vector<int> serve_O;
  std::vector<Cost> cost_S;  // per client service cost
  std::vector<Cost> cost_O;

  std::map<int, int> load;  // |B_S(s)|
  FacilitySet heavy;
  FacilitySet light;
  std::map<FacilityPair, int> ball;  // (s, o) -> |B_S(s) n B_O(o)|, nonzero entries only
  std::map<FacilityPair, std::vector<int>> ball_clients;
  std::map<int, int> shared_light;  // M_o
  std::map<int, FacilitySet> dom;   // light s -> dom(s)
  std::map<int, FacilitySet> cov;   // light s -> cov(s)

  FacilitySet O_sp;
  std::map<int, FacilityPair> P;  // o in O_sp -> its two covering light facilities
  std::map<int, FacilitySet> D;   // dom(P(o))
  std::map<int, FacilitySet> D_prime;
  FacilitySet D_sp;
  FacilitySet S_sp;

  std::vector<Triplet> bag;
  std::vector<std::pair<FacilityPair, FacilityPair>> good_pairs;  // ({s1,s2}, {o1,o2})
  std::vector<FacilityPair> bad_pairs;
  FacilitySet S_W, O_W, S_bag, O_bag, S_hat, O_hat;
  FacilitySet S_g, S_b, S_n, O_g, O_b, O_n;
  std::map<int, int> good_of;  // o in O_g -> the good facility dominating it
  std::vector<int> T_set;
  int ell = 0;

  int ball_of(int s, int o) const {
    auto it = ball.find({s, o});
    return it == ball.end() ? 0 : it->second;
  }
  int M(int o) const {
    auto it = shared_light.find(o);
    return it == shared_light.end() ? 0 : it->second;
  }
};

/// dom(T): optimum facilities o with sum_{s in T} ball(s,o) > M_o / 2.
inline FacilitySet dominated_by(const AnalysisContext& ctx, const FacilitySet& group) {
  FacilitySet out;
  for (int o : ctx.O) {
    std::int64_t shared = 0;
    for (int s : group) shared += ctx.ball_of(s, o);
    if (2 * shared > ctx.M(o)) out.insert(o);
  }
  return out;
}

inline bool covers(const AnalysisContext& ctx, std::int64_t shared) {
  return 5 * shared > 2 * static_cast<std::int64_t>(ctx.capacity);
}

namespace detail {

inline std::vector<int> sorted_open(const Solution& sol) {
  std::vector<int> v = sol.open;
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

template <class C>
std::string join(const C& items) {
  std::string s = "{";
  bool first = true;
  for (const auto& x : items) {
    s += (first ? "" : ",") + std::to_string(x);
    first = false;
  }
  return s + "}";
}

}  // namespace detail

/// Computes every analysis set for (S, O). Both solutions must assign every
/// client (no penalties).
inline AnalysisContext build_context(const Instance& inst, const Solution& S,
                                     const Solution& O) {
  if (inst.penalties)
    throw Error(ErrorKind::kValidation, "certifier requires an instance without penalties");
  cost_of(inst, S);  // throws on inconsistency
  cost_of(inst, O);

  AnalysisContext ctx;
  ctx.capacity = inst.capacity;
  ctx.num_clients = inst.num_clients;
  ctx.S = detail::sorted_open(S);
  ctx.O = detail::sorted_open(O);
  ctx.serve_S = S.assign;
  ctx.serve_O = O.assign;
  for (int j = 0; j < inst.num_clients; ++j) {
    ctx.cost_S.push_back(inst.cost[S.assign[j]][j]);
    ctx.cost_O.push_back(inst.cost[O.assign[j]][j]);
  }

  const std::int64_t U = inst.capacity;
  for (int s : ctx.S) ctx.load[s] = 0;
  for (int j = 0; j < inst.num_clients; ++j) {
    ++ctx.load[ctx.serve_S[j]];
    ++ctx.ball[{ctx.serve_S[j], ctx.serve_O[j]}];
    ctx.ball_clients[{ctx.serve_S[j], ctx.serve_O[j]}].push_back(j);
  }
  for (int s : ctx.S) {
    if (5 * static_cast<std::int64_t>(ctx.load[s]) > 3 * U)
      ctx.heavy.insert(s);
    else
      ctx.light.insert(s);
  }
  for (int o : ctx.O) {
    int m = 0;
    for (int s : ctx.light) m += ctx.ball_of(s, o);
    ctx.shared_light[o] = m;
  }
  for (int s : ctx.light) {
    ctx.dom[s] = dominated_by(ctx, {s});
    FacilitySet c;
    for (int o : ctx.O)
      if (covers(ctx, ctx.ball_of(s, o))) c.insert(o);
    ctx.cov[s] = std::move(c);
  }

  // Specially covered facilities and their pairs.
  for (int o : ctx.O) {
    std::vector<int> coverers;
    for (int s : ctx.light)
      if (ctx.cov[s].count(o)) coverers.push_back(s);
    if (coverers.size() == 2) {
      ctx.O_sp.insert(o);
      ctx.P[o] = make_pair_sorted(coverers[0], coverers[1]);
    }
  }
  for (const auto& [o, pr] : ctx.P) {
    ctx.D[o] = dominated_by(ctx, {pr.first, pr.second});
    FacilitySet rest = ctx.D[o];
    rest.erase(o);
    ctx.D_prime[o] = rest;
    ctx.D_sp.insert(rest.begin(), rest.end());
    ctx.S_sp.insert(pr.first);
    ctx.S_sp.insert(pr.second);
  }

  // Nice, good and bad pairs.
  for (const auto& [o, pr] : ctx.P) {
    const FacilitySet& d = ctx.D[o];
    if (d.size() == 1) {
      ctx.bag.push_back({pr.first, pr.second, o});
      ctx.O_bag.insert(d.begin(), d.end());
      ctx.S_bag.insert(pr.first);
      ctx.S_bag.insert(pr.second);
    } else if (d.size() == 2) {
      const int other = *d.begin() == o ? *d.rbegin() : *d.begin();
      ctx.good_pairs.push_back({pr, make_pair_sorted(o, other)});
      ctx.O_W.insert(d.begin(), d.end());
      ctx.S_W.insert(pr.first);
      ctx.S_W.insert(pr.second);
    } else {
      ctx.bad_pairs.push_back(pr);
      ctx.O_hat.insert(d.begin(), d.end());
      ctx.S_hat.insert(pr.first);
      ctx.S_hat.insert(pr.second);
    }
  }

  // Remaining light facilities: good, bad, nice.
  FacilitySet O_prime = ctx.O_sp;
  O_prime.insert(ctx.D_sp.begin(), ctx.D_sp.end());
  for (int s : ctx.light) {
    if (ctx.S_sp.count(s)) continue;
    const FacilitySet& d = ctx.dom[s];
    if (d.empty()) {
      ctx.S_n.insert(s);
    } else if (d.size() == 1) {
      ctx.S_g.insert(s);
      ctx.O_g.insert(*d.begin());
      ctx.good_of[*d.begin()] = s;
    } else {
      ctx.S_b.insert(s);
      ctx.O_b.insert(d.begin(), d.end());
    }
  }
  ctx.S_W.insert(ctx.S_g.begin(), ctx.S_g.end());
  ctx.O_W.insert(ctx.O_g.begin(), ctx.O_g.end());
  ctx.S_hat.insert(ctx.S_b.begin(), ctx.S_b.end());
  ctx.O_hat.insert(ctx.O_b.begin(), ctx.O_b.end());
  O_prime.insert(ctx.O_W.begin(), ctx.O_W.end());
  O_prime.insert(ctx.O_hat.begin(), ctx.O_hat.end());
  for (int o : ctx.O)
    if (!O_prime.count(o) && !ctx.O_bag.count(o)) ctx.O_n.insert(o);

  FacilitySet T = ctx.O_hat;
  T.insert(ctx.O_n.begin(), ctx.O_n.end());
  ctx.T_set.assign(T.begin(), T.end());
  ctx.ell = static_cast<int>(T.size());
  return ctx;
}

// ---------------------------------------------------------------------------
// Claim checks

struct ClaimResult {
  std::string name;
  bool passed = true;
  std::string witness;  // empty when passed
};

struct ClaimReport {
  std::vector<ClaimResult> claims;

  bool all_passed() const {
    return std::all_of(claims.begin(), claims.end(), [](const auto& c) { return c.passed; });
  }
  const ClaimResult* find(const std::string& name) const {
    for (const auto& c : claims)
      if (c.name == name) return &c;
    return nullptr;
  }
  void add(std::string name, std::optional<std::string> failure) {
    claims.push_back({std::move(name), !failure.has_value(), failure.value_or("")});
  }
  /// Same-named claims combine: a claim passes only if every instance did,
  /// and the first failure's witness is kept.
  void merge(const ClaimReport& other) {
    for (const auto& c : other.claims) {
      auto it = std::find_if(claims.begin(), claims.end(),
                             [&](const ClaimResult& x) { return x.name == c.name; });
      if (it == claims.end()) {
        claims.push_back(c);
      } else if (it->passed && !c.passed) {
        *it = c;
      }
    }
  }
};

/// Definitional facts about dominate/cover plus the three disjointness claims
/// on special-cover structures. Reads only the stored fields of `ctx`.
inline ClaimReport check_structure_claims(const AnalysisContext& ctx) {
  ClaimReport report;

  {
    std::optional<std::string> fail;
    std::map<int, int> dominator;
    for (const auto& [s, d] : ctx.dom)
      for (int o : d) {
        if (dominator.count(o) && !fail)
          fail = "o=" + std::to_string(o) + " dominated by s=" + std::to_string(dominator[o]) +
                 " and s=" + std::to_string(s);
        dominator[o] = s;
      }
    report.add("single_dominator", fail);
  }
  {
    std::optional<std::string> fail;
    for (const auto& [s, c] : ctx.cov)
      if (c.size() > 1 && !fail)
        fail = "s=" + std::to_string(s) + " covers " + detail::join(c);
    report.add("light_covers_at_most_one", fail);
  }
  {
    std::optional<std::string> fail;
    std::map<int, int> count;
    for (const auto& [s, c] : ctx.cov)
      for (int o : c)
        if (++count[o] > 2 && !fail) fail = "o=" + std::to_string(o) + " covered 3+ times";
    report.add("covered_at_most_twice", fail);
  }
  {
    std::optional<std::string> fail;
    std::map<int, int> owner;
    for (const auto& [o, pr] : ctx.P)
      for (int s : {pr.first, pr.second}) {
        if (owner.count(s) && !fail)
          fail = "s=" + std::to_string(s) + " in P(" + std::to_string(owner[s]) + ") and P(" +
                 std::to_string(o) + ")";
        owner[s] = o;
      }
    report.add("claim3_pairs_disjoint", fail);
  }
  {
    std::optional<std::string> fail;
    std::map<int, int> owner;
    for (const auto& [o, d] : ctx.D)
      for (int x : d) {
        if (owner.count(x) && !fail)
          fail = "o'=" + std::to_string(x) + " in D(" + std::to_string(owner[x]) + ") and D(" +
                 std::to_string(o) + ")";
        owner[x] = o;
      }
    report.add("claim4_dominated_sets_disjoint", fail);
  }
  {
    std::optional<std::string> fail;
    for (int x : ctx.D_sp)
      if (ctx.O_sp.count(x) && !fail) fail = "o=" + std::to_string(x) + " in D_sp and O_sp";
    report.add("claim5_dsp_osp_disjoint", fail);
  }
  return report;
}

/// Counting facts that make the swap plan feasible.
inline ClaimReport check_counting(const AnalysisContext& ctx) {
  ClaimReport report;
  const std::int64_t U = ctx.capacity;
  const std::int64_t lhs = static_cast<std::int64_t>(ctx.heavy.size()) * 3 * U;
  report.add("heavy_count_bound",
             lhs < 5 * static_cast<std::int64_t>(ctx.num_clients)
                 ? std::nullopt
                 : std::optional<std::string>("|S_H|*3U=" + std::to_string(lhs) +
                                              " >= 5|C|=" + std::to_string(5 * ctx.num_clients)));
  report.add("light_at_least_k",
             ctx.light.size() >= ctx.O.size()
                 ? std::nullopt
                 : std::optional<std::string>("|S_L|=" + std::to_string(ctx.light.size()) +
                                              " < |O|=" + std::to_string(ctx.O.size())));
  const auto supply = 3 * static_cast<std::int64_t>(ctx.bag.size() + ctx.S_n.size());
  const auto demand = static_cast<std::int64_t>(ctx.O_hat.size() + ctx.O_n.size());
  report.add("claim7_counting",
             supply >= demand ? std::nullopt
                              : std::optional<std::string>("3(|bag|+|S_n|)=" + std::to_string(supply) +
                                                           " < |O_hat|+|O_n|=" +
                                                           std::to_string(demand)));
  return report;
}

// ---------------------------------------------------------------------------
// Client permutation tau

struct TauMapping {
  int o = 0;
  std::vector<int> order;      // j_0 .. j_{M_o - 1}
  std::map<int, int> image;    // j -> tau(j)
  std::vector<FacilityPair> meta_pairs;
};

/// Orders B_O^L(o) in consecutive blocks (facility id ascending, a meta pair
/// contributing both of its blocks back to back) and shifts by floor(M_o/2).
inline TauMapping build_tau(const AnalysisContext& ctx, int o,
                            const std::vector<FacilityPair>& meta_pairs) {
  TauMapping tau;
  tau.o = o;
  tau.meta_pairs = meta_pairs;
  std::map<int, int> partner;
  for (const auto& pr : meta_pairs) {
    partner[pr.first] = pr.second;
    partner[pr.second] = pr.first;
  }
  auto append_block = [&](int s) {
    auto it = ctx.ball_clients.find({s, o});
    if (it == ctx.ball_clients.end()) return;
    std::vector<int> block = it->second;
    std::sort(block.begin(), block.end());
    tau.order.insert(tau.order.end(), block.begin(), block.end());
  };
  for (int s : ctx.light) {
    auto p = partner.find(s);
    if (p == partner.end()) {
      append_block(s);
    } else if (s < p->second) {
      append_block(s);
      if (ctx.light.count(p->second)) append_block(p->second);
    }
  }
  const int m = static_cast<int>(tau.order.size());
  const int shift = m / 2;
  for (int p = 0; p < m; ++p) tau.image[tau.order[p]] = tau.order[(p + shift) % m];
  return tau;
}

/// Bijectivity plus both mapping properties, for single light facilities
/// and for each meta pair.
inline ClaimReport check_tau(const AnalysisContext& ctx, const TauMapping& tau) {
  ClaimReport report;
  const int o = tau.o;

  std::set<int> domain;
  for (int s : ctx.light) {
    auto it = ctx.ball_clients.find({s, o});
    if (it != ctx.ball_clients.end()) domain.insert(it->second.begin(), it->second.end());
  }
  {
    std::optional<std::string> fail;
    std::set<int> keys, values;
    for (const auto& [j, t] : tau.image) keys.insert(j), values.insert(t);
    if (keys != domain || values != domain || tau.image.size() != domain.size())
      fail = "tau for o=" + std::to_string(o) + " is not a bijection on B_O^L(o)";
    report.add("tau_bijective", fail);
  }

  auto image_of = [&](int j) {
    auto it = tau.image.find(j);
    return it == tau.image.end() ? -1 : it->second;
  };
  auto members = [&](const FacilitySet& group) {
    std::set<int> out;
    for (int s : group) {
      auto it = ctx.ball_clients.find({s, o});
      if (it != ctx.ball_clients.end()) out.insert(it->second.begin(), it->second.end());
    }
    return out;
  };

  // Units: every light facility alone, and each meta pair.
  std::vector<FacilitySet> units;
  for (int s : ctx.light) units.push_back({s});
  for (const auto& pr : tau.meta_pairs) units.push_back({pr.first, pr.second});

  std::optional<std::string> fail1, fail2;
  const bool special = ctx.O_sp.count(o) > 0;
  for (const auto& unit : units) {
    if (dominated_by(ctx, unit).count(o)) continue;
    const std::set<int> own = members(unit);
    for (int j : own)
      if (own.count(image_of(j)) && !fail1)
        fail1 = "o=" + std::to_string(o) + ": tau maps client " + std::to_string(j) +
                " of " + detail::join(unit) + " back into the same ball";
    if (special) continue;
    for (int other : ctx.light) {
      if (unit.count(other)) continue;
      const std::set<int> theirs = members({other});
      std::int64_t moved = 0;
      for (int j : own)
        if (theirs.count(image_of(j))) ++moved;
      if (5 * moved > 2 * static_cast<std::int64_t>(ctx.capacity) && !fail2)
        fail2 = "o=" + std::to_string(o) + ": " + std::to_string(moved) + " clients of " +
                detail::join(unit) + " map into s=" + std::to_string(other);
    }
  }
  report.add("tau_property1_no_self_map", fail1);
  report.add("tau_property2_load_bound", fail2);
  return report;
}

// ---------------------------------------------------------------------------
// Swap plan

struct PlannedSwap {
  std::vector<int> out;  // swapped out, subset of S_L
  std::vector<int> in;   // swapped in, subset of O
  std::string origin;
  Cost inequality_value = 0;
  std::optional<Cost> realized_delta;  // cost(S \ out u in) - cost(S) when feasible
};

struct SwapPlan {
  std::vector<PlannedSwap> swaps;
  std::map<int, int> participation_S;
  std::map<int, int> participation_O;
  std::vector<FacilityPair> double_swapped;  // DS

  void add(std::vector<int> out, std::vector<int> in, std::string origin) {
    for (int s : out) ++participation_S[s];
    for (int o : in) ++participation_O[o];
    if (out.size() == 2) {
      auto pr = make_pair_sorted(out[0], out[1]);
      if (std::find(double_swapped.begin(), double_swapped.end(), pr) == double_swapped.end())
        double_swapped.push_back(pr);
    }
    swaps.push_back({std::move(out), std::move(in), std::move(origin), 0, std::nullopt});
  }
};

/// Special-cover pairs first (double swap for good pairs), then good single
/// facilities, then T = O_hat u O_n in batches of three served by a nice
/// facility or a nice-pair triplet. A triplet that is never drawn on still
/// gets its own o swapped in once, against its smaller facility.
inline SwapPlan build_swap_plan(const AnalysisContext& ctx) {
  SwapPlan plan;
  for (const auto& [pr, os] : ctx.good_pairs)
    plan.add({pr.first, pr.second}, {os.first, os.second}, "good_pair");
  for (const auto& [o, s] : ctx.good_of) plan.add({s}, {o}, "good");

  const auto supply = ctx.bag.size() + ctx.S_n.size();
  if (3 * supply < ctx.T_set.size())
    throw Error(ErrorKind::kCertification,
                "claim 7 violated: " + std::to_string(supply) + " nice units for ell=" +
                    std::to_string(ctx.ell));

  std::vector<int> nice(ctx.S_n.begin(), ctx.S_n.end());
  std::vector<Triplet> triplets = ctx.bag;
  std::sort(triplets.begin(), triplets.end(),
            [](const Triplet& a, const Triplet& b) { return a.o < b.o; });
  std::size_t next_nice = 0, next_triplet = 0;
  for (std::size_t start = 0; start < ctx.T_set.size(); start += 3) {
    const std::size_t stop = std::min(start + 3, ctx.T_set.size());
    if (next_nice < nice.size()) {
      const int s = nice[next_nice++];
      for (std::size_t t = start; t < stop; ++t) plan.add({s}, {ctx.T_set[t]}, "nice");
    } else {
      const Triplet& tr = triplets[next_triplet++];
      for (std::size_t t = start; t < stop; ++t)
        plan.add({tr.s1, tr.s2}, {tr.o, ctx.T_set[t]}, "triplet");
    }
  }
  for (std::size_t t = next_triplet; t < triplets.size(); ++t)
    plan.add({std::min(triplets[t].s1, triplets[t].s2)}, {triplets[t].o}, "idle_triplet");
  return plan;
}

/// Participation bounds and the single/double swap admissibility properties.
inline ClaimReport check_plan(const AnalysisContext& ctx, const SwapPlan& plan) {
  ClaimReport report;
  std::optional<std::string> shape, o_bounds, heavy, s_bounds, single, dbl;
  for (const auto& sw : plan.swaps) {
    if ((sw.out.size() != sw.in.size() || sw.out.empty() || sw.out.size() > 2) && !shape)
      shape = "swap with |A|=" + std::to_string(sw.out.size()) +
                          ", |B|=" + std::to_string(sw.in.size());
    for (int s : sw.out)
      if (ctx.heavy.count(s) && !heavy) heavy = "heavy s=" + std::to_string(s) + " swapped out";
  }
  for (int o : ctx.O) {
    auto it = plan.participation_O.find(o);
    const int n = it == plan.participation_O.end() ? 0 : it->second;
    if ((n < 1 || n > 3) && !o_bounds)
      o_bounds = "o=" + std::to_string(o) + " in " + std::to_string(n) + " swaps";
  }
  for (const auto& [s, n] : plan.participation_S)
    if (n > 3 && !s_bounds) s_bounds = "s=" + std::to_string(s) + " in " + std::to_string(n) + " swaps";

  auto in_other_pair = [&](int s, const std::vector<int>& allowed) {
    for (const auto& [o, pr] : ctx.P)
      if ((pr.first == s || pr.second == s) &&
          std::find(allowed.begin(), allowed.end(), o) == allowed.end())
        return true;
    return false;
  };
  for (const auto& sw : plan.swaps) {
    if (sw.out.size() == 1 && sw.in.size() == 1) {
      const FacilitySet d = dominated_by(ctx, {sw.out[0]});
      const bool bad_dom = std::any_of(d.begin(), d.end(), [&](int o) { return o != sw.in[0]; });
      if ((bad_dom || in_other_pair(sw.out[0], sw.in)) && !single)
        single = "swap(" + std::to_string(sw.out[0]) + "," + std::to_string(sw.in[0]) +
                 ") not admissible";
    } else if (sw.out.size() == 2 && sw.in.size() == 2) {
      const FacilitySet d = dominated_by(ctx, {sw.out[0], sw.out[1]});
      const bool bad_dom = std::any_of(d.begin(), d.end(), [&](int o) {
        return o != sw.in[0] && o != sw.in[1];
      });
      if ((bad_dom || in_other_pair(sw.out[0], sw.in) || in_other_pair(sw.out[1], sw.in)) && !dbl)
        dbl = "double swap " + detail::join(sw.out) + "->" + detail::join(sw.in) + " not admissible";
    }
  }
  report.add("plan_swap_shape", shape);
  report.add("plan_optimum_participation_1_to_3", o_bounds);
  report.add("plan_heavy_never_swapped", heavy);
  report.add("plan_light_participation_at_most_3", s_bounds);
  report.add("plan_single_swap_admissible", single);
  report.add("plan_double_swap_admissible", dbl);
  return report;
}

// ---------------------------------------------------------------------------
// Partition into (A_i, B_i) groups for multi-swaps

struct PartitionResult {
  std::vector<std::vector<int>> A_parts;
  std::vector<std::vector<int>> B_parts;
};

/// Each bad facility or bad pair seeds a group A_i; nice facilities and
/// triplet members (smallest id first) are added until |A_i| = |dom(A_i)|.
/// What is left over forms the final group.
inline PartitionResult partition_TS(const AnalysisContext& ctx) {
  FacilitySet T_soln = ctx.S_bag;
  T_soln.insert(ctx.S_hat.begin(), ctx.S_hat.end());
  T_soln.insert(ctx.S_b.begin(), ctx.S_b.end());
  T_soln.insert(ctx.S_n.begin(), ctx.S_n.end());
  FacilitySet T_opt = ctx.O_bag;
  T_opt.insert(ctx.O_hat.begin(), ctx.O_hat.end());
  T_opt.insert(ctx.O_b.begin(), ctx.O_b.end());
  T_opt.insert(ctx.O_n.begin(), ctx.O_n.end());

  std::vector<FacilitySet> seeds;
  for (const auto& pr : ctx.bad_pairs) seeds.push_back({pr.first, pr.second});
  for (int s : ctx.S_b) seeds.push_back({s});
  std::sort(seeds.begin(), seeds.end(),
            [](const FacilitySet& a, const FacilitySet& b) { return *a.begin() < *b.begin(); });

  PartitionResult res;
  for (const auto& seed : seeds) {
    FacilitySet A = seed;
    FacilitySet B = dominated_by(ctx, A);
    while (A.size() != B.size()) {
      if (A.size() > B.size())
        throw Error(ErrorKind::kCertification,
                    "partition stuck: |A|=" + std::to_string(A.size()) + " > |dom(A)|=" +
                        std::to_string(B.size()) + " for seed " + detail::join(seed));
      int filler = -1;
      for (int g : T_soln)
        if ((ctx.S_bag.count(g) || ctx.S_n.count(g)) && !A.count(g)) {
          filler = g;
          break;
        }
      if (filler < 0)
        throw Error(ErrorKind::kCertification,
                    "partition stuck: no filler for seed " + detail::join(seed));
      A.insert(filler);
      B = dominated_by(ctx, A);
    }
    for (int s : A) T_soln.erase(s);
    for (int o : B) T_opt.erase(o);
    res.A_parts.emplace_back(A.begin(), A.end());
    res.B_parts.emplace_back(B.begin(), B.end());
  }
  res.A_parts.emplace_back(T_soln.begin(), T_soln.end());
  res.B_parts.emplace_back(T_opt.begin(), T_opt.end());
  return res;
}

inline ClaimReport check_partition(const AnalysisContext& ctx, const PartitionResult& part) {
  ClaimReport report;
  std::optional<std::string> sizes, doms, seeds, last, disjoint;
  const std::size_t r = part.A_parts.size();
  if (r == 0 || part.B_parts.size() != r) {
    report.add("partition_shape", "A and B part counts differ or are empty");
    return report;
  }
  report.add("partition_shape", std::nullopt);

  std::set<FacilityPair> bad_pairs(ctx.bad_pairs.begin(), ctx.bad_pairs.end());
  FacilitySet seen_A, seen_B;
  for (std::size_t i = 0; i < r; ++i) {
    const auto& A = part.A_parts[i];
    const auto& B = part.B_parts[i];
    for (int s : A)
      if (!seen_A.insert(s).second && !disjoint) disjoint = "s=" + std::to_string(s) + " in two parts";
    for (int o : B)
      if (!seen_B.insert(o).second && !disjoint) disjoint = "o=" + std::to_string(o) + " in two parts";
    if (i + 1 == r) {
      for (int s : A)
        if (!ctx.S_bag.count(s) && !ctx.S_n.count(s) && !last)
          last = "final part holds s=" + std::to_string(s);
      if (A.size() < B.size() && !last) last = "final part has |A| < |B|";
      continue;
    }
    if (A.size() != B.size() && !sizes)
      sizes = "part " + std::to_string(i) + ": |A|=" + std::to_string(A.size()) +
              " |B|=" + std::to_string(B.size());
    const FacilitySet d = dominated_by(ctx, FacilitySet(A.begin(), A.end()));
    if (d != FacilitySet(B.begin(), B.end()) && !doms)
      doms = "part " + std::to_string(i) + ": B != dom(A)";
    int bad_singles = 0, bad_pair_count = 0, other = 0;
    for (int s : A) {
      if (ctx.S_b.count(s)) ++bad_singles;
      else if (ctx.S_bag.count(s) || ctx.S_n.count(s)) continue;
      else if (ctx.S_hat.count(s)) ++bad_pair_count;
      else ++other;
    }
    bool pair_whole = true;
    if (bad_pair_count == 2) {
      std::vector<int> members;
      for (int s : A)
        if (ctx.S_hat.count(s) && !ctx.S_b.count(s)) members.push_back(s);
      pair_whole = bad_pairs.count(make_pair_sorted(members[0], members[1])) > 0;
    }
    const bool one_seed = other == 0 && ((bad_singles == 1 && bad_pair_count == 0) ||
                                         (bad_singles == 0 && bad_pair_count == 2 && pair_whole));
    if (!one_seed && !seeds)
      seeds = "part " + std::to_string(i) + " does not hold exactly one bad facility or bad pair";
  }
  report.add("partition_sizes_equal", sizes);
  report.add("partition_B_is_dom_A", doms);
  report.add("partition_one_bad_seed", seeds);
  report.add("partition_final_part", last);
  report.add("partition_disjoint", disjoint);
  return report;
}

// ---------------------------------------------------------------------------
// Swap inequalities and the summed bound

struct CertificateReport {
  ClaimReport claims;
  SwapPlan plan;
  std::optional<PartitionResult> partition;
  Cost cost_S = 0;
  Cost cost_O = 0;
  Rational delta_imp;
  std::vector<std::string> failures;
  // Exact bound cost(S) <= bound_num / bound_den.
  __int128 bound_num = 0;
  std::int64_t bound_den = 1;
  bool certified = false;

  double certified_bound() const {
    return static_cast<double>(bound_num) / static_cast<double>(bound_den);
  }
  double measured_ratio() const {
    if (cost_O == 0) return cost_S == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    return static_cast<double>(cost_S) / static_cast<double>(cost_O);
  }
};

namespace detail {

// R_j = O_j + O_tau(j) + S_tau(j) - S_j for a client of a light facility.
inline Cost reassignment_term(const AnalysisContext& ctx, const std::map<int, int>& tau, int j) {
  const int t = tau.at(j);
  return ctx.cost_O[j] + ctx.cost_O[t] + ctx.cost_S[t] - ctx.cost_S[j];
}

}  // namespace detail

/// Evaluates every planned swap inequality and sums them. Each swap must
/// satisfy value >= -delta_imp * cost(S); the sum then gives
/// cost(S) <= 9 cost(O) + 3 * delta_imp * cost(S) * (#swaps).
inline void evaluate_plan(const Instance& inst, const Solution& S, const AnalysisContext& ctx,
                          SwapPlan& plan, const std::vector<TauMapping>& taus,
                          const Rational& delta_imp, CertificateReport& report) {
  std::map<int, int> tau;
  for (const auto& t : taus) tau.insert(t.image.begin(), t.image.end());

  std::map<int, std::vector<int>> B_S, B_O;
  for (int j = 0; j < ctx.num_clients; ++j) {
    B_S[ctx.serve_S[j]].push_back(j);
    B_O[ctx.serve_O[j]].push_back(j);
  }
  Cost cost_S = 0, cost_O = 0;
  for (int j = 0; j < ctx.num_clients; ++j) cost_S += ctx.cost_S[j], cost_O += ctx.cost_O[j];
  report.cost_S = cost_S;
  report.cost_O = cost_O;
  report.delta_imp = delta_imp;

  std::map<int, Cost> R;  // per client of a light facility
  std::optional<std::string> metric_fail;
  for (int s : ctx.light)
    for (int j : B_S[s]) {
      R[j] = detail::reassignment_term(ctx, tau, j);
      if (R[j] < 0 && !metric_fail)
        metric_fail = "client " + std::to_string(j) + ": S_j > O_j + O_tau(j) + S_tau(j)";
    }
  report.claims.add("reassignment_terms_nonnegative", metric_fail);

  using I = __int128;
  I sum_values = 0;
  std::optional<std::string> local_fail;
  for (auto& sw : plan.swaps) {
    FacilitySet ins(sw.in.begin(), sw.in.end());
    FacilitySet outs(sw.out.begin(), sw.out.end());
    Cost v = 0;
    for (int o : ins)
      for (int j : B_O[o]) v += ctx.cost_O[j] - ctx.cost_S[j];
    for (int s : outs)
      for (int j : B_S[s])
        if (auto it = R.find(j); it != R.end()) v += it->second;
    sw.inequality_value = v;
    sum_values += v;
    if (static_cast<I>(v) * delta_imp.den < -static_cast<I>(delta_imp.num) * cost_S && !local_fail) {
      local_fail = "swap " + detail::join(sw.out) + "->" + detail::join(sw.in) + " has value " +
                   std::to_string(v);
      // An optimum facility that is already open keeps serving its own
      // clients, so moving all of B_O(o) onto it can exceed capacity.
      for (int o : ins)
        if (std::binary_search(ctx.S.begin(), ctx.S.end(), o))
          *local_fail += " (o=" + std::to_string(o) + " already open in S)";
    }

    // Realized change under the optimal reassignment, when the set is feasible.
    std::vector<int> next;
    for (int f : ctx.S)
      if (!outs.count(f)) next.push_back(f);
    for (int o : ins)
      if (!std::binary_search(next.begin(), next.end(), o)) next.push_back(o);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    if (static_cast<std::int64_t>(next.size()) * inst.capacity >= inst.num_clients)
      sw.realized_delta = assign_to(inst, next, false).total_cost - S.total_cost;
  }
  report.claims.add("swap_inequalities_within_slack", local_fail);
  if (local_fail) report.failures.push_back("local optimality violated: " + *local_fail);

  // Regroup the sum: sum_o n_o sum_{B_O(o)} (O_j - S_j) + sum_s m_s sum_{B_S(s)} R_j.
  I regrouped = 0;
  for (const auto& [o, n] : plan.participation_O)
    for (int j : B_O[o]) regrouped += static_cast<I>(n) * (ctx.cost_O[j] - ctx.cost_S[j]);
  for (const auto& [s, n] : plan.participation_S)
    for (int j : B_S[s])
      if (auto it = R.find(j); it != R.end()) regrouped += static_cast<I>(n) * it->second;
  report.claims.add("sum_regrouping",
                    regrouped == sum_values ? std::nullopt
                                            : std::optional<std::string>("regrouped sum differs"));

  // tau is a bijection on the light clients, so sum R_j = 2 sum O_j there.
  I sum_R = 0, light_O = 0;
  for (const auto& [j, r] : R) sum_R += r, light_O += ctx.cost_O[j];
  report.claims.add("reassignment_sum_identity",
                    sum_R == 2 * light_O ? std::nullopt
                                         : std::optional<std::string>("sum R_j != 2 sum O_j"));

  // sum values <= 3 cost(O) - cost(S) + 3 sum R_j <= 9 cost(O) - cost(S).
  const I chain_rhs = 3 * static_cast<I>(cost_O) - cost_S + 3 * sum_R;
  const bool chain_ok = sum_values <= chain_rhs && 3 * sum_R <= 6 * static_cast<I>(cost_O);
  report.claims.add("summed_chain",
                    chain_ok ? std::nullopt
                             : std::optional<std::string>("summed inequality exceeds 9 cost(O) - cost(S)"));

  const I swaps = static_cast<I>(plan.swaps.size());
  report.bound_den = delta_imp.den;
  report.bound_num = 9 * static_cast<I>(cost_O) * delta_imp.den + 3 * swaps * delta_imp.num * cost_S;
  const bool bound_ok = static_cast<I>(cost_S) * report.bound_den <= report.bound_num;
  report.claims.add("certified_bound_holds",
                    bound_ok ? std::nullopt
                             : std::optional<std::string>("cost(S) exceeds the certified bound"));
}

/// Full pipeline for one (S, O) pair: context, claims, plan, tau, partition,
/// inequalities. Never throws on a failed check; failures land in the report.
inline CertificateReport certify(const Instance& inst, const Solution& S, const Solution& O,
                                 const Rational& delta_imp) {
  CertificateReport report;
  AnalysisContext ctx = build_context(inst, S, O);
  report.claims.merge(check_structure_claims(ctx));
  report.claims.merge(check_counting(ctx));

  try {
    report.plan = build_swap_plan(ctx);
  } catch (const Error& e) {
    report.failures.push_back(e.what());
  }
  report.claims.merge(check_plan(ctx, report.plan));

  std::vector<TauMapping> taus;
  for (int o : ctx.O) {
    taus.push_back(build_tau(ctx, o, report.plan.double_swapped));
    report.claims.merge(check_tau(ctx, taus.back()));
  }

  try {
    report.partition = partition_TS(ctx);
    report.claims.merge(check_partition(ctx, *report.partition));
  } catch (const Error& e) {
    report.failures.push_back(e.what());
  }

  evaluate_plan(inst, S, ctx, report.plan, taus, delta_imp, report);
  for (const auto& c : report.claims.claims)
    if (!c.passed) report.failures.push_back(c.name + ": " + c.witness);
  std::sort(report.failures.begin(), report.failures.end());
  report.failures.erase(std::unique(report.failures.begin(), report.failures.end()),
                        report.failures.end());
  report.certified = report.failures.empty();
  return report;
}

}  // namespace ckm::cert

#endif  // CKM_CERTIFIER_HPP
