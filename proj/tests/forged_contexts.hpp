#ifndef CKM_TESTS_FORGED_CONTEXTS_HPP
#define CKM_TESTS_FORGED_CONTEXTS_HPP

// Hand-built analysis contexts and deliberately broken ones for negative
// tests of the certifier's checkers.

#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ckm/certifier.hpp"

namespace ckm::testing {

struct HandCase {
  Instance inst;
  Solution S;
  Solution O;
  cert::AnalysisContext ctx;
};

/// One client per (s, o) entry, numbered in list order; unit costs. Extra
/// open facilities with no clients may be listed in `idle_S` / `idle_O`.
inline HandCase hand_case(int capacity, int num_facilities,
                          const std::vector<std::pair<int, int>>& clients,
                          const std::vector<int>& idle_S = {},
                          const std::vector<int>& idle_O = {}) {
  HandCase hc;
  const int nc = static_cast<int>(clients.size());
  hc.inst.num_facilities = num_facilities;
  hc.inst.num_clients = nc;
  hc.inst.capacity = capacity;
  hc.inst.cost.assign(num_facilities, std::vector<Cost>(nc, 1));
  std::set<int> s_open(idle_S.begin(), idle_S.end()), o_open(idle_O.begin(), idle_O.end());
  for (const auto& [s, o] : clients) {
    s_open.insert(s);
    o_open.insert(o);
    hc.S.assign.push_back(s);
    hc.O.assign.push_back(o);
  }
  hc.S.open.assign(s_open.begin(), s_open.end());
  hc.O.open.assign(o_open.begin(), o_open.end());
  hc.S.total_cost = hc.O.total_cost = nc;
  hc.inst.k = static_cast<int>(o_open.size());
  hc.ctx = cert::build_context(hc.inst, hc.S, hc.O);
  return hc;
}

inline std::vector<std::pair<int, int>> repeat(int s, int o, int times) {
  return std::vector<std::pair<int, int>>(times, {s, o});
}

inline std::vector<std::pair<int, int>> concat(std::initializer_list<std::vector<std::pair<int, int>>> parts) {
  std::vector<std::pair<int, int>> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

/// Facilities 0 (bad), 1 (nice); optimum facilities 2, 3. Facility 0
/// dominates both 2 and 3, facility 1 dominates nothing.
inline HandCase bad_plus_nice() {
  return hand_case(10, 4, {{0, 2}, {0, 2}, {0, 3}, {0, 3}, {1, 2}, {1, 3}});
}

/// Facility 0 dominates 2 and 3 and nothing can fill its group.
inline HandCase bad_alone() { return hand_case(10, 4, {{0, 2}, {0, 2}, {0, 3}, {0, 3}}); }

/// Each of 0, 1 serves only clients of its own optimum facility 2, 3.
inline HandCase all_good() { return hand_case(5, 4, concat({repeat(0, 2, 3), repeat(1, 3, 3)})); }

/// Facilities 0 and 1 both cover 4 and each dominates nothing on its own;
/// together they dominate 4 only. Facility 2 is a good facility for 5.
inline HandCase nice_pair() {
  return hand_case(10, 6, concat({repeat(0, 4, 5), repeat(1, 4, 5), repeat(2, 5, 4)}));
}

struct ForgedCase {
  std::string name;      // the check expected to fire
  std::function<bool()> detected;
};

namespace detail {

inline bool fails(const cert::ClaimReport& r, const std::string& name) {
  const auto* c = r.find(name);
  return c != nullptr && !c->passed && !c->witness.empty();
}

template <class F>
bool throws_with(F&& f, const std::string& needle) {
  try {
    f();
  } catch (const Error& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

}  // namespace detail

/// Contexts, maps, plans and partitions with one injected violation each.
inline std::vector<ForgedCase> forged_cases() {
  using namespace cert;
  using detail::fails;
  std::vector<ForgedCase> out;

  out.push_back({"claim3_pairs_disjoint", [] {
    auto ctx = nice_pair().ctx;
    ctx.P[90] = {0, 7};
    return fails(check_structure_claims(ctx), "claim3_pairs_disjoint");
  }});
  out.push_back({"claim4_dominated_sets_disjoint", [] {
    auto ctx = nice_pair().ctx;
    ctx.D[90] = {4};
    return fails(check_structure_claims(ctx), "claim4_dominated_sets_disjoint");
  }});
  out.push_back({"claim5_dsp_osp_disjoint", [] {
    auto ctx = nice_pair().ctx;
    ctx.D_sp.insert(4);
    return fails(check_structure_claims(ctx), "claim5_dsp_osp_disjoint");
  }});
  out.push_back({"single_dominator", [] {
    auto ctx = all_good().ctx;
    ctx.dom[1].insert(2);
    return fails(check_structure_claims(ctx), "single_dominator");
  }});
  out.push_back({"light_covers_at_most_one", [] {
    auto ctx = all_good().ctx;
    ctx.cov[0] = {2, 3};
    return fails(check_structure_claims(ctx), "light_covers_at_most_one");
  }});
  out.push_back({"covered_at_most_twice", [] {
    auto ctx = nice_pair().ctx;
    ctx.cov[2] = {4};
    return fails(check_structure_claims(ctx), "covered_at_most_twice");
  }});
  out.push_back({"heavy_count_bound", [] {
    auto ctx = all_good().ctx;
    ctx.heavy = {0, 1, 7, 8};
    return fails(check_counting(ctx), "heavy_count_bound");
  }});
  out.push_back({"light_at_least_k", [] {
    auto ctx = all_good().ctx;
    ctx.light = {0};
    return fails(check_counting(ctx), "light_at_least_k");
  }});
  out.push_back({"claim7_counting", [] {
    return fails(check_counting(bad_alone().ctx), "claim7_counting");
  }});
  out.push_back({"claim 7 violated", [] {
    const auto ctx = bad_alone().ctx;
    return detail::throws_with([&] { build_swap_plan(ctx); }, "claim 7 violated");
  }});
  out.push_back({"tau_bijective", [] {
    const auto ctx = bad_plus_nice().ctx;
    auto tau = build_tau(ctx, 2, {});
    tau.image.begin()->second = std::next(tau.image.begin())->second;
    return fails(check_tau(ctx, tau), "tau_bijective");
  }});
  out.push_back({"tau_property1_no_self_map", [] {
    // Two light facilities with two clients each of o = 2: neither dominates.
    const auto ctx = hand_case(10, 3, concat({repeat(0, 2, 2), repeat(1, 2, 2)})).ctx;
    TauMapping tau{2, {0, 1, 2, 3}, {{0, 0}, {1, 1}, {2, 2}, {3, 3}}, {}};
    return fails(check_tau(ctx, tau), "tau_property1_no_self_map");
  }});
  out.push_back({"tau_property2_load_bound", [] {
    // Facilities 0 and 1 each hold five clients of o = 4; with 4 taken out
    // of the specially covered set, moving a whole block of five into the
    // other ball breaks the 2U/5 bound.
    auto ctx = nice_pair().ctx;
    ctx.O_sp.erase(4);
    TauMapping tau;
    tau.o = 4;
    for (int j = 0; j < 10; ++j) tau.order.push_back(j), tau.image[j] = (j + 5) % 10;
    return fails(check_tau(ctx, tau), "tau_property2_load_bound");
  }});
  out.push_back({"plan_swap_shape", [] {
    const auto ctx = all_good().ctx;
    SwapPlan plan = build_swap_plan(ctx);
    plan.swaps.front().in.push_back(3);
    return fails(check_plan(ctx, plan), "plan_swap_shape");
  }});
  out.push_back({"plan_optimum_participation_1_to_3", [] {
    const auto ctx = all_good().ctx;
    SwapPlan plan;
    plan.add({0}, {2}, "forged");
    return fails(check_plan(ctx, plan), "plan_optimum_participation_1_to_3");
  }});
  out.push_back({"plan_heavy_never_swapped", [] {
    // Facility 0 serves 4 > 3*5/5 clients and is heavy.
    const auto ctx = hand_case(5, 4, concat({repeat(0, 2, 4), repeat(1, 3, 1)})).ctx;
    SwapPlan plan;
    plan.add({1}, {3}, "good");
    plan.add({0}, {2}, "forged");
    return fails(check_plan(ctx, plan), "plan_heavy_never_swapped");
  }});
  out.push_back({"plan_light_participation_at_most_3", [] {
    const auto ctx = all_good().ctx;
    SwapPlan plan = build_swap_plan(ctx);
    for (int t = 0; t < 3; ++t) plan.add({0}, {2}, "forged");
    return fails(check_plan(ctx, plan), "plan_light_participation_at_most_3");
  }});
  out.push_back({"plan_single_swap_admissible", [] {
    // Facility 0 dominates both 2 and 3; swapping it against 2 alone is not
    // admissible.
    const auto ctx = bad_plus_nice().ctx;
    SwapPlan plan = build_swap_plan(ctx);
    plan.add({0}, {2}, "forged");
    return fails(check_plan(ctx, plan), "plan_single_swap_admissible");
  }});
  out.push_back({"partition stuck", [] {
    const auto ctx = bad_alone().ctx;
    return detail::throws_with([&] { partition_TS(ctx); }, "partition stuck");
  }});
  out.push_back({"partition_B_is_dom_A", [] {
    const auto ctx = bad_plus_nice().ctx;
    PartitionResult part = partition_TS(ctx);
    part.B_parts.front() = {2, 9};
    return fails(check_partition(ctx, part), "partition_B_is_dom_A");
  }});
  out.push_back({"partition_sizes_equal", [] {
    const auto ctx = bad_plus_nice().ctx;
    PartitionResult part = partition_TS(ctx);
    part.B_parts.front().pop_back();
    return fails(check_partition(ctx, part), "partition_sizes_equal");
  }});
  out.push_back({"partition_disjoint", [] {
    const auto ctx = bad_plus_nice().ctx;
    PartitionResult part = partition_TS(ctx);
    part.A_parts.back().push_back(part.A_parts.front().front());
    return fails(check_partition(ctx, part), "partition_disjoint");
  }});
  out.push_back({"partition_one_bad_seed", [] {
    const auto ctx = bad_plus_nice().ctx;
    PartitionResult part;
    part.A_parts = {{1}, {0}};
    part.B_parts = {{}, {2, 3}};
    return fails(check_partition(ctx, part), "partition_one_bad_seed");
  }});
  out.push_back({"partition_final_part", [] {
    const auto ctx = bad_plus_nice().ctx;
    PartitionResult part;
    part.A_parts = {{0, 1}};
    part.B_parts = {{2, 3}};
    return fails(check_partition(ctx, part), "partition_final_part");
  }});
  return out;
}

}  // namespace ckm::testing

#endif  // CKM_TESTS_FORGED_CONTEXTS_HPP
