#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "brute_force.hpp"
#include "ckm/generators.hpp"
#include "ckm/local_search.hpp"

namespace ckm {
namespace {

using testing::matrix_instance;

Instance zeros(int nf, int nc, int U, int k) {
  return matrix_instance(std::vector<std::vector<Cost>>(nf, std::vector<Cost>(nc, 0)), U, k);
}

Instance random_euclidean(std::uint64_t seed, int nf, int nc, int U, int k,
                          bool penalties = false) {
  GenSpec spec;
  spec.num_facilities = nf;
  spec.num_clients = nc;
  spec.capacity = U;
  spec.k = k;
  spec.seed = seed;
  if (penalties) spec.penalty_range = std::pair<Cost, Cost>{0, 150};
  return generate(spec);
}

TEST(Rational, Parse) {
  EXPECT_EQ(parse_rational("0.01"), (Rational{1, 100}));
  EXPECT_EQ(parse_rational("1/100"), (Rational{1, 100}));
  EXPECT_EQ(parse_rational("0.50"), (Rational{1, 2}));
  EXPECT_EQ(parse_rational("2"), (Rational{2, 1}));
  EXPECT_EQ(parse_rational("1/100").str(), "1/100");
  for (const char* bad : {"", "abc", "1/0", "-0.1", "1.2.3", "/3"})
    EXPECT_THROW(parse_rational(bad), Error) << bad;
}

TEST(Config, Validation) {
  SearchConfig cfg;
  EXPECT_NO_THROW(validate_config(cfg));
  cfg.p = 0;
  EXPECT_THROW(validate_config(cfg), Error);
  cfg.p = 2;
  cfg.epsilon = Rational{0, 1};
  EXPECT_THROW(validate_config(cfg), Error);
}

TEST(Threshold, DeltaAndExactComparison) {
  const auto inst = zeros(4, 6, 3, 1);
  const Rational d = improvement_threshold(inst, Rational{1, 100});
  EXPECT_EQ(d, (Rational{1, 1000}));
  EXPECT_TRUE(meets_threshold(999, 1000, d));
  EXPECT_FALSE(meets_threshold(1000, 1000, d));
  EXPECT_TRUE(meets_threshold(998'001, 999'000, d));
  EXPECT_FALSE(meets_threshold(998'002, 999'000, d));
}

TEST(EnumerateMoves, CountsForTwoByTwo) {
  const auto inst = zeros(4, 1, 1, 1);
  const Solution s{{0, 1}, {0}, 0};
  EXPECT_EQ(enumerate_moves(inst, s, 1).size(), 4u);
  const auto two = enumerate_moves(inst, s, 2);
  ASSERT_EQ(two.size(), 5u);
  EXPECT_EQ(two.back().size(), 2);
  for (const auto& mv : enumerate_moves(inst, s, 5)) EXPECT_LE(mv.size(), 2);
}

TEST(EnumerateMoves, LexicographicAndUnique) {
  const auto inst = zeros(7, 1, 1, 1);
  const Solution s{{1, 3, 4}, {1}, 0};
  const auto moves = enumerate_moves(inst, s, 3);
  // sum over t of C(3,t)*C(4,t) = 12 + 18 + 4
  EXPECT_EQ(moves.size(), 34u);
  std::set<std::tuple<int, std::vector<int>, std::vector<int>>> seen;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    const auto key = std::make_tuple(moves[i].size(), moves[i].close, moves[i].open);
    EXPECT_TRUE(seen.insert(key).second);
    if (i > 0) {
      const auto prev = std::make_tuple(moves[i - 1].size(), moves[i - 1].close, moves[i - 1].open);
      EXPECT_LT(prev, key);
    }
    for (int f : moves[i].close) EXPECT_TRUE(f == 1 || f == 3 || f == 4);
    for (int f : moves[i].open) EXPECT_FALSE(f == 1 || f == 3 || f == 4);
  }
}

TEST(EvaluateMove, IdentityAndValidation) {
  auto inst = matrix_instance({{1, 2}, {3, 1}, {5, 5}}, 2, 1);
  const Solution s = assign_to(inst, {0, 1}, false);
  EXPECT_EQ(evaluate_move(inst, s, Move{}, false), s.total_cost);
  EXPECT_THROW(evaluate_move(inst, s, Move{{1}, {0}}, false), Error);
  EXPECT_THROW(evaluate_move(inst, s, Move{{2}, {2}}, false), Error);
}

TEST(EvaluateMove, CoLocatedFacilityHelpsAndMatchesBruteForce) {
  // Facility 2 sits on top of every client.
  auto inst = matrix_instance({{9, 9, 9, 9}, {8, 8, 8, 8}, {0, 0, 0, 0}}, 4, 1);
  const Solution s = assign_to(inst, {0}, false);
  const Cost c = evaluate_move(inst, s, Move{{2}, {0}}, false);
  EXPECT_LT(c, s.total_cost);
  EXPECT_EQ(c, *testing::brute_force_assignment(inst, {2}, false));
}

TEST(EvaluateMove, CopyOfItselfKeepsCost) {
  auto inst = matrix_instance({{3, 1, 4}, {3, 1, 4}, {9, 9, 9}}, 3, 1);
  const Solution s = assign_to(inst, {0}, false);
  EXPECT_EQ(evaluate_move(inst, s, Move{{1}, {0}}, false), s.total_cost);
}

TEST(EvaluateMove, AgreesWithBruteForceOnRandomInstances) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 60; ++t) {
    std::vector<std::vector<Cost>> c(5, std::vector<Cost>(5));
    for (auto& row : c)
      for (auto& x : row) x = static_cast<Cost>(rng() % 25);
    auto inst = matrix_instance(c, 2, 1);
    const Solution s = assign_to(inst, {0, 1, 2}, false);
    for (const auto& mv : enumerate_moves(inst, s, 2))
      EXPECT_EQ(evaluate_move(inst, s, mv, false),
                *testing::brute_force_assignment(inst, apply_move(s.open, mv), false));
  }
}

TEST(InitialSolution, AllOpenWhenFacilitiesScarce) {
  const auto inst = random_euclidean(3, 3, 6, 3, 2);
  for (std::uint64_t seed : {0u, 1u, 99u}) {
    SearchConfig cfg;
    cfg.seed = seed;
    EXPECT_EQ(initial_solution(inst, cfg).open, (std::vector<int>{0, 1, 2}));
  }
}

TEST(InitialSolution, SeededAndSized) {
  const auto inst = random_euclidean(4, 12, 10, 2, 2);
  SearchConfig cfg;
  cfg.seed = 17;
  const Solution a = initial_solution(inst, cfg), b = initial_solution(inst, cfg);
  EXPECT_EQ(a, b);
  EXPECT_EQ(static_cast<int>(a.open.size()), open_count_target(inst));
  cfg.init = InitKind::kGreedy;
  EXPECT_EQ(static_cast<int>(initial_solution(inst, cfg).open.size()), open_count_target(inst));
}

TEST(InitialSolution, InfeasiblePure) {
  const auto inst = zeros(3, 10, 2, 1);
  EXPECT_THROW(initial_solution(inst, SearchConfig{}), Error);
}

TEST(Run, ZeroCostInstanceTakesNoSteps) {
  const auto res = run(zeros(6, 8, 4, 1), SearchConfig{});
  EXPECT_EQ(res.solution.total_cost, 0);
  EXPECT_TRUE(res.trace.iterations.empty());
}

TEST(Run, TraceAndLocalOptimality) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto inst = random_euclidean(seed, 8, 10, 4, 1);
    SearchConfig cfg;
    cfg.seed = seed;
    const auto res = run(inst, cfg);
    const Rational delta = improvement_threshold(inst, cfg.epsilon);
    EXPECT_EQ(static_cast<int>(res.solution.open.size()), open_count_target(inst));
    EXPECT_EQ(cost_of(inst, res.solution), res.solution.total_cost);

    Cost prev = res.trace.initial_cost;
    for (const auto& st : res.trace.iterations) {
      EXPECT_EQ(st.old_cost, prev);
      EXPECT_TRUE(meets_threshold(st.new_cost, st.old_cost, delta));
      prev = st.new_cost;
    }
    EXPECT_EQ(prev, res.solution.total_cost);
    EXPECT_FALSE(find_improving_move(inst, res.solution, cfg.p, delta, false).has_value());

    if (res.solution.total_cost > 0) {
      EXPECT_LE(static_cast<double>(res.trace.iterations.size()),
                iteration_bound(res.trace.initial_cost, res.solution.total_cost, delta) + 1e-9);
    }
    EXPECT_EQ(run(inst, cfg).trace.iterations.size(), res.trace.iterations.size());
  }
}

TEST(Run, CapReportedOnlyWhenMovesRemain) {
  const auto inst = random_euclidean(8, 8, 10, 4, 1);
  SearchConfig cfg;
  cfg.seed = 8;
  const auto free = run(inst, cfg);
  ASSERT_GT(free.trace.iterations.size(), 0u);
  cfg.max_iterations = 0;
  EXPECT_TRUE(run(inst, cfg).trace.capped);
  cfg.max_iterations = static_cast<std::int64_t>(free.trace.iterations.size());
  const auto exact = run(inst, cfg);
  EXPECT_FALSE(exact.trace.capped);
  EXPECT_EQ(exact.solution, free.solution);
}

TEST(RunWithPenalties, Degenerate) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto inst = random_euclidean(seed, 7, 9, 3, 2, true);
    SearchConfig cfg;
    cfg.seed = seed;

    auto zero = inst;
    std::fill(zero.penalties->begin(), zero.penalties->end(), 0);
    EXPECT_EQ(run_with_penalties(zero, cfg).solution.total_cost, 0);

    auto huge = inst;
    Cost mx = 0;
    for (const auto& row : huge.cost)
      for (Cost c : row) mx = std::max(mx, c);
    std::fill(huge.penalties->begin(), huge.penalties->end(), 2 * mx + 1);
    const auto with = run_with_penalties(huge, cfg);
    auto pure = huge;
    pure.penalties.reset();
    const auto without = run(pure, cfg);
    EXPECT_EQ(with.solution.total_cost, without.solution.total_cost);
    for (int a : with.solution.assign) EXPECT_NE(a, kPenalty);
  }
}

TEST(RunWithPenalties, RequiresPenalties) {
  EXPECT_THROW(run_with_penalties(zeros(3, 3, 3, 1), SearchConfig{}), Error);
}

TEST(IterationBound, Algebra) {
  const Rational d{1, 10};
  EXPECT_DOUBLE_EQ(iteration_bound(100, 100, d), 0.0);
  EXPECT_NEAR(iteration_bound(1000, 729, d), 3.0, 1e-9);
}

}  // namespace
}  // namespace ckm
