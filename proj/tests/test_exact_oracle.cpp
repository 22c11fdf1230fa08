#include <gtest/gtest.h>

#include <random>

#include "brute_force.hpp"
#include "ckm/exact_oracle.hpp"

namespace ckm {
namespace {

using testing::matrix_instance;

Instance random_instance(std::mt19937_64& rng, int nf, int nc, int U, bool pen) {
  std::vector<std::vector<Cost>> c(nf, std::vector<Cost>(nc));
  for (auto& row : c)
    for (auto& x : row) x = static_cast<Cost>(rng() % 40);
  std::optional<std::vector<Cost>> p;
  if (pen) {
    p.emplace(nc);
    for (auto& x : *p) x = static_cast<Cost>(rng() % 50);
  }
  return matrix_instance(c, U, 1, p);
}

TEST(Binomial, Values) {
  EXPECT_EQ(binomial(8, 3), 56);
  EXPECT_EQ(binomial(5, 0), 1);
  EXPECT_EQ(binomial(3, 4), 0);
  EXPECT_EQ(binomial(200, 100), std::numeric_limits<std::int64_t>::max());
}

TEST(ExactOptimal, AllOpenWhenKIsF) {
  std::mt19937_64 rng(1);
  auto inst = random_instance(rng, 4, 6, 2, false);
  const auto opt = exact_optimal(inst, 4, false);
  EXPECT_EQ(opt.solution.open, (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(opt.solution.total_cost, assign_to(inst, {0, 1, 2, 3}, false).total_cost);
}

TEST(ExactOptimal, SingleFacility) {
  auto inst = matrix_instance({{4, 0, 7}}, 3, 1);
  const auto opt = exact_optimal(inst, 1, false);
  EXPECT_EQ(opt.solution.open, std::vector<int>{0});
  EXPECT_EQ(opt.solution.total_cost, 11);
}

TEST(ExactOptimal, MatchesDoubleBruteForce) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 30; ++t) {
    auto inst = random_instance(rng, 4, 4, 2, t % 2 == 1);
    const bool pen = t % 2 == 1;
    EXPECT_EQ(exact_optimal(inst, 2, pen).solution.total_cost,
              *testing::brute_force_optimum(inst, 2, pen));
  }
}

TEST(ExactOptimal, LexicographicTieBreak) {
  auto inst = matrix_instance({{1, 1}, {1, 1}, {1, 1}}, 2, 1);
  EXPECT_EQ(exact_optimal(inst, 1, false).solution.open, std::vector<int>{0});
}

TEST(ExactOptimal, MonotoneInK) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    auto inst = random_instance(rng, 6, 6, 3, false);
    Cost prev = exact_optimal(inst, 2, false).solution.total_cost;
    for (int k = 3; k <= 6; ++k) {
      const Cost c = exact_optimal(inst, k, false).solution.total_cost;
      EXPECT_LE(c, prev);
      prev = c;
    }
  }
}

TEST(ExactOptimal, BudgetAndInfeasibility) {
  auto inst = matrix_instance(std::vector<std::vector<Cost>>(20, std::vector<Cost>(4, 1)), 2, 1);
  try {
    exact_optimal(inst, 10, false, OracleBudget{1000, 10});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasible);
    EXPECT_NE(std::string(e.what()).find("oracle budget"), std::string::npos);
  }
  EXPECT_THROW(exact_optimal(inst, 1, false), Error);  // 1*2 < 4
  EXPECT_THROW(exact_optimal(inst, 0, false), Error);
  EXPECT_THROW(exact_optimal(inst, 2, true), Error);   // no penalties
}

}  // namespace
}  // namespace ckm
