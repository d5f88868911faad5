#include <gtest/gtest.h>

#include <random>

#include "stratclass/errors.hpp"
#include "stratclass/game.hpp"
#include "stratclass/learners.hpp"
#include "stratclass/oracle.hpp"
#include "test_support.hpp"

namespace stratclass {
namespace {

TEST(BruteForceTest, SinglePoint) {
  Population pop = Population::indexed({1.0}, {Label::negative});
  auto r = brute_force_optimum(pop, CostModel::tabular({{0.0}}));
  EXPECT_EQ(r.opt_payoff, 1.0);
  EXPECT_EQ(r.evaluations, 2u);
  EXPECT_EQ(std::get<TabularLabels>(r.opt_classifier).labels, (std::vector<Label>{Label::negative}));
}

// Hand enumeration with c = 1.5 both ways and labels (-1, +1):
//   (-,-) 0.5; (-,+) row 0 moves, 0.5; (+,-) row 1 moves, 0.5; (+,+) 0.5.
// Every labeling ties; the first in order wins.
TEST(BruteForceTest, TwoPointTable) {
  Population pop = Population::indexed({1.0, 1.0}, {Label::negative, Label::positive});
  auto r = brute_force_optimum(pop, CostModel::tabular({{0.0, 1.5}, {1.5, 0.0}}));
  EXPECT_EQ(r.opt_payoff, 0.5);
  EXPECT_EQ(std::get<TabularLabels>(r.opt_classifier).labels,
            (std::vector<Label>{Label::negative, Label::negative}));
  // Far apart: no gaming, the true labels are optimal.
  r = brute_force_optimum(pop, CostModel::tabular({{0.0, 3.0}, {3.0, 0.0}}));
  EXPECT_EQ(r.opt_payoff, 1.0);
}

TEST(BruteForceTest, MatchesNaiveEnumeration) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t n = 2 + trial % 7;
    Population pop = testing::random_indexed_population(rng, n);
    auto table = testing::random_cost_matrix(rng, n, 4.0);
    CostModel c = CostModel::tabular(table);
    auto r = brute_force_optimum(pop, c);
    EXPECT_EQ(r.opt_correct, testing::naive_optimum(table, testing::int_labels(pop), pop.weights()));
    EXPECT_EQ(r.opt_payoff, jury_payoff(r.opt_classifier, c, pop));
  }
}

TEST(BruteForceTest, WorkerCountDoesNotChangeResult) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 5; ++trial) {
    Population pop = testing::random_indexed_population(rng, 11);
    CostModel c = CostModel::tabular(testing::random_cost_matrix(rng, 11, 3.0));
    auto a = brute_force_optimum(pop, c, {22, 1});
    auto b = brute_force_optimum(pop, c, {22, 5});
    EXPECT_EQ(a.opt_correct, b.opt_correct);
    EXPECT_EQ(std::get<TabularLabels>(a.opt_classifier).labels,
              std::get<TabularLabels>(b.opt_classifier).labels);
  }
}

TEST(BruteForceTest, BudgetAndIds) {
  std::mt19937_64 rng(53);
  Population pop = testing::random_indexed_population(rng, 23);
  EXPECT_THROW(brute_force_optimum(pop, CostModel::tabular(testing::random_cost_matrix(rng, 23))),
               BudgetExceeded);
  Population small = testing::random_indexed_population(rng, 3);
  std::vector<std::size_t> rows{0, 0};
  EXPECT_THROW(brute_force_optimum(small.subset(rows), CostModel::tabular(testing::random_cost_matrix(rng, 3))),
               InvalidArgument);
  EXPECT_THROW(brute_force_optimum(Population{}, CostModel::tabular({{0.0}})), InvalidArgument);
}

TEST(ThresholdOptimumTest, MatchesBruteForceOnSeparableCosts) {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 15; ++trial) {
    std::size_t n = 3 + trial % 8;
    Population pop = testing::random_indexed_population(rng, n);
    auto part = testing::random_separable_part(rng, n);
    CostModel c = CostModel::separable(part.c1, part.c2);
    EXPECT_EQ(threshold_optimum(pop, c).opt_correct, brute_force_optimum(pop, c).opt_correct);
  }
}

TEST(ThresholdOptimumTest, FiniteRangeExample) {
  CostModel c = CostModel::separable(ScoreFn::tabular({3, 4, 6, 7}), ScoreFn::tabular({3, 4, 6, 7}));
  Population pop = Population::indexed({1, 1, 1, 1}, {Label::negative, Label::negative,
                                                      Label::positive, Label::positive});
  auto r = threshold_optimum(pop, c);
  EXPECT_EQ(r.opt_payoff, 1.0);
  EXPECT_EQ(std::get<ThresholdOnScore>(r.opt_classifier).threshold, 7.0);
  EXPECT_EQ(brute_force_optimum(pop, c).opt_payoff, 1.0);
  EXPECT_EQ(train_separable(pop, c).classifier.threshold, 7.0);
}

}  // namespace
}  // namespace stratclass
