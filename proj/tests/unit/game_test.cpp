#include <gtest/gtest.h>

#include <random>

#include "stratclass/errors.hpp"
#include "stratclass/game.hpp"
#include "test_support.hpp"

namespace stratclass {
namespace {

Population line(std::vector<double> xs, std::vector<int> labels) {
  std::vector<Vector> pts;
  std::vector<Label> ls;
  for (double x : xs) pts.push_back({x});
  for (int l : labels) ls.push_back(label_from_int(l));
  return Population(std::move(pts), std::vector<double>(xs.size(), 1.0), std::move(ls));
}

TabularLabels labels(std::vector<int> v) {
  TabularLabels t;
  for (int x : v) t.labels.push_back(label_from_int(x));
  return t;
}

TEST(BestResponseTest, AcceptedPointStays) {
  Population pop = Population::indexed({1.0, 1.0}, {Label::positive, Label::negative});
  CostModel c = CostModel::tabular({{0.0, 1.0}, {1.0, 0.0}});
  auto r = best_response(pop.ref(0), labels({1, 1}), c, CandidateSet::points(pop));
  EXPECT_FALSE(r.moved);
  EXPECT_EQ(r.target, (Vector{0.0}));
}

TEST(BestResponseTest, MovesBelowTwoOnly) {
  Population pop = Population::indexed({1.0, 1.0}, {Label::negative, Label::positive});
  auto f = labels({-1, 1});
  auto r = best_response(pop.ref(0), f, CostModel::tabular({{0.0, 1.5}, {1.5, 0.0}}),
                         CandidateSet::points(pop));
  EXPECT_TRUE(r.moved);
  EXPECT_EQ(r.target_row, 1u);
  EXPECT_EQ(r.cost, 1.5);
  // At exactly 2 the gain is zero and staying wins the tie.
  r = best_response(pop.ref(0), f, CostModel::tabular({{0.0, 2.0}, {2.0, 0.0}}),
                    CandidateSet::points(pop));
  EXPECT_FALSE(r.moved);
}

TEST(BestResponseTest, CheapestThenLowestRow) {
  Population pop = Population::indexed({1.0, 1.0, 1.0, 1.0}, {Label::negative, Label::positive,
                                                               Label::positive, Label::positive});
  CostModel c = CostModel::tabular(
      {{0.0, 1.0, 0.5, 0.5}, {1.0, 0.0, 1.0, 1.0}, {1.0, 1.0, 0.0, 1.0}, {1.0, 1.0, 1.0, 0.0}});
  auto r = best_response(pop.ref(0), labels({-1, 1, 1, 1}), c, CandidateSet::points(pop));
  EXPECT_EQ(r.target_row, 2u);
}

TEST(EffectiveLabelTest, RejectAllStaysNegative) {
  Population pop = line({3, 4, 6, 7}, {-1, -1, 1, 1});
  CostModel c = CostModel::linear({1.0});
  for (std::size_t i = 0; i < pop.size(); ++i) {
    EXPECT_EQ(effective_label(reject_all(), c, pop.ref(i), CandidateSet::analytic()),
              Label::negative);
    EXPECT_EQ(effective_label(reject_all(), c, pop.ref(i), CandidateSet::points(pop)),
              Label::negative);
  }
}

TEST(EffectiveLabelTest, AnalyticThresholdWithinBudget) {
  CostModel c = CostModel::separable(ScoreFn::linear({1.0}), ScoreFn::linear({1.0}));
  ThresholdOnScore f{ScoreFn::linear({1.0}), 8.0};
  Vector x{6.5};
  EXPECT_EQ(effective_label(f, c, {x}, CandidateSet::analytic()), Label::positive);
  Vector y{6.0};
  EXPECT_EQ(effective_label(f, c, {y}, CandidateSet::analytic()), Label::negative);
}

// Effective label is +1 iff x is accepted or some accepted candidate costs < 2.
TEST(EffectiveLabelTest, MatchesMinimumCostCriterion) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 12;
    Population pop = testing::random_indexed_population(rng, n);
    CostModel c = CostModel::tabular(testing::random_cost_matrix(rng, n, 4.0));
    TabularLabels f{testing::random_labels(rng, n)};
    for (std::size_t i = 0; i < n; ++i) {
      double best = kInfinity;
      for (std::size_t j = 0; j < n; ++j) {
        if (f.labels[j] == Label::positive) best = std::min(best, eval_cost(c, pop.ref(i), pop.ref(j)));
      }
      Label expected = best < 2.0 ? Label::positive : Label::negative;
      EXPECT_EQ(effective_label(f, c, pop.ref(i), CandidateSet::points(pop)), expected);
    }
  }
}

// Exhaustive optimality of the best response on a 200-point table.
TEST(BestResponseTest, OptimalOverAllCandidates) {
  std::mt19937_64 rng(32);
  const std::size_t n = 200;
  Population pop = testing::random_indexed_population(rng, n);
  CostModel c = CostModel::tabular(testing::random_cost_matrix(rng, n, 6.0));
  TabularLabels f{testing::random_labels(rng, n)};
  for (std::size_t i = 0; i < n; ++i) {
    auto r = best_response(pop.ref(i), f, c, CandidateSet::points(pop));
    double chosen = r.moved ? 1.0 - r.cost : sign(f.labels[i]);
    for (std::size_t j = 0; j < n; ++j) {
      double value = sign(f.labels[j]) - eval_cost(c, pop.ref(i), pop.ref(j));
      EXPECT_LE(value, chosen);
    }
  }
}

TEST(PayoffTest, Examples) {
  Population pop = line({3, 4, 6, 7}, {-1, -1, 1, 1});
  CostModel c = CostModel::linear({1.0});
  EXPECT_EQ(jury_payoff(reject_all(), c, pop, CandidateSet::analytic()), 0.5);
  EXPECT_EQ(contestant_payoff(reject_all(), c, pop), -1.0);
  EXPECT_EQ(contestant_payoff(LinearHalfspace{{0.0}, 1.0}, c, pop, CandidateSet::analytic()), 1.0);

  // Threshold 8 over the whole line: 7 pays 1, 6 would pay exactly 2 and so
  // stays rejected.
  ThresholdOnScore f{ScoreFn::linear({1.0}), 8.0};
  EXPECT_EQ(jury_payoff(f, c, pop, CandidateSet::analytic()), 0.75);

  // The same data with the scores' image restricted to {3, 4, 6, 7}: the
  // learner's threshold is 7 and 6 moves there for 1.
  CostModel finite = CostModel::separable(ScoreFn::tabular({3, 4, 6, 7}),
                                          ScoreFn::tabular({3, 4, 6, 7}));
  Population idx = Population::indexed({1, 1, 1, 1}, pop.labels());
  EXPECT_EQ(jury_payoff(ThresholdOnScore{ScoreFn::tabular({3, 4, 6, 7}), 7.0}, finite, idx), 1.0);
}

TEST(PayoffTest, TwoPointContestantPayoff) {
  Population pop = Population::indexed({1.0, 1.0}, {Label::negative, Label::positive});
  CostModel c = CostModel::tabular({{0.0, 1.5}, {1.5, 0.0}});
  // Row 0 moves for 1.5 and gets 1 - 1.5; row 1 keeps 1.
  EXPECT_DOUBLE_EQ(contestant_payoff(labels({-1, 1}), c, pop), 0.25);
  EXPECT_EQ(jury_payoff(labels({-1, 1}), c, pop), 0.5);
}

TEST(PayoffTest, WeightsAreMultiplicities) {
  std::mt19937_64 rng(33);
  Population pop = testing::random_indexed_population(rng, 8);
  CostModel c = CostModel::tabular(testing::random_cost_matrix(rng, 8, 4.0));
  TabularLabels f{testing::random_labels(rng, 8)};
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < 8; ++i) {
    for (int k = 0; k < static_cast<int>(pop.weight(i)); ++k) rows.push_back(i);
  }
  Population expanded = pop.subset(rows);
  std::vector<Vector> pts(expanded.points());
  Population unit(pts, std::vector<double>(rows.size(), 1.0), expanded.labels(), expanded.ids());
  EXPECT_DOUBLE_EQ(jury_payoff(f, c, pop), jury_payoff(f, c, unit, CandidateSet::points(pop)));
}

TEST(GameTest, Errors) {
  Population pop = line({1}, {1});
  CostModel c = CostModel::linear({1.0});
  Population empty;
  EXPECT_THROW(best_response(pop.ref(0), reject_all(), c, CandidateSet::points(empty)),
               InvalidArgument);
  Vector x2{1.0, 2.0};
  EXPECT_THROW(best_response({x2}, LinearHalfspace{{1.0}, -5.0}, c, CandidateSet::points(pop)),
               DimensionMismatch);
  EXPECT_THROW(best_response(pop.ref(0), labels({-1}), c, CandidateSet::analytic()), Unsupported);
  EXPECT_THROW(jury_payoff(reject_all(), c, empty), InvalidArgument);
}

}  // namespace
}  // namespace stratclass
