#include <gtest/gtest.h>

#include "stratclass/errors.hpp"
#include "stratclass/model.hpp"

namespace stratclass {
namespace {

Population line(std::vector<double> xs, std::vector<int> labels) {
  std::vector<Vector> pts;
  std::vector<Label> ls;
  for (double x : xs) pts.push_back({x});
  for (int l : labels) ls.push_back(label_from_int(l));
  return Population(std::move(pts), std::vector<double>(xs.size(), 1.0), std::move(ls));
}

TEST(PopulationTest, RejectsInconsistentInput) {
  EXPECT_THROW(Population({{1.0}}, {1.0, 2.0}, {Label::positive}), InvalidArgument);
  EXPECT_THROW(Population({{1.0}, {1.0, 2.0}}, {1.0, 1.0}, {Label::positive, Label::negative}),
               DimensionMismatch);
  EXPECT_THROW(Population({{1.0}}, {0.0}, {Label::positive}), InvalidArgument);
  EXPECT_THROW(Population({{1.0}}, {-1.0}, {Label::positive}), InvalidArgument);
  EXPECT_THROW(Population({{kInfinity}}, {1.0}, {Label::positive}), InvalidArgument);
  EXPECT_THROW(label_from_int(0), InvalidArgument);
}

TEST(PopulationTest, IndexedUsesIndexAsCoordinate) {
  Population p = Population::indexed({1.0, 2.0, 3.0}, {Label::negative, Label::positive,
                                                       Label::negative});
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p.dim(), 1u);
  EXPECT_EQ(p.point(2)[0], 2.0);
  EXPECT_EQ(p.id(2), 2u);
  EXPECT_DOUBLE_EQ(p.total_weight(), 6.0);
}

TEST(PopulationTest, SubsetKeepsIds) {
  Population p = line({1, 2, 3}, {-1, 1, 1});
  std::vector<std::size_t> rows{2, 2, 0};
  Population s = p.subset(rows);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.id(0), 2u);
  EXPECT_EQ(s.id(1), 2u);
  EXPECT_EQ(s.id(2), 0u);
  EXPECT_EQ(s.label(2), Label::negative);
}

TEST(ScoreFnTest, FiniteRangeQueries) {
  ScoreFn f = ScoreFn::tabular({4.0, 1.0, 3.0, 3.0});
  EXPECT_EQ(f.range_values(), (Vector{1.0, 3.0, 4.0}));
  EXPECT_EQ(f.max_in(2.0, 3.5), 3.0);
  EXPECT_FALSE(f.max_in(1.5, 2.5).has_value());
  EXPECT_EQ(f.min_in_half_open(1.0, 4.0), 3.0);
  EXPECT_EQ(f.min_above(3.0), 4.0);
  EXPECT_FALSE(f.min_above(4.0).has_value());
  EXPECT_EQ(f({{}, 1}), 1.0);
}

TEST(ScoreFnTest, RealLineQueries) {
  ScoreFn f = ScoreFn::linear({2.0, -1.0});
  Vector x{1.0, 1.0};
  EXPECT_EQ(f({x}), 1.0);
  EXPECT_EQ(f.max_in(2.0, 5.0), 5.0);
  EXPECT_FALSE(f.finite_range());
  EXPECT_TRUE(f.range_values().empty());
}

TEST(ScoreFnTest, ScalingMultipliesValuesAndRange) {
  ScoreFn f = ScoreFn::tabular({1.0, 2.0}).scaled(3.0);
  EXPECT_EQ(f({{}, 1}), 6.0);
  EXPECT_EQ(f.range_values(), (Vector{3.0, 6.0}));
  EXPECT_EQ(f.scaled_value({{}, 1}, 0.5), 3.0);
  EXPECT_THROW(f.scaled(0.0), InvalidArgument);
}

TEST(ScoreFnTest, LinearOverSupportHasFiniteImage) {
  std::vector<Vector> support{{1.0, 0.0}, {0.0, 2.0}, {1.0, 1.0}};
  ScoreFn f = ScoreFn::linear_over({1.0, 1.0}, support);
  EXPECT_EQ(f.range_values(), (Vector{1.0, 2.0}));
  EXPECT_TRUE(f.range_contains(ScoreFn::tabular({2.0, 1.0})));
  EXPECT_FALSE(f.range_contains(ScoreFn::tabular({3.0})));
  EXPECT_TRUE(ScoreFn::linear({1.0}).range_contains(f));
}

TEST(ClassifierTest, PredictSemantics) {
  Vector x{1.0, 2.0};
  EXPECT_EQ(predict(LinearHalfspace{{1.0, 1.0}, -3.0}, {x}), Label::positive);
  EXPECT_EQ(predict(LinearHalfspace{{1.0, 1.0}, -3.5}, {x}), Label::negative);
  EXPECT_EQ(predict(ThresholdOnScore{ScoreFn::linear({1.0, 1.0}), 3.0}, {x}), Label::positive);
  EXPECT_EQ(predict(reject_all(), {x}), Label::negative);
  ConjunctionOfThresholds both{{{ScoreFn::linear({1.0, 0.0}), 1.0},
                                {ScoreFn::linear({0.0, 1.0}), 2.5}}};
  EXPECT_EQ(predict(both, {x}), Label::negative);
  both.parts[1].threshold = 2.0;
  EXPECT_EQ(predict(both, {x}), Label::positive);
  TabularLabels t{{Label::negative, Label::positive}};
  EXPECT_EQ(predict(t, {{}, 1}), Label::positive);
  EXPECT_THROW(predict(t, {{}, 2}), InvalidArgument);
}

TEST(ClassifierTest, AsHalfspace) {
  auto h = as_halfspace(ThresholdOnScore{ScoreFn::linear({2.0}).scaled(0.5), 3.0});
  ASSERT_TRUE(h.has_value());
  EXPECT_EQ(h->w, (Vector{1.0}));
  EXPECT_EQ(h->b, -3.0);
  EXPECT_FALSE(as_halfspace(ThresholdOnScore{ScoreFn::tabular({1.0}), 0.0}).has_value());
  EXPECT_FALSE(as_halfspace(TabularLabels{}).has_value());
}

TEST(VectorTest, DotChecksDimensions) {
  EXPECT_EQ(dot(Vector{1, 2}, Vector{3, 4}), 11.0);
  EXPECT_THROW(dot(Vector{1}, Vector{1, 2}), DimensionMismatch);
  EXPECT_EQ(norm(Vector{3, 4}), 5.0);
}

}  // namespace
}  // namespace stratclass
