#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "stratclass/errors.hpp"
#include "stratclass/experiments.hpp"
#include "stratclass/learners.hpp"

namespace stratclass {
namespace {

double accuracy(const LinearHalfspace& h, const Population& pop) {
  double ok = 0.0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (predict(h, pop.ref(i)) == pop.label(i)) ok += pop.weight(i);
  }
  return ok / pop.total_weight();
}

TEST(BaselineTest, SeparatesWideMargin) {
  std::vector<Vector> pts;
  std::vector<Label> ls;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 60; ++i) {
    bool pos = i % 2 == 0;
    pts.push_back({(pos ? 3.0 : -3.0) + u(rng), u(rng)});
    ls.push_back(pos ? Label::positive : Label::negative);
  }
  Population pop(pts, std::vector<double>(60, 1.0), ls);
  BaselineModel m = train_baseline_linear(pop);
  EXPECT_FALSE(m.single_class);
  EXPECT_EQ(accuracy(m.classifier, pop), 1.0);
}

TEST(BaselineTest, ContradictoryDuplicateCannotBeFit) {
  std::vector<Vector> pts{{1.0}, {1.0}, {-1.0}};
  Population pop(pts, {1, 1, 1}, {Label::positive, Label::negative, Label::negative});
  EXPECT_LT(accuracy(train_baseline_linear(pop).classifier, pop), 1.0);
}

TEST(BaselineTest, RecoversGaussianDirection) {
  Vector dir{1.0, 2.0, -1.0, 0.5};
  Population pop = generate_synthetic_population(4, 2000, 3, 4.0, dir);
  BaselineModel m = train_baseline_linear(pop);
  // Within 15 degrees.
  EXPECT_LT(sin_angle(m.classifier.w, dir), std::sin(15.0 * std::acos(-1.0) / 180.0));
}

TEST(BaselineTest, SingleClassIsConstant) {
  std::vector<Vector> pts{{1.0}, {2.0}};
  Population pos(pts, {1, 1}, {Label::positive, Label::positive});
  BaselineModel m = train_baseline_linear(pos);
  EXPECT_TRUE(m.single_class);
  EXPECT_EQ(accuracy(m.classifier, pos), 1.0);
  Population neg(pts, {1, 1}, {Label::negative, Label::negative});
  EXPECT_EQ(accuracy(train_baseline_linear(neg).classifier, neg), 1.0);
}

TEST(BaselineTest, DeterministicForSeed) {
  Population pop = generate_synthetic_population(3, 200, 9, 1.0);
  BaselineOptions o;
  o.seed = 5;
  auto a = train_baseline_linear(pop, o);
  auto b = train_baseline_linear(pop, o);
  EXPECT_EQ(a.classifier.w, b.classifier.w);
  EXPECT_EQ(a.classifier.b, b.classifier.b);
  o.seed = 6;
  EXPECT_NE(train_baseline_linear(pop, o).classifier.w, a.classifier.w);
}

TEST(BaselineTest, ValidatesOptions) {
  Population pop = generate_synthetic_population(2, 10, 1, 1.0);
  EXPECT_THROW(train_baseline_linear(pop, {0.0, 5, 0}), InvalidArgument);
  EXPECT_THROW(train_baseline_linear(pop, {0.1, 0, 0}), InvalidArgument);
  EXPECT_THROW(train_baseline_linear(Population{}), InvalidArgument);
}

}  // namespace
}  // namespace stratclass
