#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "stratclass/errors.hpp"
#include "stratclass/io.hpp"
#include "stratclass/oracle.hpp"
#include "test_support.hpp"

namespace stratclass {
namespace {

const std::filesystem::path kData = STRATCLASS_DATA_DIR;

TEST(NumberFormatTest, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(8.0), "8");
  EXPECT_EQ(format_number(kInfinity), "inf");
  EXPECT_EQ(format_number(-kInfinity), "-inf");
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1e3);
  for (int i = 0; i < 200; ++i) {
    double v = g(rng);
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
}

TEST(PopulationCsvTest, RoundTrip) {
  Population p = Population::indexed({1.5, 2.0, 0.25}, {Label::negative, Label::positive,
                                                        Label::positive});
  std::string text = format_population_csv(p);
  EXPECT_EQ(text.substr(0, text.find('\n')), "weight,label,f1");
  Population q = parse_population_csv(text);
  EXPECT_EQ(q.points(), p.points());
  EXPECT_EQ(q.weights(), p.weights());
  EXPECT_EQ(q.labels(), p.labels());
}

TEST(PopulationCsvTest, Errors) {
  EXPECT_THROW(parse_population_csv(""), FormatError);
  EXPECT_THROW(parse_population_csv("weight,label\n1,1\n"), FormatError);
  EXPECT_THROW(parse_population_csv("weight,label,x\n1,0,3\n"), FormatError);
  EXPECT_THROW(parse_population_csv("weight,label,x\n0,1,3\n"), FormatError);
  EXPECT_THROW(parse_population_csv("weight,label,x\n1,1\n"), FormatError);
  EXPECT_THROW(parse_population_csv("weight,label,x\n1,1,abc\n"), FormatError);
  EXPECT_THROW(read_population_csv(kData / "missing.csv"), FormatError);
}

TEST(CostJsonTest, RoundTripsEveryFamily) {
  std::mt19937_64 rng(2);
  auto part = testing::random_separable_part(rng, 5);
  std::vector<CostModel> costs{
      CostModel::linear({1.0, -0.5}),
      CostModel::separable(part.c1, part.c2),
      CostModel::min_separable({part, testing::random_separable_part(rng, 5)}),
      CostModel::tabular(testing::random_cost_matrix(rng, 4)),
      CostModel::mixed({0.3, 0.7}, 0.2),
      separable_decompose(CostModel::tabular(testing::random_cost_matrix(rng, 3))),
      CostModel::separable(ScoreFn::linear_with_range({1.0}, {2.0, 4.0}),
                           ScoreFn::linear_with_range({2.0}, {2.0, 4.0, 6.0})),
  };
  costs[0].scale = 2.5;
  costs[1].family = SeparableCost{part.c1.scaled(3.0), part.c2.scaled(3.0)};
  for (const auto& c : costs) {
    std::string text = format_cost_json(c);
    CostModel back = parse_cost_json(text);
    EXPECT_EQ(format_cost_json(back), text);
    EXPECT_EQ(back.scale, c.scale);
    EXPECT_STREQ(family_name(back), family_name(c));
  }
  // Decomposition parts skip the range check and say so.
  EXPECT_NE(format_cost_json(costs[5]).find("\"check_ranges\": false"), std::string::npos);
}

TEST(CostJsonTest, Errors) {
  EXPECT_THROW(parse_cost_json("{"), FormatError);
  EXPECT_THROW(parse_cost_json(R"({"type": "quadratic"})"), FormatError);
  EXPECT_THROW(parse_cost_json(R"({"type": "linear", "alpha": [1], "beta": 2})"), FormatError);
  EXPECT_THROW(parse_cost_json(R"({"type": "tabular", "matrix": [[1]]})"), FormatError);
  EXPECT_THROW(parse_cost_json(R"({"type": "mixed", "alpha": [1]})"), FormatError);
  EXPECT_THROW(parse_cost_json(R"({"type": "linear", "alpha": ["a"]})"), FormatError);
}

TEST(ClassifierJsonTest, RoundTrip) {
  std::vector<Classifier> fs{
      LinearHalfspace{{1.0, -2.0}, 0.5},
      ThresholdOnScore{ScoreFn::linear({1.0}), kInfinity},
      ThresholdOnScore{ScoreFn::tabular({1.0, 3.0}), 3.0},
      ConjunctionOfThresholds{{{ScoreFn::linear({1.0, 0.0}), 2.0},
                               {ScoreFn::linear({0.0, 1.0}), kInfinity}}},
      TabularLabels{{Label::negative, Label::positive}},
  };
  for (const auto& f : fs) {
    std::string text = format_classifier_json(f);
    EXPECT_EQ(format_classifier_json(parse_classifier_json(text)), text);
  }
  EXPECT_NE(format_classifier_json(fs[1]).find("\"inf\""), std::string::npos);
  EXPECT_THROW(parse_classifier_json(R"({"type": "tree"})"), FormatError);
  EXPECT_THROW(parse_classifier_json(R"({"type": "threshold", "threshold": "big"})"), FormatError);
}

TEST(ConfigJsonTest, DefaultsAndAliases) {
  ExperimentConfig c = parse_config_json(R"({"seed": 4, "epsilon": [0.2]})");
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{4}));
  EXPECT_EQ(c.epsilons, (std::vector<double>{0.2}));
  EXPECT_EQ(c.n_train, 1400u);
  EXPECT_EQ(c.schema.dim(), 15u);
  ExperimentConfig d = parse_config_json(format_config_json(c));
  EXPECT_EQ(format_config_json(d), format_config_json(c));
  EXPECT_THROW(parse_config_json(R"({"seeds": [1], "colour": 1})"), FormatError);
  EXPECT_THROW(parse_config_json(R"({"epsilons": [2]})"), FormatError);
  EXPECT_THROW(parse_config_json(R"({"schema": "other"})"), FormatError);
}

TEST(SweepCsvTest, Header) {
  std::vector<SweepRow> rows{{"svm", 1.0, 0.2, 0.394, kNoGamma, 0.75, 3}};
  EXPECT_EQ(format_sweep_csv(rows),
            "method,t,epsilon,sin_theta,gamma,accuracy,seed\nsvm,1,0.2,0.394,-1,0.75,3\n");
}

TEST(GoldenFilesTest, AllExamplesParse) {
  EXPECT_EQ(read_population_csv(kData / "line_population.csv").size(), 4u);
  EXPECT_EQ(read_population_csv(kData / "corner_population.csv").dim(), 2u);
  for (const char* name : {"line_separable_cost.json", "finite_separable_cost.json",
                           "tabular_cost.json", "min_separable_cost.json", "mixed_cost.json"}) {
    EXPECT_NO_THROW(parse_cost_json(read_text_file(kData / name))) << name;
  }
  for (const char* name :
       {"threshold_model.json", "conjunction_classifier.json", "halfspace_classifier.json"}) {
    EXPECT_NO_THROW(parse_classifier_json(read_text_file(kData / name))) << name;
  }
  EXPECT_EQ(parse_config_json(read_text_file(kData / "experiment_small.json")).seeds.size(), 2u);
  EXPECT_EQ(parse_dimacs(read_text_file(kData / "unsat2.cnf")).clauses.size(), 2u);
  EXPECT_EQ(parse_dimacs(read_text_file(kData / "sat3.cnf")).clauses.size(), 3u);
  EXPECT_TRUE(testing::satisfiable(parse_dimacs(read_text_file(kData / "sat3.cnf"))));
  EXPECT_FALSE(testing::satisfiable(parse_dimacs(read_text_file(kData / "unsat2.cnf"))));
}

}  // namespace
}  // namespace stratclass
