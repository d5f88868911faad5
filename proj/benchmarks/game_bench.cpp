#include <benchmark/benchmark.h>

#include <random>

#include "stratclass/costs.hpp"
#include "stratclass/game.hpp"

namespace {

using namespace stratclass;

Vector gaussian(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> g;
  Vector v(d);
  for (auto& e : v) e = g(rng);
  return v;
}

// Closed-form mixed-cost solve, per dimension.
void BM_MinCostMixed(benchmark::State& state) {
  auto d = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(4);
  Vector x = gaussian(rng, d);
  Vector w = gaussian(rng, d);
  LinearHalfspace h{w, -dot(w, x) - 1.0};
  CostModel c = CostModel::mixed(gaussian(rng, d), 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(min_cost_to_acceptance(x, h, c));
}
BENCHMARK(BM_MinCostMixed)->DenseRange(2, 16, 7);

// Best response against the population as the candidate set.
void BM_BestResponseTabular(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  std::vector<Vector> m(n, Vector(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = i == j ? 0.0 : u(rng);
  }
  std::vector<Label> labels(n, Label::negative);
  for (std::size_t i = 0; i < n; i += 3) labels[i] = Label::positive;
  Population pop = Population::indexed(std::vector<double>(n, 1.0), labels);
  CostModel c = CostModel::tabular(m);
  TabularLabels f{labels};
  for (auto _ : state) benchmark::DoNotOptimize(jury_payoff(f, c, pop));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BestResponseTabular)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

}  // namespace
