#include "stratclass/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>
#include <tuple>

#include "stratclass/errors.hpp"
#include "stratclass/game.hpp"
#include "stratclass/io.hpp"

namespace stratclass {

namespace {

Vector unit(Vector v) {
  double n = norm(v);
  if (!(n > 0.0)) throw InvalidArgument("direction must be nonzero");
  for (double& x : v) x /= n;
  return v;
}

// Independent stream per purpose, so the split and the perturbation noise do
// not replay the data generator's draws.
std::mt19937_64 tagged_rng(std::uint64_t seed, std::uint32_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), tag};
  return std::mt19937_64(seq);
}

Vector gaussian_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector g(dim);
  for (double& x : g) x = normal(rng);
  return g;
}

// Runs job(i) for i in [0, n) on up to `workers` threads; results keep
// their index so the output does not depend on scheduling.
template <class Job>
auto run_indexed(std::size_t n, std::size_t workers, Job job) {
  using Result = decltype(job(std::size_t{0}));
  std::vector<Result> out(n);
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = job(i);
    return out;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) out[i] = job(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<SweepRow> flatten(std::vector<std::vector<SweepRow>> parts) {
  std::vector<SweepRow> rows;
  for (auto& p : parts) rows.insert(rows.end(), p.begin(), p.end());
  sort_rows(rows);
  return rows;
}

// Everything a sweep needs for one seed.
struct SeedContext {
  ExperimentData data;
  Vector alpha;
  LinearHalfspace baseline;
};

SeedContext seed_context(const ExperimentConfig& config, std::uint64_t seed) {
  SeedContext ctx{prepare_data(config, seed), config.schema.unit_alpha(), {}};
  BaselineOptions opts = config.baseline;
  opts.seed = seed;
  ctx.baseline = train_baseline_linear(ctx.data.train, opts).classifier;
  return ctx;
}

}  // namespace

// --- Schema -------------------------------------------------------------------

FeatureSchema FeatureSchema::default_schema() {
  return FeatureSchema{{
      {"tips_on_place", -1.0},
      {"place_rating", -1.0},
      {"emails", -1.0},
      {"contact_information", -1.0},
      {"urls", -1.0},
      {"phone_numbers", -1.0},
      {"numeric_characters", -1.0},
      {"sentistrength_score", 1.0},
      {"combined_method", 1.0},
      {"words", 0.1},
      {"followers_to_followees", 1.0},
      {"distinct_unigrams", 0.1},
      {"tips_by_user", 0.1},
      {"followers", 1.0},
      {"capital_letters", 0.1},
  }};
}

Vector FeatureSchema::coefficients() const {
  Vector out;
  out.reserve(features.size());
  for (const auto& f : features) out.push_back(f.cost_coefficient);
  return out;
}

Vector FeatureSchema::unit_alpha() const { return unit(coefficients()); }

// --- Data ---------------------------------------------------------------------

Population generate_synthetic_population(std::size_t dim, std::size_t n, std::uint64_t seed,
                                         double separation, std::optional<Vector> direction) {
  if (dim == 0) throw InvalidArgument("synthetic data: dimension must be positive");
  if (n < 2) throw InvalidArgument("synthetic data: need at least two points");
  if (!(separation >= 0.0) || !std::isfinite(separation)) {
    throw InvalidArgument("synthetic data: separation must be nonnegative");
  }
  std::mt19937_64 rng(seed);
  Vector u;
  if (direction) {
    if (direction->size() != dim) throw DimensionMismatch("synthetic data: direction dimension");
    u = unit(*direction);
  } else {
    u = unit(gaussian_vector(rng, dim));
  }
  const std::size_t positives = n / 2;
  std::vector<Vector> points(n);
  std::vector<Label> labels(n);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    bool positive = i % 2 == 0 && i / 2 < positives;
    labels[i] = positive ? Label::positive : Label::negative;
    double shift = (positive ? 0.5 : -0.5) * separation;
    points[i].resize(dim);
    for (std::size_t j = 0; j < dim; ++j) points[i][j] = shift * u[j] + normal(rng);
  }
  return Population(std::move(points), std::vector<double>(n, 1.0), std::move(labels));
}

std::pair<Population, Normalization> normalize_features(const Population& pop) {
  if (pop.empty()) throw InvalidArgument("normalize_features: empty population");
  const std::size_t d = pop.dim();
  const double n = static_cast<double>(pop.size());
  Normalization s{Vector(d, 0.0), Vector(d, 1.0), std::vector<bool>(d, false)};
  for (std::size_t j = 0; j < d; ++j) {
    const double first = pop.point(0)[j];
    bool constant = true;
    double sum = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      sum += pop.point(i)[j];
      constant = constant && pop.point(i)[j] == first;
    }
    if (constant) {
      s.means[j] = first;
      s.clamped[j] = true;
      continue;
    }
    s.means[j] = sum / n;
    double sq = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      double c = pop.point(i)[j] - s.means[j];
      sq += c * c;
    }
    s.stds[j] = std::sqrt(sq / n);
  }
  return {apply_normalization(pop, s), s};
}

Population apply_normalization(const Population& pop, const Normalization& stats) {
  if (stats.means.size() != pop.dim() || stats.stds.size() != pop.dim()) {
    throw DimensionMismatch("apply_normalization: statistics do not match the population");
  }
  std::vector<Vector> pts = pop.points();
  for (auto& p : pts) {
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = (p[j] - stats.means[j]) / stats.stds[j];
  }
  return pop.with_points(std::move(pts));
}

ExperimentData prepare_data(const ExperimentConfig& config, std::uint64_t seed) {
  config.validate();
  Population all;
  std::size_t n_train = config.n_train;
  if (config.data_path.empty()) {
    all = generate_synthetic_population(config.schema.dim(), config.n_train + config.n_test, seed,
                                        config.separation, config.schema.unit_alpha());
  } else {
    all = read_population_csv(config.data_path);
    if (all.dim() != config.schema.dim()) {
      throw FormatError("data file has " + std::to_string(all.dim()) + " features, schema has " +
                        std::to_string(config.schema.dim()));
    }
    const double share = static_cast<double>(config.n_train) /
                         static_cast<double>(config.n_train + config.n_test);
    n_train = static_cast<std::size_t>(std::llround(share * static_cast<double>(all.size())));
    if (n_train == 0 || n_train >= all.size()) {
      throw InvalidArgument("data file too small for a train/test split");
    }
  }
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng = tagged_rng(seed, 2);
  std::shuffle(order.begin(), order.end(), rng);
  std::span<const std::size_t> rows(order);
  auto [train, stats] = normalize_features(all.subset(rows.first(n_train)));
  Population test = apply_normalization(all.subset(rows.subspan(n_train)), stats);
  return {std::move(train), std::move(test)};
}

// --- Directions -----------------------------------------------------------------

double sin_angle(std::span<const double> a, std::span<const double> b) {
  const double aa = squared_norm(a);
  const double bb = squared_norm(b);
  if (!(aa > 0.0) || !(bb > 0.0)) throw InvalidArgument("sin_angle: vectors must be nonzero");
  const double lambda = dot(a, b) / aa;
  double perp = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double r = b[i] - lambda * a[i];
    perp += r * r;
  }
  return std::min(1.0, std::sqrt(perp / bb));
}

Vector perturb_direction(std::span<const double> alpha, double sin_theta_target,
                         std::uint64_t seed) {
  if (!(sin_theta_target >= 0.0 && sin_theta_target < 1.0)) {
    throw InvalidArgument("perturb_direction: target sine must lie in [0, 1)");
  }
  const double len = norm(alpha);
  if (!(len > 0.0)) throw InvalidArgument("perturb_direction: alpha must be nonzero");
  if (sin_theta_target == 0.0) return Vector(alpha.begin(), alpha.end());
  if (alpha.size() < 2) throw InvalidArgument("perturb_direction: needs at least two dimensions");

  Vector a_hat(alpha.begin(), alpha.end());
  for (double& x : a_hat) x /= len;
  std::mt19937_64 rng = tagged_rng(seed, 3);
  Vector g;
  double g_len = 0.0;
  while (!(g_len > 0.0)) {
    g = gaussian_vector(rng, alpha.size());
    double along = dot(g, a_hat);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= along * a_hat[i];
    g_len = norm(g);
  }
  // a_hat + lambda g has tan(angle) = lambda |g|.
  const double lambda = std::tan(std::asin(sin_theta_target)) / g_len;
  Vector out(alpha.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a_hat[i] + lambda * g[i];
  const double out_len = norm(out);
  for (double& x : out) x *= len / out_len;
  return out;
}

// --- Evaluation -----------------------------------------------------------------

double accuracy_under_gaming(const Classifier& f, const Population& test, const CostModel& c_true,
                             double t) {
  if (test.empty()) throw InvalidArgument("accuracy_under_gaming: empty test set");
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw InvalidArgument("accuracy_under_gaming: budget must be nonnegative");
  }
  if (t == 0.0) {
    double correct = 0.0;
    for (std::size_t i = 0; i < test.size(); ++i) {
      if (predict(f, test.ref(i)) == test.label(i)) correct += test.weight(i);
    }
    return correct / test.total_weight();
  }
  return jury_payoff(f, scale_for_budget(c_true, t), test, CandidateSet::analytic());
}

LinearHalfspace train_robust_linear(const Population& train, std::span<const double> direction,
                                    double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("train_robust_linear: bad budget");
  Vector dir(direction.begin(), direction.end());
  CostModel assumed = CostModel::linear(dir);
  if (t == 0.0) {
    TrainedThreshold tr = train_separable(train, assumed);
    return {std::move(dir), -tr.effective_threshold};
  }
  TrainedThreshold tr = train_separable(train, scale_for_budget(assumed, t));
  return {std::move(dir), -tr.classifier.threshold * (t / 2.0)};
}

// --- Sweeps ---------------------------------------------------------------------

void ExperimentConfig::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (epsilons.empty() || !std::all_of(epsilons.begin(), epsilons.end(), in_unit)) {
    throw InvalidArgument("config: epsilons must be a nonempty list in [0, 1]");
  }
  auto sine_ok = [](double v) { return v >= 0.0 && v < 1.0; };
  if (!sine_ok(sin_theta)) throw InvalidArgument("config: sin_theta must lie in [0, 1)");
  if (sin_theta_grid.empty() || !std::all_of(sin_theta_grid.begin(), sin_theta_grid.end(), sine_ok)) {
    throw InvalidArgument("config: sin_theta_grid must be a nonempty list in [0, 1)");
  }
  auto budget_ok = [](double v) { return v >= 0.0 && std::isfinite(v); };
  if (gaming_grid.empty() || !std::all_of(gaming_grid.begin(), gaming_grid.end(), budget_ok)) {
    throw InvalidArgument("config: gaming_grid must be a nonempty list of budgets >= 0");
  }
  if (!budget_ok(fixed_t)) throw InvalidArgument("config: fixed_t must be >= 0");
  if (gamma_grid.empty() || !std::all_of(gamma_grid.begin(), gamma_grid.end(), in_unit)) {
    throw InvalidArgument("config: gamma_grid must be a nonempty list in [0, 1]");
  }
  if (seeds.empty()) throw InvalidArgument("config: at least one seed is required");
  if (n_train < 10 || n_test < 10) throw InvalidArgument("config: n_train and n_test must be >= 10");
  if (!(separation >= 0.0) || !std::isfinite(separation)) {
    throw InvalidArgument("config: separation must be >= 0");
  }
  if (schema.features.empty()) throw InvalidArgument("config: schema is empty");
  if (workers == 0) throw InvalidArgument("config: workers must be positive");
}

void sort_rows(std::vector<SweepRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.method, a.epsilon, a.sin_theta, a.gamma, a.t, a.seed) <
           std::tie(b.method, b.epsilon, b.sin_theta, b.gamma, b.t, b.seed);
  });
}

std::vector<SweepRow> run_gaming_sweep(const ExperimentConfig& config) {
  config.validate();
  auto per_seed = [&](std::size_t si) {
    const std::uint64_t seed = config.seeds[si];
    SeedContext ctx = seed_context(config, seed);
    Vector alpha_p = perturb_direction(ctx.alpha, config.sin_theta, seed);
    const double s = sin_angle(ctx.alpha, alpha_p);
    std::vector<SweepRow> rows;
    for (double t : config.gaming_grid) {
      Classifier robust = train_robust_linear(ctx.data.train, alpha_p, t);
      for (double eps : config.epsilons) {
        CostModel truth = CostModel::mixed(ctx.alpha, eps);
        rows.push_back({kMethodRobust, t, eps, s, kNoGamma,
                        accuracy_under_gaming(robust, ctx.data.test, truth, t), seed});
        rows.push_back({kMethodBaseline, t, eps, s, kNoGamma,
                        accuracy_under_gaming(ctx.baseline, ctx.data.test, truth, t), seed});
      }
    }
    return rows;
  };
  return flatten(run_indexed(config.seeds.size(), config.workers, per_seed));
}

std::vector<SweepRow> run_angle_sweep(const ExperimentConfig& config) {
  config.validate();
  const double t = config.fixed_t;
  auto per_seed = [&](std::size_t si) {
    const std::uint64_t seed = config.seeds[si];
    SeedContext ctx = seed_context(config, seed);
    std::vector<SweepRow> rows;
    for (double target : config.sin_theta_grid) {
      Vector alpha_p = perturb_direction(ctx.alpha, target, seed);
      const double s = sin_angle(ctx.alpha, alpha_p);
      Classifier robust = train_robust_linear(ctx.data.train, alpha_p, t);
      for (double eps : config.epsilons) {
        CostModel truth = CostModel::mixed(ctx.alpha, eps);
        rows.push_back({kMethodRobust, t, eps, s, kNoGamma,
                        accuracy_under_gaming(robust, ctx.data.test, truth, t), seed});
        rows.push_back({kMethodBaseline, t, eps, s, kNoGamma,
                        accuracy_under_gaming(ctx.baseline, ctx.data.test, truth, t), seed});
      }
    }
    return rows;
  };
  return flatten(run_indexed(config.seeds.size(), config.workers, per_seed));
}

std::vector<SweepRow> run_hybrid_sweep(const ExperimentConfig& config) {
  config.validate();
  auto per_seed = [&](std::size_t si) {
    const std::uint64_t seed = config.seeds[si];
    SeedContext ctx = seed_context(config, seed);
    Vector alpha_p = perturb_direction(ctx.alpha, config.sin_theta, seed);
    const double s = sin_angle(ctx.alpha, alpha_p);
    std::vector<SweepRow> rows;
    for (double t : config.gaming_grid) {
      std::vector<Classifier> hybrids;
      for (double gamma : config.gamma_grid) {
        hybrids.push_back(
            train_robust_linear(ctx.data.train, hybrid_direction(alpha_p, ctx.baseline.w, gamma), t));
      }
      for (double eps : config.epsilons) {
        CostModel truth = CostModel::mixed(ctx.alpha, eps);
        for (std::size_t g = 0; g < hybrids.size(); ++g) {
          rows.push_back({kMethodHybrid, t, eps, s, config.gamma_grid[g],
                          accuracy_under_gaming(hybrids[g], ctx.data.test, truth, t), seed});
        }
        rows.push_back({kMethodBaseline, t, eps, s, kNoGamma,
                        accuracy_under_gaming(ctx.baseline, ctx.data.test, truth, t), seed});
      }
    }
    return rows;
  };
  return flatten(run_indexed(config.seeds.size(), config.workers, per_seed));
}

}  // namespace stratclass
