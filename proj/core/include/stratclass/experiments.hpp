#pragma once

// Robustness experiments: synthetic data on the spam-feature schema,
// normalization, direction perturbation, accuracy under gaming, and the
// gaming / angle / hybrid sweeps against the baseline linear classifier.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stratclass/costs.hpp"
#include "stratclass/learners.hpp"
#include "stratclass/model.hpp"

namespace stratclass {

struct Feature {
  std::string name;
  double cost_coefficient = 0.0;
};

struct FeatureSchema {
  std::vector<Feature> features;

  /// The 15 features of the venue-tip spam data with their cost coefficients.
  static FeatureSchema default_schema();
  std::size_t dim() const { return features.size(); }
  Vector coefficients() const;
  /// Coefficients scaled to unit norm: the ground-truth cost direction.
  Vector unit_alpha() const;
};

/// Two unit-covariance Gaussian classes, n/2 labeled +1 (rounded down) and
/// the rest -1, with means +-separation/2 along `direction` (normalized; drawn
/// from the seed when absent). Rows alternate +1, -1 while both remain.
Population generate_synthetic_population(std::size_t dim, std::size_t n, std::uint64_t seed,
                                         double separation,
                                         std::optional<Vector> direction = std::nullopt);

struct Normalization {
  Vector means;
  Vector stds;
  /// Columns whose spread was zero; their std is reported as 1.
  std::vector<bool> clamped;
};

/// Column-wise (x - mean) / std over the rows (unweighted).
std::pair<Population, Normalization> normalize_features(const Population& pop);
Population apply_normalization(const Population& pop, const Normalization& stats);

/// sin of the angle between two nonzero vectors.
double sin_angle(std::span<const double> a, std::span<const double> b);

/// alpha plus seed-fixed Gaussian noise orthogonal to it, sized in closed
/// form so that the angle has the requested sine, rescaled to |alpha|.
Vector perturb_direction(std::span<const double> alpha, double sin_theta_target,
                         std::uint64_t seed);

/// Weighted accuracy after every test point best-responds to f under c_true
/// scaled for budget t. t = 0 means no gaming.
double accuracy_under_gaming(const Classifier& f, const Population& test, const CostModel& c_true,
                             double t);

/// Threshold learner on the assumed linear cost <direction, y - x>_+ at
/// budget t, published as the halfspace <direction, x> >= s* t / 2. At t = 0
/// it is the same learner's induced cut s* - 2 at unit scale.
LinearHalfspace train_robust_linear(const Population& train, std::span<const double> direction,
                                    double t);

struct ExperimentConfig {
  std::vector<double> epsilons{0.0, 0.1, 0.2};
  /// Gaming and hybrid sweeps.
  double sin_theta = 0.394;
  /// Angle sweep.
  std::vector<double> sin_theta_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  std::vector<double> gaming_grid{0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5};
  std::vector<double> gamma_grid{0.0, 0.25, 0.5, 0.75, 1.0};
  /// Budget of the angle sweep.
  double fixed_t = 1.0;
  std::vector<std::uint64_t> seeds{0};
  std::size_t n_train = 1400;
  std::size_t n_test = 600;
  double separation = 4.0;
  FeatureSchema schema = FeatureSchema::default_schema();
  /// Empty for synthetic data, else a population CSV split by the seed.
  std::string data_path;
  BaselineOptions baseline;
  std::size_t workers = 1;

  void validate() const;
};

inline constexpr double kNoGamma = -1.0;

struct SweepRow {
  std::string method;
  double t = 0.0;
  double epsilon = 0.0;
  double sin_theta = 0.0;
  double gamma = kNoGamma;
  double accuracy = 0.0;
  std::uint64_t seed = 0;
};

inline constexpr const char* kMethodRobust = "strategic";
inline constexpr const char* kMethodBaseline = "svm";
inline constexpr const char* kMethodHybrid = "hybrid";

/// Train/test populations for one seed, normalized with the training
/// statistics.
struct ExperimentData {
  Population train;
  Population test;
};
ExperimentData prepare_data(const ExperimentConfig& config, std::uint64_t seed);

std::vector<SweepRow> run_gaming_sweep(const ExperimentConfig& config);
std::vector<SweepRow> run_angle_sweep(const ExperimentConfig& config);
std::vector<SweepRow> run_hybrid_sweep(const ExperimentConfig& config);

/// Sorts by (method, epsilon, sin_theta, gamma, t, seed).
void sort_rows(std::vector<SweepRow>& rows);

}  // namespace stratclass
