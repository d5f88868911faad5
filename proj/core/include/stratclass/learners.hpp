#pragma once

// Gaming-robust threshold learners for separable and min-of-separable costs,
// their empirical-error objective, the sample-size calculator, the baseline
// linear max-margin classifier, and the hybrid direction mixer.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stratclass/costs.hpp"
#include "stratclass/model.hpp"

namespace stratclass {

struct TrainedThreshold {
  ThresholdOnScore classifier;
  /// s* - 2, the cut on c1 that the published threshold induces after gaming.
  double effective_threshold = kInfinity;
  double empirical_err = 0.0;
  /// One candidate per sample followed by +inf.
  std::vector<double> candidate_thresholds;
};

/// Threshold learner for a single separable (or linear) cost. Samples are
/// weighted; weights act as multiplicities. Minimum empirical error wins,
/// ties go to the larger threshold.
TrainedThreshold train_separable(const Population& samples, const CostModel& c);

struct TrainedConjunction {
  ConjunctionOfThresholds classifier;
  std::vector<double> threshold_vector;
  double empirical_err = 0.0;
  /// (m + 1)^k
  std::uint64_t grid_size = 0;
  /// Whether the objective could see the joint support of the parts (and so
  /// used the exact acceptance region) or fell back to the raw thresholds.
  bool support_aware = false;
};

struct MinSeparableOptions {
  /// Largest grid the learner will enumerate.
  std::uint64_t max_grid = 100'000'000;
  std::size_t workers = 1;
  /// The points Contestant may move to. Defaults to the index domain when
  /// every score is tabular; without it the raw threshold objective is used.
  std::optional<Population> support;
};

/// Threshold-vector learner for a minimum of k separable costs. Enumerates
/// the per-part candidate grid (plus the lowest threshold equivalent to each
/// grid vector when the support is known) and returns the conjunction with
/// the smallest effective error, ties to the lexicographically largest vector.
TrainedConjunction train_min_separable(const Population& samples, const CostModel& c,
                                       const MinSeparableOptions& options = {});

/// Error of the union acceptance rule: x is effectively accepted iff some
/// part b has b1(x) >= s_b - 2.
double empirical_effective_err(std::span<const double> thresholds, const Population& samples,
                               std::span<const SeparableCost> parts);

/// Same, with each s_b first tightened to the smallest b2 value among support
/// points that the conjunction accepts (all +inf if it accepts none). This
/// is the error the game actually produces on that support.
double tightened_effective_err(std::span<const double> thresholds, const Population& samples,
                               std::span<const SeparableCost> parts,
                               std::span<const PointRef> support);

struct SampleBound {
  std::size_t vc_dim = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::size_t k = 1;
  std::uint64_t m = 0;
};

/// Left side of the sample condition at m:
///   R + 2 sqrt(k ln(m + 1) / m) + sqrt(ln(2 / delta) / (8 m)),
/// with R = sqrt(2 d ln(e m / d) / m) (zero for d = 0).
double sample_bound_lhs(std::size_t d, double delta, std::size_t k, std::uint64_t m);

/// Least m >= max(1, d) with sample_bound_lhs <= epsilon / 8.
SampleBound sample_bound(std::size_t d, double epsilon, double delta, std::size_t k = 1);

struct BaselineOptions {
  double reg = 1e-2;
  int epochs = 50;
  std::uint64_t seed = 0;
};

struct BaselineModel {
  LinearHalfspace classifier;
  BaselineOptions options;
  /// Set when the sample had a single class; the classifier is then constant.
  bool single_class = false;
};

/// L2-regularized hinge loss, averaged stochastic subgradient descent with
/// step 1/sqrt(t), unregularized bias and seed-fixed shuffling.
BaselineModel train_baseline_linear(const Population& samples, const BaselineOptions& options = {});

/// (1 - gamma) alpha_prime + gamma beta
Vector hybrid_direction(std::span<const double> alpha_prime, std::span<const double> beta,
                        double gamma);

}  // namespace stratclass
