#pragma once

// Cost-function families and the operations on them: evaluation, the
// min-of-separable decomposition of a finite cost table, ε-net metric
// approximation, budget scaling, metric validation, and the analytic
// minimum-cost-to-acceptance solver for halfspace classifiers.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "stratclass/model.hpp"

namespace stratclass {

/// c(x, y) = <alpha, y - x>_+
struct LinearCost {
  Vector alpha;
};

/// c(x, y) = max(0, c2(y) - c1(x))
struct SeparableCost {
  ScoreFn c1;
  ScoreFn c2;
};

/// c(x, y) = min over parts of the part's separable cost.
struct MinSeparableCost {
  std::vector<SeparableCost> parts;
};

/// c(x, y) = matrix[x][y], indexed by point id.
struct TabularCost {
  std::vector<Vector> matrix;
};

/// c(x, y) = (1 - epsilon) <alpha, y - x>_+ + epsilon ||y - x||^2
struct MixedTrueCost {
  Vector alpha;
  double epsilon = 0.0;
};

using CostFamily =
    std::variant<LinearCost, SeparableCost, MinSeparableCost, TabularCost, MixedTrueCost>;

/// A cost family times a positive scale (the scale carries the gaming
/// budget: see scale_for_budget).
struct CostModel {
  CostFamily family;
  double scale = 1.0;

  static CostModel linear(Vector alpha);
  /// Requires c1's image to be contained in c2's when both are finite.
  static CostModel separable(ScoreFn c1, ScoreFn c2);
  static CostModel min_separable(std::vector<SeparableCost> parts);
  /// Requires a square, nonnegative matrix with zero diagonal.
  static CostModel tabular(std::vector<Vector> matrix);
  static CostModel mixed(Vector alpha, double epsilon);
};

const char* family_name(const CostModel& c);

double eval_cost(const CostModel& c, PointRef x, PointRef y);

/// Separable parts with the model's scale folded into the score functions.
/// Linear costs become c1 = c2 = <alpha, .> on the real line. Throws
/// Unsupported for tabular and mixed costs.
std::vector<SeparableCost> separable_parts(const CostModel& c);

/// c1(X) ⊆ c2(X), checked exactly for finite images and taken as declared
/// when c2 spans the real line.
bool satisfies_range_condition(const SeparableCost& part);

/// Rewrites a finite cost table as the minimum of |X|^2 separable costs
/// b_{w,z}(x, y) = c(w, z) + D·[x ≠ w] + D·[y ≠ z]. D defaults to the
/// largest entry. The parts are not subject to the range condition.
CostModel separable_decompose(const CostModel& tabular, std::optional<double> D = std::nullopt);

/// c̃(x, y) = min over (w, z) ∈ net × net of c(x, w) + c(w, z) + c(z, y).
/// For a metric and an ε-net this satisfies c <= c̃ <= c + 4ε entrywise.
CostModel metric_net_approximate(const CostModel& metric, std::span<const std::size_t> net);

/// Greedy farthest-point traversal from point 0, stopping once every point
/// is within `epsilon` of the net.
std::vector<std::size_t> greedy_net(const CostModel& metric, double epsilon);

/// max over x of min over s in the net of c(x, s).
double net_radius(const CostModel& metric, std::span<const std::size_t> net);

/// Scale multiplied by 2 / t, i.e. Contestant pays up to t original units.
CostModel scale_for_budget(const CostModel& c, double t);

struct MetricCheckReport {
  bool is_metric = false;
  bool symmetry_ok = false;
  bool diagonal_ok = false;
  bool nonnegative_ok = false;
  std::size_t violation_count = 0;
  /// First (at most 100) witnesses (i, j, k) with c(i,k) > c(i,j) + c(j,k).
  std::vector<std::array<std::size_t, 3>> violations;
};

MetricCheckReport validate_metric(std::span<const Vector> matrix);

struct AcceptanceCost {
  double cost = 0.0;
  Vector mover;
};

/// Cheapest move from x into the halfspace <w, y> + b >= 0 under a linear,
/// mixed, separable-linear or min-of-separable-linear cost. Points already
/// accepted return (0, x).
AcceptanceCost min_cost_to_acceptance(std::span<const double> x, const LinearHalfspace& f,
                                      const CostModel& c);

namespace detail {

/// Subgradient-projection solver for the mixed objective over the
/// constraint <w, d> >= r; the closed form falls back to it on degenerate
/// geometry. Returns the displacement d.
Vector projected_gradient_displacement(std::span<const double> alpha, double epsilon,
                                       std::span<const double> w, double r,
                                       int iterations = 10000);

}  // namespace detail

}  // namespace stratclass
