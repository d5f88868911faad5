#pragma once

// Population, score functions and classifiers shared by every module.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace stratclass {

using Vector = std::vector<double>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

enum class Label : int { negative = -1, positive = 1 };

constexpr int sign(Label label) { return static_cast<int>(label); }
Label label_from_int(int value);

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double norm(std::span<const double> a);

/// A point handed to cost and score evaluation. Tabular families look up
/// `index`; analytic families read `coords`.
struct PointRef {
  std::span<const double> coords;
  std::size_t index = kNoIndex;
};

/// Weighted, labeled point set. The induced distribution is proportional to
/// the weights; `id(i)` names the point of the reference domain that row i
/// stands for (identity unless the population is a resample).
class Population {
 public:
  Population() = default;
  Population(std::vector<Vector> points, std::vector<double> weights,
             std::vector<Label> labels);
  Population(std::vector<Vector> points, std::vector<double> weights,
             std::vector<Label> labels, std::vector<std::size_t> ids);

  /// Points without geometry: coordinate i is the index itself.
  static Population indexed(std::vector<double> weights, std::vector<Label> labels);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  std::size_t dim() const { return dim_; }

  std::span<const double> point(std::size_t i) const { return points_.at(i); }
  double weight(std::size_t i) const { return weights_.at(i); }
  Label label(std::size_t i) const { return labels_.at(i); }
  std::size_t id(std::size_t i) const { return ids_.at(i); }
  PointRef ref(std::size_t i) const { return {points_.at(i), ids_.at(i)}; }
  double total_weight() const;

  const std::vector<Vector>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<Label>& labels() const { return labels_; }
  const std::vector<std::size_t>& ids() const { return ids_; }

  /// Rows in the given order (repeats allowed); ids are preserved.
  Population subset(std::span<const std::size_t> rows) const;
  Population with_points(std::vector<Vector> points) const;

 private:
  std::vector<Vector> points_;
  std::vector<double> weights_;
  std::vector<Label> labels_;
  std::vector<std::size_t> ids_;
  std::size_t dim_ = 0;
};

struct RealLine {};

/// Sorted, duplicate-free set of attainable score values.
struct FiniteSet {
  std::vector<double> values;
};

using ScoreRange = std::variant<RealLine, FiniteSet>;

/// A real-valued score on the domain together with a description of its
/// image, which is all the threshold learners need to know about it.
class ScoreFn {
 public:
  struct Linear {
    Vector alpha;
  };
  struct Tabular {
    Vector values;
  };

  ScoreFn() : ScoreFn(Tabular{}, FiniteSet{}) {}

  static ScoreFn linear(Vector alpha);
  /// Linear functional whose image is taken to be its values on `support`.
  static ScoreFn linear_over(Vector alpha, std::span<const Vector> support);
  /// Linear functional with an explicitly listed finite image.
  static ScoreFn linear_with_range(Vector alpha, Vector values);
  static ScoreFn tabular(Vector values);

  double operator()(PointRef p) const { return scaled_value(p, 1.0); }
  /// Same as `scaled(extra)(p)` without copying the score.
  double scaled_value(PointRef p, double extra) const;

  const std::variant<Linear, Tabular>& function() const { return fn_; }
  /// Unscaled image; every reported value is `factor() * v`.
  const ScoreRange& range() const { return range_; }
  double factor() const { return factor_; }
  /// Effective coefficients (factor applied) of a linear score.
  std::optional<Vector> linear_coefficients() const;
  bool finite_range() const { return std::holds_alternative<FiniteSet>(range_); }
  /// Attainable values with the factor applied; empty for the real line.
  Vector range_values() const;

  /// max(range ∩ [lo, hi])
  std::optional<double> max_in(double lo, double hi) const;
  /// min(range ∩ (lo, hi]); never attained on the real line.
  std::optional<double> min_in_half_open(double lo, double hi) const;
  /// min(range ∩ (lo, ∞)); never attained on the real line.
  std::optional<double> min_above(double lo) const;
  /// Is every value of `other`'s range a value of this range?
  bool range_contains(const ScoreFn& other) const;

  ScoreFn scaled(double factor) const;

 private:
  ScoreFn(std::variant<Linear, Tabular> fn, ScoreRange range);

  std::variant<Linear, Tabular> fn_;
  ScoreRange range_;
  double factor_ = 1.0;
};

struct LinearHalfspace {
  Vector w;
  double b = 0.0;
};

/// Accepts iff score(x) >= threshold; threshold = +inf rejects everything.
struct ThresholdOnScore {
  ScoreFn score;
  double threshold = kInfinity;
};

/// Accepts iff every part accepts.
struct ConjunctionOfThresholds {
  std::vector<ThresholdOnScore> parts;
};

struct TabularLabels {
  std::vector<Label> labels;
};

using Classifier =
    std::variant<LinearHalfspace, ThresholdOnScore, ConjunctionOfThresholds, TabularLabels>;

Label predict(const Classifier& f, PointRef x);

/// The halfspace a classifier reduces to, when it is one (a linear halfspace
/// or a threshold on a linear functional).
std::optional<LinearHalfspace> as_halfspace(const Classifier& f);

Classifier reject_all();

}  // namespace stratclass
