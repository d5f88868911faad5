#include "stratclass/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "stratclass/errors.hpp"

namespace stratclass {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

FiniteSet make_finite_set(Vector values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("score values must be finite");
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return FiniteSet{std::move(values)};
}

}  // namespace

Label label_from_int(int value) {
  if (value == 1) return Label::positive;
  if (value == -1) return Label::negative;
  throw InvalidArgument("label must be -1 or +1, got " + std::to_string(value));
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("dot: " + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

double norm(std::span<const double> a) { return std::sqrt(squared_norm(a)); }

// --- Population -------------------------------------------------------------

Population::Population(std::vector<Vector> points, std::vector<double> weights,
                       std::vector<Label> labels)
    : Population(std::move(points), std::move(weights), std::move(labels), {}) {}

Population::Population(std::vector<Vector> points, std::vector<double> weights,
                       std::vector<Label> labels, std::vector<std::size_t> ids)
    : points_(std::move(points)),
      weights_(std::move(weights)),
      labels_(std::move(labels)),
      ids_(std::move(ids)) {
  if (weights_.size() != points_.size() || labels_.size() != points_.size()) {
    throw InvalidArgument("population: points, weights and labels differ in length");
  }
  if (ids_.empty()) {
    ids_.resize(points_.size());
    std::iota(ids_.begin(), ids_.end(), std::size_t{0});
  } else if (ids_.size() != points_.size()) {
    throw InvalidArgument("population: ids differ in length");
  }
  if (!points_.empty()) {
    dim_ = points_.front().size();
    if (dim_ == 0) throw InvalidArgument("population: points need at least one coordinate");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].size() != dim_) {
      throw DimensionMismatch("population: point " + std::to_string(i) + " has dimension " +
                              std::to_string(points_[i].size()) + ", expected " +
                              std::to_string(dim_));
    }
    for (double v : points_[i]) {
      if (!std::isfinite(v)) throw InvalidArgument("population: non-finite coordinate");
    }
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      throw InvalidArgument("population: weights must be positive and finite");
    }
    if (labels_[i] != Label::positive && labels_[i] != Label::negative) {
      throw InvalidArgument("population: labels must be -1 or +1");
    }
  }
}

Population Population::indexed(std::vector<double> weights, std::vector<Label> labels) {
  std::vector<Vector> points(weights.size());
  for (std::size_t i = 0; i < points.size(); ++i) points[i] = {static_cast<double>(i)};
  return Population(std::move(points), std::move(weights), std::move(labels));
}

double Population::total_weight() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

Population Population::subset(std::span<const std::size_t> rows) const {
  std::vector<Vector> pts;
  std::vector<double> ws;
  std::vector<Label> ls;
  std::vector<std::size_t> ids;
  pts.reserve(rows.size());
  ws.reserve(rows.size());
  ls.reserve(rows.size());
  ids.reserve(rows.size());
  for (std::size_t r : rows) {
    pts.push_back(points_.at(r));
    ws.push_back(weights_[r]);
    ls.push_back(labels_[r]);
    ids.push_back(ids_[r]);
  }
  return Population(std::move(pts), std::move(ws), std::move(ls), std::move(ids));
}

Population Population::with_points(std::vector<Vector> points) const {
  return Population(std::move(points), weights_, labels_, ids_);
}

// --- ScoreFn ----------------------------------------------------------------

ScoreFn::ScoreFn(std::variant<Linear, Tabular> fn, ScoreRange range)
    : fn_(std::move(fn)), range_(std::move(range)) {}

ScoreFn ScoreFn::linear(Vector alpha) {
  if (alpha.empty()) throw InvalidArgument("linear score needs a coefficient vector");
  return ScoreFn(Linear{std::move(alpha)}, RealLine{});
}

ScoreFn ScoreFn::linear_over(Vector alpha, std::span<const Vector> support) {
  if (alpha.empty()) throw InvalidArgument("linear score needs a coefficient vector");
  Vector values;
  values.reserve(support.size());
  for (const auto& p : support) values.push_back(dot(alpha, p));
  return ScoreFn(Linear{std::move(alpha)}, make_finite_set(std::move(values)));
}

ScoreFn ScoreFn::linear_with_range(Vector alpha, Vector values) {
  if (alpha.empty()) throw InvalidArgument("linear score needs a coefficient vector");
  return ScoreFn(Linear{std::move(alpha)}, make_finite_set(std::move(values)));
}

ScoreFn ScoreFn::tabular(Vector values) {
  auto range = make_finite_set(values);
  return ScoreFn(Tabular{std::move(values)}, std::move(range));
}

double ScoreFn::scaled_value(PointRef p, double extra) const {
  double raw = std::visit(
      overloaded{
          [&](const Linear& l) { return dot(l.alpha, p.coords); },
          [&](const Tabular& t) {
            if (p.index >= t.values.size()) {
              throw InvalidArgument("tabular score: point index out of range");
            }
            return t.values[p.index];
          },
      },
      fn_);
  return (factor_ * extra) * raw;
}

std::optional<Vector> ScoreFn::linear_coefficients() const {
  const auto* l = std::get_if<Linear>(&fn_);
  if (l == nullptr) return std::nullopt;
  Vector a = l->alpha;
  for (double& x : a) x *= factor_;
  return a;
}

Vector ScoreFn::range_values() const {
  Vector out;
  if (const auto* fs = std::get_if<FiniteSet>(&range_)) {
    out.reserve(fs->values.size());
    for (double v : fs->values) out.push_back(factor_ * v);
  }
  return out;
}

// Range queries search the unscaled values; `factor_ * v` is monotone in v.
std::optional<double> ScoreFn::max_in(double lo, double hi) const {
  if (!(lo <= hi)) return std::nullopt;
  if (std::holds_alternative<RealLine>(range_)) return hi;
  const auto& v = std::get<FiniteSet>(range_).values;
  auto it = std::partition_point(v.begin(), v.end(),
                                 [&](double x) { return factor_ * x <= hi; });
  if (it == v.begin()) return std::nullopt;
  double value = factor_ * *std::prev(it);
  if (value < lo) return std::nullopt;
  return value;
}

std::optional<double> ScoreFn::min_in_half_open(double lo, double hi) const {
  if (std::holds_alternative<RealLine>(range_)) return std::nullopt;
  const auto& v = std::get<FiniteSet>(range_).values;
  auto it = std::partition_point(v.begin(), v.end(),
                                 [&](double x) { return factor_ * x <= lo; });
  if (it == v.end()) return std::nullopt;
  double value = factor_ * *it;
  if (value > hi) return std::nullopt;
  return value;
}

std::optional<double> ScoreFn::min_above(double lo) const {
  return min_in_half_open(lo, kInfinity);
}

bool ScoreFn::range_contains(const ScoreFn& other) const {
  if (std::holds_alternative<RealLine>(range_)) return true;
  if (std::holds_alternative<RealLine>(other.range_)) return false;
  Vector mine = range_values();
  Vector theirs = other.range_values();
  return std::includes(mine.begin(), mine.end(), theirs.begin(), theirs.end());
}

ScoreFn ScoreFn::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw InvalidArgument("score scale factor must be positive and finite");
  }
  ScoreFn out = *this;
  out.factor_ = factor_ * factor;
  return out;
}

// --- Classifier -------------------------------------------------------------

Label predict(const Classifier& f, PointRef x) {
  auto threshold = [&](const ThresholdOnScore& t) {
    if (t.threshold == kInfinity) return Label::negative;
    return t.score(x) >= t.threshold ? Label::positive : Label::negative;
  };
  return std::visit(
      overloaded{
          [&](const LinearHalfspace& h) {
            return dot(h.w, x.coords) + h.b >= 0.0 ? Label::positive : Label::negative;
          },
          threshold,
          [&](const ConjunctionOfThresholds& c) {
            for (const auto& part : c.parts) {
              if (threshold(part) == Label::negative) return Label::negative;
            }
            return Label::positive;
          },
          [&](const TabularLabels& t) {
            if (x.index >= t.labels.size()) {
              throw InvalidArgument("tabular classifier: point index out of range");
            }
            return t.labels[x.index];
          },
      },
      f);
}

std::optional<LinearHalfspace> as_halfspace(const Classifier& f) {
  if (const auto* h = std::get_if<LinearHalfspace>(&f)) return *h;
  if (const auto* t = std::get_if<ThresholdOnScore>(&f)) {
    auto alpha = t->score.linear_coefficients();
    if (!alpha || !std::isfinite(t->threshold)) return std::nullopt;
    return LinearHalfspace{std::move(*alpha), -t->threshold};
  }
  return std::nullopt;
}

Classifier reject_all() { return ThresholdOnScore{ScoreFn{}, kInfinity}; }

}  // namespace stratclass
