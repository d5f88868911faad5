#include "stratclass/costs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stratclass/errors.hpp"

namespace stratclass {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidArgument("cost scale must be positive and finite");
  }
}

double separable_value(const SeparableCost& p, double scale, PointRef x, PointRef y) {
  return std::max(0.0, p.c2.scaled_value(y, scale) - p.c1.scaled_value(x, scale));
}

const std::vector<Vector>& table_of(const CostModel& c, const char* what) {
  const auto* t = std::get_if<TabularCost>(&c.family);
  if (t == nullptr) throw InvalidArgument(std::string(what) + " needs a tabular cost");
  return t->matrix;
}

void check_square(std::span<const Vector> m) {
  for (const auto& row : m) {
    if (row.size() != m.size()) throw InvalidArgument("cost matrix must be square");
  }
}

}  // namespace

CostModel CostModel::linear(Vector alpha) {
  if (alpha.empty()) throw InvalidArgument("linear cost needs a coefficient vector");
  return CostModel{LinearCost{std::move(alpha)}, 1.0};
}

CostModel CostModel::separable(ScoreFn c1, ScoreFn c2) {
  SeparableCost part{std::move(c1), std::move(c2)};
  if (!satisfies_range_condition(part)) {
    throw InvalidArgument("separable cost: range(c1) is not contained in range(c2)");
  }
  return CostModel{std::move(part), 1.0};
}

CostModel CostModel::min_separable(std::vector<SeparableCost> parts) {
  if (parts.empty()) throw InvalidArgument("min-separable cost needs at least one part");
  for (const auto& p : parts) {
    if (!satisfies_range_condition(p)) {
      throw InvalidArgument("min-separable cost: a part violates range(c1) ⊆ range(c2)");
    }
  }
  return CostModel{MinSeparableCost{std::move(parts)}, 1.0};
}

CostModel CostModel::tabular(std::vector<Vector> matrix) {
  check_square(matrix);
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    for (std::size_t j = 0; j < matrix.size(); ++j) {
      double v = matrix[i][j];
      if (!std::isfinite(v) || v < 0.0) {
        throw InvalidArgument("cost matrix entries must be finite and nonnegative");
      }
      if (i == j && v != 0.0) throw InvalidArgument("cost matrix diagonal must be zero");
    }
  }
  return CostModel{TabularCost{std::move(matrix)}, 1.0};
}

CostModel CostModel::mixed(Vector alpha, double epsilon) {
  if (alpha.empty()) throw InvalidArgument("mixed cost needs a coefficient vector");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw InvalidArgument("mixed cost epsilon must lie in [0, 1]");
  }
  return CostModel{MixedTrueCost{std::move(alpha), epsilon}, 1.0};
}

const char* family_name(const CostModel& c) {
  return std::visit(overloaded{
                        [](const LinearCost&) { return "linear"; },
                        [](const SeparableCost&) { return "separable"; },
                        [](const MinSeparableCost&) { return "min_separable"; },
                        [](const TabularCost&) { return "tabular"; },
                        [](const MixedTrueCost&) { return "mixed"; },
                    },
                    c.family);
}

double eval_cost(const CostModel& c, PointRef x, PointRef y) {
  const double s = c.scale;
  return std::visit(
      overloaded{
          // Written as a difference of scaled scores so that it agrees bit for
          // bit with the separable view the learners use.
          [&](const LinearCost& l) {
            return std::max(0.0, s * dot(l.alpha, y.coords) - s * dot(l.alpha, x.coords));
          },
          [&](const SeparableCost& p) { return separable_value(p, s, x, y); },
          [&](const MinSeparableCost& m) {
            double best = kInfinity;
            for (const auto& p : m.parts) best = std::min(best, separable_value(p, s, x, y));
            return best;
          },
          [&](const TabularCost& t) {
            if (x.index >= t.matrix.size() || y.index >= t.matrix.size()) {
              throw InvalidArgument("tabular cost: point index out of range");
            }
            return s * t.matrix[x.index][y.index];
          },
          [&](const MixedTrueCost& m) {
            if (x.coords.size() != m.alpha.size() || y.coords.size() != m.alpha.size()) {
              throw DimensionMismatch("mixed cost: dimension mismatch");
            }
            double lin = 0.0;
            double sq = 0.0;
            for (std::size_t i = 0; i < m.alpha.size(); ++i) {
              double d = y.coords[i] - x.coords[i];
              lin += m.alpha[i] * d;
              sq += d * d;
            }
            return s * ((1.0 - m.epsilon) * std::max(0.0, lin) + m.epsilon * sq);
          },
      },
      c.family);
}

std::vector<SeparableCost> separable_parts(const CostModel& c) {
  const double s = c.scale;
  auto scaled = [s](const SeparableCost& p) {
    return SeparableCost{p.c1.scaled(s), p.c2.scaled(s)};
  };
  return std::visit(
      overloaded{
          [&](const LinearCost& l) {
            ScoreFn f = ScoreFn::linear(l.alpha).scaled(s);
            return std::vector<SeparableCost>{{f, f}};
          },
          [&](const SeparableCost& p) { return std::vector<SeparableCost>{scaled(p)}; },
          [&](const MinSeparableCost& m) {
            std::vector<SeparableCost> out;
            out.reserve(m.parts.size());
            for (const auto& p : m.parts) out.push_back(scaled(p));
            return out;
          },
          [&](const TabularCost&) -> std::vector<SeparableCost> {
            throw Unsupported("tabular cost has no direct separable form; use separable_decompose");
          },
          [&](const MixedTrueCost&) -> std::vector<SeparableCost> {
            throw Unsupported("mixed cost is not separable");
          },
      },
      c.family);
}

bool satisfies_range_condition(const SeparableCost& part) {
  return part.c2.range_contains(part.c1);
}

CostModel separable_decompose(const CostModel& tabular, std::optional<double> D) {
  const auto& m = table_of(tabular, "separable_decompose");
  const std::size_t n = m.size();
  if (n == 0) throw InvalidArgument("separable_decompose: empty cost matrix");
  double max_entry = 0.0;
  for (const auto& row : m) {
    for (double v : row) max_entry = std::max(max_entry, v);
  }
  const double d = D.value_or(max_entry);
  if (!(d >= max_entry) || !std::isfinite(d)) {
    throw InvalidArgument("separable_decompose: D must be at least the largest matrix entry");
  }

  // b1(x) = -D [x != w] and b2(y) = c(w, z) + D [y != z], so that
  // b2(y) - b1(x) = c(w, z) + D [x != w] + D [y != z] >= 0.
  std::vector<SeparableCost> parts;
  parts.reserve(n * n);
  for (std::size_t w = 0; w < n; ++w) {
    Vector b1(n, -d);
    b1[w] = 0.0;
    ScoreFn f1 = ScoreFn::tabular(std::move(b1));
    for (std::size_t z = 0; z < n; ++z) {
      Vector b2(n, m[w][z] + d);
      b2[z] = m[w][z];
      parts.push_back({f1, ScoreFn::tabular(std::move(b2))});
    }
  }
  return CostModel{MinSeparableCost{std::move(parts)}, tabular.scale};
}

CostModel metric_net_approximate(const CostModel& metric, std::span<const std::size_t> net) {
  const auto& raw = table_of(metric, "metric_net_approximate");
  if (net.empty()) throw InvalidArgument("metric_net_approximate: empty net");
  const std::size_t n = raw.size();
  for (std::size_t s : net) {
    if (s >= n) throw InvalidArgument("metric_net_approximate: net index out of range");
  }
  if (!validate_metric(raw).is_metric) {
    throw InvalidArgument("metric_net_approximate: input is not a metric");
  }
  std::vector<Vector> m(n, Vector(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = metric.scale * raw[i][j];
  }

  std::vector<Vector> out(n, Vector(n, kInfinity));
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) {
        out[x][y] = 0.0;
        continue;
      }
      double best = kInfinity;
      for (std::size_t w : net) {
        for (std::size_t z : net) best = std::min(best, m[x][w] + m[w][z] + m[z][y]);
      }
      out[x][y] = best;
    }
  }
  return CostModel{TabularCost{std::move(out)}, 1.0};
}

std::vector<std::size_t> greedy_net(const CostModel& metric, double epsilon) {
  const auto& m = table_of(metric, "greedy_net");
  if (!(epsilon >= 0.0)) throw InvalidArgument("greedy_net: epsilon must be nonnegative");
  const std::size_t n = m.size();
  std::vector<std::size_t> net;
  if (n == 0) return net;
  Vector dist(n, kInfinity);
  std::size_t next = 0;
  while (true) {
    net.push_back(next);
    for (std::size_t x = 0; x < n; ++x) dist[x] = std::min(dist[x], metric.scale * m[x][next]);
    std::size_t far = 0;
    for (std::size_t x = 1; x < n; ++x) {
      if (dist[x] > dist[far]) far = x;
    }
    if (dist[far] <= epsilon) break;
    next = far;
  }
  return net;
}

double net_radius(const CostModel& metric, std::span<const std::size_t> net) {
  const auto& m = table_of(metric, "net_radius");
  if (net.empty()) throw InvalidArgument("net_radius: empty net");
  double radius = 0.0;
  for (std::size_t x = 0; x < m.size(); ++x) {
    double d = kInfinity;
    for (std::size_t s : net) d = std::min(d, metric.scale * m.at(x).at(s));
    radius = std::max(radius, d);
  }
  return radius;
}

CostModel scale_for_budget(const CostModel& c, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw InvalidArgument("scale_for_budget: budget must be positive and finite");
  }
  check_scale(c.scale);
  CostModel out = c;
  out.scale = c.scale * (2.0 / t);
  check_scale(out.scale);
  return out;
}

MetricCheckReport validate_metric(std::span<const Vector> matrix) {
  check_square(matrix);
  const std::size_t n = matrix.size();
  MetricCheckReport r;
  r.symmetry_ok = true;
  r.diagonal_ok = true;
  r.nonnegative_ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i][i] != 0.0) r.diagonal_ok = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(matrix[i][j] >= 0.0)) r.nonnegative_ok = false;
      if (matrix[i][j] != matrix[j][i]) r.symmetry_ok = false;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (matrix[i][k] > matrix[i][j] + matrix[j][k]) {
          ++r.violation_count;
          if (r.violations.size() < 100) r.violations.push_back({i, j, k});
        }
      }
    }
  }
  r.is_metric = r.symmetry_ok && r.diagonal_ok && r.nonnegative_ok && r.violation_count == 0;
  return r;
}

}  // namespace stratclass
