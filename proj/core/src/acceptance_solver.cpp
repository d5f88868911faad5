// Cheapest move into a halfspace <w, y> + b >= 0.
//
// Mixed cost with displacement d = y - x and r = -(<w, x> + b) > 0:
//   minimize (1 - eps) <alpha, d>_+ + eps ||d||^2  subject to <w, d> >= r.
// The problem is convex, d = 0 is infeasible, so the boundary is active and
// the optimum is one of three KKT points:
//   A  hinge inactive:  d = r w / ||w||^2
//   B  hinge active:    d = (mu w - (1 - eps) alpha) / (2 eps)
//   C  at the kink:     <alpha, d> = 0, <w, d> = r, d in span{w, alpha}
// All three are feasible, so the one with the smallest objective is optimal.

#include <algorithm>
#include <cmath>

#include "stratclass/costs.hpp"
#include "stratclass/errors.hpp"

namespace stratclass {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kParallelTol = 1e-12;

double mixed_objective(std::span<const double> alpha, double eps, std::span<const double> d) {
  return (1.0 - eps) * std::max(0.0, dot(alpha, d)) + eps * squared_norm(d);
}

Vector axpy(double a, std::span<const double> x, std::span<const double> y) {
  Vector out(y.begin(), y.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * x[i];
  return out;
}

Vector add(std::span<const double> x, std::span<const double> d) { return axpy(1.0, d, x); }

// Component of v orthogonal to w, and the coefficient of w.
std::pair<Vector, double> split(std::span<const double> v, std::span<const double> w) {
  double lambda = dot(v, w) / squared_norm(w);
  return {axpy(-lambda, w, v), lambda};
}

bool negligible(std::span<const double> perp, std::span<const double> v) {
  return squared_norm(perp) <= kParallelTol * squared_norm(v);
}

// Displacement reaching the boundary on which the linear form <a, .> is at
// most `bound`; used when the linear cost's infimum is zero and not attained
// in closed form. Returns nullopt when a = lambda w with lambda > 0.
std::optional<Vector> zero_cost_witness(std::span<const double> a, std::span<const double> w,
                                        double r, double bound) {
  Vector base = axpy(r / squared_norm(w), w, Vector(w.size(), 0.0));
  double at_base = dot(a, base);
  if (at_base <= bound) return base;
  auto [perp, lambda] = split(a, w);
  if (!negligible(perp, a)) {
    double tau = (at_base - bound) / squared_norm(perp);
    return axpy(-tau, perp, base);
  }
  if (lambda < 0.0) {
    // a points against w: moving further along w lowers <a, .>.
    double extra = (at_base - bound) / (-lambda * squared_norm(w));
    return axpy(extra, w, base);
  }
  return std::nullopt;
}

AcceptanceCost solve_mixed(std::span<const double> x, const LinearHalfspace& f, double r,
                           std::span<const double> alpha, double eps, double scale) {
  const auto& w = f.w;
  const double ww = squared_norm(w);
  Vector d_a = axpy(r / ww, w, Vector(w.size(), 0.0));

  if (eps == 0.0) {
    auto [perp, lambda] = split(alpha, w);
    if (lambda > 0.0 && negligible(perp, alpha)) {
      return {scale * lambda * r, add(x, d_a)};
    }
    auto d = zero_cost_witness(alpha, w, r, 0.0);
    return {0.0, add(x, *d)};
  }

  std::vector<Vector> candidates;
  candidates.push_back(d_a);

  const double aw = dot(alpha, w);
  const double mu = (2.0 * eps * r + (1.0 - eps) * aw) / ww;
  Vector d_b(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    d_b[i] = (mu * w[i] - (1.0 - eps) * alpha[i]) / (2.0 * eps);
  }
  candidates.push_back(std::move(d_b));

  const double aa = squared_norm(alpha);
  const double det = ww * aa - aw * aw;
  if (aa > 0.0 && det > kParallelTol * ww * aa) {
    // [ww aw; aw aa] [p; q] = [r; 0]
    double p = r * aa / det;
    double q = -r * aw / det;
    Vector d_c(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) d_c[i] = p * w[i] + q * alpha[i];
    candidates.push_back(std::move(d_c));
  }

  double best = kInfinity;
  const Vector* best_d = nullptr;
  for (const auto& d : candidates) {
    double v = mixed_objective(alpha, eps, d);
    if (std::isfinite(v) && v < best) {
      best = v;
      best_d = &d;
    }
  }
  if (best_d == nullptr) {
    Vector d = detail::projected_gradient_displacement(alpha, eps, w, r);
    return {scale * mixed_objective(alpha, eps, d), add(x, d)};
  }
  return {scale * best, add(x, *best_d)};
}

AcceptanceCost solve_separable(std::span<const double> x, const LinearHalfspace& f, double r,
                               const SeparableCost& part) {
  auto a1 = part.c1.linear_coefficients();
  auto a2 = part.c2.linear_coefficients();
  if (!a1 || !a2) {
    throw Unsupported("min_cost_to_acceptance: separable parts must be linear functionals");
  }
  if (a1->size() != x.size() || a2->size() != x.size()) {
    throw DimensionMismatch("min_cost_to_acceptance: score dimension mismatch");
  }
  const auto& w = f.w;
  const double start = dot(*a1, x);
  auto [perp, lambda] = split(*a2, w);
  if (lambda >= 0.0 && negligible(perp, *a2)) {
    // Over the halfspace <a2, y> >= -lambda b, attained on the boundary.
    Vector y = axpy(r / squared_norm(w), w, x);
    return {std::max(0.0, -lambda * f.b - start), std::move(y)};
  }
  auto d = zero_cost_witness(*a2, w, r, start - dot(*a2, x));
  return {0.0, add(x, *d)};
}

}  // namespace

namespace detail {

Vector projected_gradient_displacement(std::span<const double> alpha, double epsilon,
                                       std::span<const double> w, double r, int iterations) {
  if (!(epsilon > 0.0)) throw InvalidArgument("projected gradient needs epsilon > 0");
  const double ww = squared_norm(w);
  auto project = [&](Vector& d) {
    double gap = r - dot(w, d);
    if (gap > 0.0) {
      for (std::size_t i = 0; i < d.size(); ++i) d[i] += gap * w[i] / ww;
    }
  };
  const double step = 1.0 / (2.0 * epsilon);
  Vector d = axpy(r / ww, w, Vector(w.size(), 0.0));
  Vector best = d;
  double best_value = mixed_objective(alpha, epsilon, d);
  for (int it = 1; it <= iterations; ++it) {
    bool hinge = dot(alpha, d) > 0.0;
    // The hinge subgradient gets a diminishing step; the quadratic part is
    // handled exactly by the 1/L step.
    double h = step / std::sqrt(static_cast<double>(it));
    for (std::size_t i = 0; i < d.size(); ++i) {
      double g = 2.0 * epsilon * d[i] + (hinge ? (1.0 - epsilon) * alpha[i] : 0.0);
      d[i] -= h * g;
    }
    project(d);
    double v = mixed_objective(alpha, epsilon, d);
    if (v < best_value) {
      best_value = v;
      best = d;
    }
  }
  return best;
}

}  // namespace detail

AcceptanceCost min_cost_to_acceptance(std::span<const double> x, const LinearHalfspace& f,
                                      const CostModel& c) {
  if (f.w.size() != x.size()) throw DimensionMismatch("min_cost_to_acceptance: dimension mismatch");
  const double margin = dot(f.w, x) + f.b;
  if (margin >= 0.0) return {0.0, Vector(x.begin(), x.end())};
  if (squared_norm(f.w) == 0.0) throw InvalidArgument("min_cost_to_acceptance: w must be nonzero");
  const double r = -margin;

  return std::visit(
      overloaded{
          [&](const LinearCost& l) {
            if (l.alpha.size() != x.size()) throw DimensionMismatch("linear cost dimension");
            return solve_mixed(x, f, r, l.alpha, 0.0, c.scale);
          },
          [&](const MixedTrueCost& m) {
            if (m.alpha.size() != x.size()) throw DimensionMismatch("mixed cost dimension");
            return solve_mixed(x, f, r, m.alpha, m.epsilon, c.scale);
          },
          [&](const SeparableCost&) {
            return solve_separable(x, f, r, separable_parts(c).front());
          },
          [&](const MinSeparableCost&) {
            AcceptanceCost best{kInfinity, {}};
            for (const auto& part : separable_parts(c)) {
              AcceptanceCost a = solve_separable(x, f, r, part);
              if (a.cost < best.cost) best = std::move(a);
            }
            return best;
          },
          [&](const TabularCost&) -> AcceptanceCost {
            throw Unsupported("min_cost_to_acceptance: tabular costs need a population search");
          },
      },
      c.family);
}

}  // namespace stratclass
