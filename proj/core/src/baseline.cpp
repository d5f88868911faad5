#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "stratclass/errors.hpp"
#include "stratclass/learners.hpp"

namespace stratclass {

BaselineModel train_baseline_linear(const Population& samples, const BaselineOptions& options) {
  if (samples.empty()) throw InvalidArgument("train_baseline_linear: empty sample");
  if (!(options.reg > 0.0) || !std::isfinite(options.reg)) {
    throw InvalidArgument("train_baseline_linear: reg must be positive");
  }
  if (options.epochs < 1) throw InvalidArgument("train_baseline_linear: epochs must be positive");

  const std::size_t m = samples.size();
  const std::size_t d = samples.dim();
  BaselineModel out;
  out.options = options;

  double pos = 0.0;
  double neg = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    (samples.label(i) == Label::positive ? pos : neg) += samples.weight(i);
  }
  if (pos == 0.0 || neg == 0.0) {
    out.single_class = true;
    out.classifier = LinearHalfspace{Vector(d, 0.0), pos > 0.0 ? 1.0 : -1.0};
    return out;
  }

  // Weights enter as multiplicities relative to the mean weight.
  const double mean_weight = samples.total_weight() / static_cast<double>(m);
  Vector w(d, 0.0);
  double b = 0.0;
  Vector w_sum(d, 0.0);
  double b_sum = 0.0;
  std::uint64_t step = 0;

  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) {
      ++step;
      const double eta = 1.0 / std::sqrt(static_cast<double>(step));
      const auto x = samples.point(i);
      const double y = sign(samples.label(i));
      const double scale = samples.weight(i) / mean_weight;
      const bool violated = y * (dot(w, x) + b) < 1.0;
      for (std::size_t j = 0; j < d; ++j) {
        double g = options.reg * w[j] - (violated ? scale * y * x[j] : 0.0);
        w[j] -= eta * g;
      }
      if (violated) b += eta * scale * y;
      for (std::size_t j = 0; j < d; ++j) w_sum[j] += w[j];
      b_sum += b;
    }
  }
  const double n = static_cast<double>(step);
  for (double& v : w_sum) v /= n;
  out.classifier = LinearHalfspace{std::move(w_sum), b_sum / n};
  return out;
}

}  // namespace stratclass
