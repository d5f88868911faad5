#include "stratclass/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "stratclass/errors.hpp"

namespace stratclass {

namespace {

// A threshold s on b2 is within reach of a point whose b1 score is t. Written
// as s <= t + 2 so it agrees bit for bit with the candidate max_in(t, t + 2);
// the difference form rounds the other way for some t.
bool reaches(double s, double t) { return s <= t + 2.0; }

void require_samples(const Population& samples) {
  if (samples.empty()) throw InvalidArgument("training sample is empty");
}

bool all_tabular(std::span<const SeparableCost> parts) {
  auto tab = [](const ScoreFn& f) { return std::holds_alternative<ScoreFn::Tabular>(f.function()); };
  return std::all_of(parts.begin(), parts.end(),
                     [&](const SeparableCost& p) { return tab(p.c1) && tab(p.c2); });
}

// Precomputed scores: t[j][b] = b1_b(x_j), v[y][b] = b2_b(y).
struct ScoreTable {
  std::size_t k = 0;
  std::vector<Vector> t;
  std::vector<Vector> v;
};

ScoreTable tabulate(const Population& samples, std::span<const SeparableCost> parts,
                    std::span<const PointRef> support) {
  ScoreTable s;
  s.k = parts.size();
  s.t.assign(samples.size(), Vector(s.k));
  for (std::size_t j = 0; j < samples.size(); ++j) {
    for (std::size_t b = 0; b < s.k; ++b) s.t[j][b] = parts[b].c1(samples.ref(j));
  }
  s.v.assign(support.size(), Vector(s.k));
  for (std::size_t y = 0; y < support.size(); ++y) {
    for (std::size_t b = 0; b < s.k; ++b) s.v[y][b] = parts[b].c2(support[y]);
  }
  return s;
}

// Replaces each threshold by the smallest b2 value the conjunction actually
// accepts on the support.
void tighten(const ScoreTable& s, std::span<const double> thresholds, Vector& sigma) {
  sigma.assign(s.k, kInfinity);
  for (const auto& row : s.v) {
    bool accepted = true;
    for (std::size_t b = 0; b < s.k && accepted; ++b) accepted = row[b] >= thresholds[b];
    if (!accepted) continue;
    for (std::size_t b = 0; b < s.k; ++b) sigma[b] = std::min(sigma[b], row[b]);
  }
}

double misclassified_weight(const ScoreTable& s, const Population& samples,
                            std::span<const double> sigma) {
  double err = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    bool accepted = false;
    for (std::size_t b = 0; b < s.k && !accepted; ++b) accepted = reaches(sigma[b], s.t[j][b]);
    Label effective = accepted ? Label::positive : Label::negative;
    if (effective != samples.label(j)) err += samples.weight(j);
  }
  return err;
}

void check_thresholds(std::span<const double> thresholds, std::size_t k) {
  if (thresholds.size() != k) {
    throw DimensionMismatch("threshold vector has " + std::to_string(thresholds.size()) +
                            " entries for " + std::to_string(k) + " parts");
  }
}

std::vector<PointRef> index_support(std::span<const SeparableCost> parts) {
  std::size_t n = std::get<ScoreFn::Tabular>(parts.front().c2.function()).values.size();
  std::vector<PointRef> refs(n);
  for (std::size_t i = 0; i < n; ++i) refs[i] = {{}, i};
  return refs;
}

struct GridChoice {
  double err = kInfinity;
  Vector s;
};

// Lower error wins; ties go to the lexicographically larger vector.
bool better(double err, const Vector& s, const GridChoice& incumbent) {
  if (err != incumbent.err) return err < incumbent.err;
  return std::lexicographical_compare(incumbent.s.begin(), incumbent.s.end(), s.begin(), s.end());
}

}  // namespace

// --- Single separable cost ---------------------------------------------------

TrainedThreshold train_separable(const Population& samples, const CostModel& c) {
  require_samples(samples);
  auto parts = separable_parts(c);
  if (parts.size() != 1) {
    throw InvalidArgument("train_separable needs a single separable cost; use train_min_separable");
  }
  const SeparableCost& part = parts.front();
  if (!satisfies_range_condition(part)) {
    throw InvalidArgument("train_separable: range(c1) is not contained in range(c2)");
  }
  const std::size_t m = samples.size();

  Vector t(m);
  TrainedThreshold out;
  out.candidate_thresholds.reserve(m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    t[i] = part.c1(samples.ref(i));
    out.candidate_thresholds.push_back(part.c2.max_in(t[i], t[i] + 2.0).value_or(kInfinity));
  }
  out.candidate_thresholds.push_back(kInfinity);

  // Points reached by s form a suffix of the t-sorted order, so each
  // candidate's error is a prefix sum of positives plus a suffix sum of
  // negatives.
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t[a] < t[b]; });
  Vector sorted_t(m);
  Vector pos_prefix(m + 1, 0.0);
  Vector neg_suffix(m + 1, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    std::size_t i = order[r];
    sorted_t[r] = t[i];
    pos_prefix[r + 1] = pos_prefix[r] + (samples.label(i) == Label::positive ? samples.weight(i) : 0.0);
  }
  for (std::size_t r = m; r-- > 0;) {
    std::size_t i = order[r];
    neg_suffix[r] = neg_suffix[r + 1] + (samples.label(i) == Label::negative ? samples.weight(i) : 0.0);
  }

  double best_err = kInfinity;
  double best_s = -kInfinity;
  for (double s : out.candidate_thresholds) {
    auto cut = std::partition_point(sorted_t.begin(), sorted_t.end(),
                                    [&](double ti) { return !reaches(s, ti); });
    std::size_t r = static_cast<std::size_t>(cut - sorted_t.begin());
    double err = pos_prefix[r] + neg_suffix[r];
    if (err < best_err || (err == best_err && s > best_s)) {
      best_err = err;
      best_s = s;
    }
  }

  out.classifier = ThresholdOnScore{part.c2, best_s};
  out.effective_threshold = best_s - 2.0;
  const double thresholds[] = {best_s};
  out.empirical_err = empirical_effective_err(thresholds, samples, parts);
  return out;
}

// --- Minimum of separable costs ----------------------------------------------

double empirical_effective_err(std::span<const double> thresholds, const Population& samples,
                               std::span<const SeparableCost> parts) {
  require_samples(samples);
  check_thresholds(thresholds, parts.size());
  ScoreTable s = tabulate(samples, parts, {});
  return misclassified_weight(s, samples, thresholds) / samples.total_weight();
}

double tightened_effective_err(std::span<const double> thresholds, const Population& samples,
                               std::span<const SeparableCost> parts,
                               std::span<const PointRef> support) {
  require_samples(samples);
  check_thresholds(thresholds, parts.size());
  ScoreTable s = tabulate(samples, parts, support);
  Vector sigma;
  tighten(s, thresholds, sigma);
  return misclassified_weight(s, samples, sigma) / samples.total_weight();
}

TrainedConjunction train_min_separable(const Population& samples, const CostModel& c,
                                       const MinSeparableOptions& options) {
  require_samples(samples);
  auto parts = separable_parts(c);
  const std::size_t k = parts.size();
  const std::size_t m = samples.size();

  std::uint64_t grid = 1;
  for (std::size_t b = 0; b < k; ++b) {
    if (grid > options.max_grid / (m + 1)) {
      throw BudgetExceeded("train_min_separable: grid (m+1)^k exceeds " +
                           std::to_string(options.max_grid) + " vectors");
    }
    grid *= m + 1;
  }

  std::vector<PointRef> support;
  bool support_aware = false;
  if (options.support) {
    for (std::size_t i = 0; i < options.support->size(); ++i) support.push_back(options.support->ref(i));
    support_aware = true;
  } else if (all_tabular(parts)) {
    support = index_support(parts);
    support_aware = true;
  }
  ScoreTable table = tabulate(samples, parts, support);

  // Per-part candidates, and for each candidate the lowest support value that
  // reaches exactly the same samples (the representative the raw grid can
  // miss once thresholds interact through the joint support).
  std::vector<Vector> cand(k, Vector(m + 1, kInfinity));
  std::vector<Vector> canon(k, Vector(m + 1, kInfinity));
  for (std::size_t b = 0; b < k; ++b) {
    Vector ts(m);
    for (std::size_t j = 0; j < m; ++j) {
      ts[j] = table.t[j][b];
      cand[b][j] = parts[b].c2.max_in(ts[j], ts[j] + 2.0).value_or(kInfinity);
    }
    if (!support_aware) continue;
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    Vector vals(support.size());
    for (std::size_t y = 0; y < support.size(); ++y) vals[y] = table.v[y][b];
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());

    for (std::size_t i = 0; i <= m; ++i) {
      const double s = cand[b][i];
      double lowest = s;
      if (s == kInfinity) {
        // Lowest value that no sample reaches.
        for (double v : vals) {
          if (!reaches(v, ts.back())) {
            lowest = v;
            break;
          }
        }
      } else {
        auto tb = std::find_if(ts.begin(), ts.end(), [&](double t) { return reaches(s, t); });
        if (tb != ts.end()) {
          const double p = tb == ts.begin() ? -kInfinity : *std::prev(tb);
          for (double v : vals) {
            if (!reaches(v, p) && reaches(v, *tb)) {
              lowest = v;
              break;
            }
          }
        }
      }
      canon[b][i] = lowest;
    }
  }

  auto scan = [&](std::uint64_t begin, std::uint64_t end) {
    GridChoice best;
    Vector raw(k);
    Vector low(k);
    Vector sigma;
    for (std::uint64_t g = begin; g < end; ++g) {
      std::uint64_t rest = g;
      for (std::size_t b = k; b-- > 0;) {
        std::size_t digit = static_cast<std::size_t>(rest % (m + 1));
        rest /= m + 1;
        raw[b] = cand[b][digit];
        low[b] = canon[b][digit];
      }
      if (support_aware) {
        for (const Vector* s : {&raw, &low}) {
          tighten(table, *s, sigma);
          double err = misclassified_weight(table, samples, sigma);
          if (better(err, *s, best)) best = {err, *s};
        }
      } else {
        double err = misclassified_weight(table, samples, raw);
        if (better(err, raw, best)) best = {err, raw};
      }
    }
    return best;
  };

  const std::size_t workers =
      static_cast<std::size_t>(std::clamp<std::uint64_t>(options.workers, 1, grid));
  std::vector<GridChoice> partial(workers);
  if (workers == 1) {
    partial[0] = scan(0, grid);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
      std::uint64_t begin = grid * w / workers;
      std::uint64_t end = grid * (w + 1) / workers;
      threads.emplace_back([&, w, begin, end] { partial[w] = scan(begin, end); });
    }
    for (auto& th : threads) th.join();
  }
  GridChoice best = partial[0];
  for (std::size_t w = 1; w < workers; ++w) {
    if (better(partial[w].err, partial[w].s, best)) best = partial[w];
  }

  TrainedConjunction out;
  out.grid_size = grid;
  out.support_aware = support_aware;
  out.threshold_vector = best.s;
  for (std::size_t b = 0; b < k; ++b) out.classifier.parts.push_back({parts[b].c2, best.s[b]});
  out.empirical_err = support_aware
                          ? tightened_effective_err(best.s, samples, parts, support)
                          : empirical_effective_err(best.s, samples, parts);
  return out;
}

// --- Sample size ----------------------------------------------------------------

double sample_bound_lhs(std::size_t d, double delta, std::size_t k, std::uint64_t m) {
  if (m == 0) throw InvalidArgument("sample_bound_lhs: m must be positive");
  const double md = static_cast<double>(m);
  double rademacher = 0.0;
  if (d > 0) {
    const double dd = static_cast<double>(d);
    rademacher = std::sqrt(2.0 * dd * std::log(std::exp(1.0) * md / dd) / md);
  }
  return rademacher + 2.0 * std::sqrt(static_cast<double>(k) * std::log(md + 1.0) / md) +
         std::sqrt(std::log(2.0 / delta) / (8.0 * md));
}

SampleBound sample_bound(std::size_t d, double epsilon, double delta, std::size_t k) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgument("sample_bound: epsilon must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("sample_bound: delta must lie in (0, 1)");
  if (k == 0) throw InvalidArgument("sample_bound: k must be positive");
  const double target = epsilon / 8.0;
  auto ok = [&](std::uint64_t m) { return sample_bound_lhs(d, delta, k, m) <= target; };

  std::uint64_t lo = std::max<std::uint64_t>(1, d);
  std::uint64_t hi = lo;
  while (!ok(hi)) {
    if (hi > (std::uint64_t{1} << 60)) throw BudgetExceeded("sample_bound: no m below 2^61");
    lo = hi + 1;
    hi *= 2;
  }
  // ok(hi) holds and every m < lo checked so far failed.
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (ok(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return SampleBound{d, epsilon, delta, k, hi};
}

// --- Hybrid -------------------------------------------------------------------

Vector hybrid_direction(std::span<const double> alpha_prime, std::span<const double> beta,
                        double gamma) {
  if (alpha_prime.size() != beta.size()) throw DimensionMismatch("hybrid_direction: dimension mismatch");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("hybrid_direction: gamma must lie in [0, 1]");
  Vector out(beta.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (1.0 - gamma) * alpha_prime[i] + gamma * beta[i];
  }
  return out;
}

}  // namespace stratclass
