#include "stratclass/oracle.hpp"

#include <algorithm>
#include <string>
#include <thread>

#include "stratclass/errors.hpp"
#include "stratclass/game.hpp"

namespace stratclass {

namespace {

struct MaskChoice {
  double correct = -1.0;
  std::uint64_t mask = 0;
};

}  // namespace

OptimumReport brute_force_optimum(const Population& pop, const CostModel& c,
                                  const BruteForceOptions& options) {
  const std::size_t n = pop.size();
  if (n == 0) throw InvalidArgument("brute_force_optimum: empty population");
  if (n > options.max_points || n > 62) {
    throw BudgetExceeded("brute_force_optimum: 2^" + std::to_string(n) +
                         " labelings exceed the budget of 2^" + std::to_string(options.max_points));
  }
  std::size_t max_id = 0;
  for (std::size_t id : pop.ids()) max_id = std::max(max_id, id);
  std::vector<bool> seen(max_id + 1, false);
  for (std::size_t id : pop.ids()) {
    if (seen[id]) throw InvalidArgument("brute_force_optimum: population ids must be distinct");
    seen[id] = true;
  }

  // Row i is bit n-1-i, so increasing masks are lexicographically increasing
  // labelings with row 0 most significant.
  auto bit = [n](std::size_t i) { return std::uint64_t{1} << (n - 1 - i); };
  std::vector<std::uint64_t> reach(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && eval_cost(c, pop.ref(i), pop.ref(j)) < 2.0) reach[i] |= bit(j);
    }
  }

  const std::uint64_t total = std::uint64_t{1} << n;
  auto scan = [&](std::uint64_t begin, std::uint64_t end) {
    MaskChoice best;
    for (std::uint64_t mask = begin; mask < end; ++mask) {
      double correct = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        bool accepted = (mask & bit(i)) != 0 || (reach[i] & mask) != 0;
        if ((accepted ? Label::positive : Label::negative) == pop.label(i)) correct += pop.weight(i);
      }
      if (correct > best.correct) best = {correct, mask};
    }
    return best;
  };

  const std::size_t workers = static_cast<std::size_t>(
      std::clamp<std::uint64_t>(options.workers, 1, total));
  std::vector<MaskChoice> partial(workers);
  if (workers == 1) {
    partial[0] = scan(0, total);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
      std::uint64_t begin = total / workers * w;
      std::uint64_t end = w + 1 == workers ? total : total / workers * (w + 1);
      threads.emplace_back([&, w, begin, end] { partial[w] = scan(begin, end); });
    }
    for (auto& t : threads) t.join();
  }
  // Chunks are in mask order, so a later chunk wins only on a strict gain.
  MaskChoice best = partial[0];
  for (std::size_t w = 1; w < workers; ++w) {
    if (partial[w].correct > best.correct) best = partial[w];
  }

  TabularLabels labels{std::vector<Label>(max_id + 1, Label::negative)};
  for (std::size_t i = 0; i < n; ++i) {
    if (best.mask & bit(i)) labels.labels[pop.id(i)] = Label::positive;
  }
  OptimumReport report;
  report.opt_classifier = labels;
  report.opt_correct = weighted_correct(report.opt_classifier, c, pop);
  report.opt_payoff = report.opt_correct / pop.total_weight();
  report.evaluations = total;
  report.mode = "full";
  if (report.opt_correct != best.correct) {
    throw Error("brute_force_optimum: re-simulated payoff disagrees with the enumeration");
  }
  return report;
}

OptimumReport threshold_optimum(const Population& pop, const CostModel& c) {
  if (pop.empty()) throw InvalidArgument("threshold_optimum: empty population");
  auto parts = separable_parts(c);
  if (parts.size() != 1) throw InvalidArgument("threshold_optimum needs a single separable cost");
  const ScoreFn& c2 = parts.front().c2;

  Vector thresholds;
  for (std::size_t i = 0; i < pop.size(); ++i) thresholds.push_back(c2(pop.ref(i)));
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  thresholds.push_back(kInfinity);

  OptimumReport report;
  report.opt_correct = -1.0;
  report.mode = "threshold";
  // Scanning downward keeps the larger threshold on ties.
  for (auto it = thresholds.rbegin(); it != thresholds.rend(); ++it) {
    Classifier f = ThresholdOnScore{c2, *it};
    double correct = weighted_correct(f, c, pop);
    ++report.evaluations;
    if (correct > report.opt_correct) {
      report.opt_correct = correct;
      report.opt_classifier = f;
    }
  }
  report.opt_payoff = report.opt_correct / pop.total_weight();
  return report;
}

}  // namespace stratclass
