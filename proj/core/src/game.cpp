#include "stratclass/game.hpp"

#include "stratclass/errors.hpp"

namespace stratclass {

namespace {

void require_nonempty(const Population& pop) {
  if (pop.empty()) throw InvalidArgument("population is empty");
}

// Halfspace view of an analytic classifier; nullopt means "rejects all".
std::optional<LinearHalfspace> analytic_halfspace(const Classifier& f) {
  if (const auto* t = std::get_if<ThresholdOnScore>(&f); t && t->threshold == kInfinity) {
    return std::nullopt;
  }
  auto h = as_halfspace(f);
  if (!h) {
    throw Unsupported("analytic best response needs a halfspace or a threshold on a linear score");
  }
  return h;
}

BestResponseOutcome stay(PointRef x) { return {Vector(x.coords.begin(), x.coords.end())}; }

}  // namespace

const Population& CandidateSet::population() const {
  if (pop_ == nullptr) throw InvalidArgument("analytic candidate set has no population");
  return *pop_;
}

BestResponseOutcome best_response(PointRef x, const Classifier& f, const CostModel& c,
                                  const CandidateSet& candidates) {
  if (candidates.is_analytic()) {
    auto h = analytic_halfspace(f);
    if (!h || h->b == -kInfinity) return stay(x);
    if (h->w.size() != x.coords.size()) throw DimensionMismatch("best_response: dimension mismatch");
    if (predict(*h, x) == Label::positive) return stay(x);
    AcceptanceCost a = min_cost_to_acceptance(x.coords, *h, c);
    if (!(a.cost < 2.0)) return stay(x);
    return {std::move(a.mover), kNoIndex, a.cost, true};
  }

  const Population& pop = candidates.population();
  if (pop.empty()) throw InvalidArgument("best_response: candidate set is empty");
  if (pop.dim() != x.coords.size()) throw DimensionMismatch("best_response: dimension mismatch");
  if (predict(f, x) == Label::positive) return stay(x);

  std::size_t best = kNoIndex;
  double best_cost = 2.0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    PointRef y = pop.ref(i);
    if (predict(f, y) != Label::positive) continue;
    double cost = eval_cost(c, x, y);
    if (cost < best_cost) {
      best_cost = cost;
      best = i;
    }
  }
  if (best == kNoIndex) return stay(x);
  auto p = pop.point(best);
  return {Vector(p.begin(), p.end()), best, best_cost, true};
}

Label effective_label(const Classifier& f, const CostModel& c, PointRef x,
                      const CandidateSet& candidates) {
  BestResponseOutcome r = best_response(x, f, c, candidates);
  if (!r.moved) return predict(f, x);
  // A move only ever lands on an accepted point; the analytic mover sits on
  // the decision boundary where re-evaluating could round either way.
  return Label::positive;
}

double weighted_correct(const Classifier& f, const CostModel& c, const Population& pop,
                        const CandidateSet& candidates) {
  require_nonempty(pop);
  double sum = 0.0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (effective_label(f, c, pop.ref(i), candidates) == pop.label(i)) sum += pop.weight(i);
  }
  return sum;
}

double weighted_correct(const Classifier& f, const CostModel& c, const Population& pop) {
  return weighted_correct(f, c, pop, CandidateSet::points(pop));
}

double jury_payoff(const Classifier& f, const CostModel& c, const Population& pop,
                   const CandidateSet& candidates) {
  return weighted_correct(f, c, pop, candidates) / pop.total_weight();
}

double jury_payoff(const Classifier& f, const CostModel& c, const Population& pop) {
  return jury_payoff(f, c, pop, CandidateSet::points(pop));
}

double contestant_payoff(const Classifier& f, const CostModel& c, const Population& pop,
                         const CandidateSet& candidates) {
  require_nonempty(pop);
  double sum = 0.0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    BestResponseOutcome r = best_response(pop.ref(i), f, c, candidates);
    double value = r.moved ? 1.0 - r.cost : static_cast<double>(sign(predict(f, pop.ref(i))));
    sum += pop.weight(i) * value;
  }
  return sum / pop.total_weight();
}

double contestant_payoff(const Classifier& f, const CostModel& c, const Population& pop) {
  return contestant_payoff(f, c, pop, CandidateSet::points(pop));
}

}  // namespace stratclass
