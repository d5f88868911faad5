#pragma once

// Jury/Contestant game semantics: best response, effective labels after
// gaming, and both players' payoffs.

#include <cstddef>

#include "stratclass/costs.hpp"
#include "stratclass/model.hpp"

namespace stratclass {

/// Where Contestant may move: the rows of a population (searched one by one)
/// or anywhere in space (closed-form solver; halfspace-like classifiers
/// against linear, mixed or separable-linear costs only).
class CandidateSet {
 public:
  /// Non-owning; `pop` must outlive the candidate set.
  static CandidateSet points(const Population& pop) { return CandidateSet(&pop); }
  static CandidateSet analytic() { return CandidateSet(nullptr); }

  bool is_analytic() const { return pop_ == nullptr; }
  const Population& population() const;

 private:
  explicit CandidateSet(const Population* pop) : pop_(pop) {}
  const Population* pop_;
};

struct BestResponseOutcome {
  Vector target;
  /// Row of the candidate population moved to; kNoIndex when staying put or
  /// for analytic moves.
  std::size_t target_row = kNoIndex;
  double cost = 0.0;
  bool moved = false;
};

/// argmax over candidates y of f(y) - c(x, y). Staying at x costs nothing and
/// wins every tie, so a move happens only from a rejected x to an accepted y
/// with c(x, y) < 2; among such y the cheapest, then the lowest row, wins.
BestResponseOutcome best_response(PointRef x, const Classifier& f, const CostModel& c,
                                  const CandidateSet& candidates);

Label effective_label(const Classifier& f, const CostModel& c, PointRef x,
                      const CandidateSet& candidates);

/// Sum of weights of rows whose label equals the effective label. With
/// integer weights this is an exact count.
double weighted_correct(const Classifier& f, const CostModel& c, const Population& pop,
                        const CandidateSet& candidates);
double weighted_correct(const Classifier& f, const CostModel& c, const Population& pop);

/// Pr[h(x) = f(Δ(x))]. The two-argument forms search the population itself.
double jury_payoff(const Classifier& f, const CostModel& c, const Population& pop,
                   const CandidateSet& candidates);
double jury_payoff(const Classifier& f, const CostModel& c, const Population& pop);

/// E[f(Δ(x)) - c(x, Δ(x))].
double contestant_payoff(const Classifier& f, const CostModel& c, const Population& pop,
                         const CandidateSet& candidates);
double contestant_payoff(const Classifier& f, const CostModel& c, const Population& pop);

}  // namespace stratclass
