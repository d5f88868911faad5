#pragma once

// Ground truth: exhaustive strategic optimum, the exact threshold optimum for
// separable costs, and the 3SAT-to-game reduction with its payoff checks.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "stratclass/costs.hpp"
#include "stratclass/model.hpp"

namespace stratclass {

struct OptimumReport {
  double opt_payoff = 0.0;
  /// Weighted count of correctly classified rows (exact for integer weights).
  double opt_correct = 0.0;
  Classifier opt_classifier = reject_all();
  std::uint64_t evaluations = 0;
  std::string mode = "full";
};

struct BruteForceOptions {
  std::size_t max_points = 22;
  std::size_t workers = 1;
};

/// Enumerates every labeling of the population's rows, lexicographically
/// with row 0 most significant and -1 before +1, and keeps the first one
/// with the largest payoff. The winner is re-simulated through the game
/// before reporting. Row ids must be distinct; the labeling is indexed by id.
OptimumReport brute_force_optimum(const Population& pop, const CostModel& c,
                                  const BruteForceOptions& options = {});

/// Best threshold classifier c2 >= s for a single separable cost, over every
/// s in c2(population) and +inf, scored by game simulation on the
/// population. Ties go to the larger threshold.
OptimumReport threshold_optimum(const Population& pop, const CostModel& c);

struct CnfFormula {
  std::size_t num_vars = 0;
  /// Signed 1-based variable indices.
  std::vector<std::array<int, 3>> clauses;
};

/// DIMACS CNF. Clauses are padded to three slots by repeating their last
/// literal and truncated beyond three.
CnfFormula parse_dimacs(std::string_view text);
std::string to_dimacs(const CnfFormula& cnf);

struct ReductionInstance {
  Population population;
  CostModel metric;
  /// "L[i,k]", "P[i,j]", "Q[i,k;j,l]" or "R", 1-based, per row.
  std::vector<std::string> names;
  std::uint64_t K = 0;
  std::uint64_t M = 0;
  std::size_t m = 0;
  /// Literal pairs across clauses that contradict and so have no Q point.
  std::size_t omitted_q = 0;
};

/// Weighted population with a two-valued metric (1.5 for close pairs, 2.5
/// otherwise). Requires m >= 2 clauses and K divisible by m.
ReductionInstance sat_to_game(const CnfFormula& cnf, std::uint64_t K);

/// K (M + 3m(m - 1 - 1/m)) + 9 C(m, 2) with M = 2 C(m, 2).
std::uint64_t baseline_payoff(std::size_t m, std::uint64_t K);

enum class ReductionMode { full, restricted };

struct ReductionReport {
  ReductionMode mode = ReductionMode::full;
  double optimum = 0.0;
  std::uint64_t baseline = 0;
  /// Weighted-correct count of the all-reject labeling on this instance.
  double simulated_baseline = 0.0;
  /// b + K - 9 C(m, 2)
  double satisfiable_bound = 0.0;
  bool reaches_satisfiable_bound = false;
  bool equals_baseline = false;
  /// Restricted mode: no single-row flip of the best labeling improves it.
  bool perturbation_ok = true;
  std::uint64_t evaluations = 0;
  std::vector<Label> labeling;
};

struct ReductionOptions {
  std::size_t max_points = 22;
  std::size_t workers = 1;
  std::uint64_t max_configurations = 10'000'000;
};

/// Full mode enumerates every labeling. Restricted mode rejects every L, P
/// and R row, accepts at most one Q row per clause pair, and then checks the
/// winner against every single-row flip.
ReductionReport verify_reduction(const CnfFormula& cnf, std::uint64_t K, ReductionMode mode,
                                 const ReductionOptions& options = {});

}  // namespace stratclass
