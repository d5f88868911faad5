#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <string>

#include "stratclass/errors.hpp"
#include "stratclass/game.hpp"
#include "stratclass/oracle.hpp"

namespace stratclass {

namespace {

constexpr double kClose = 1.5;
constexpr double kFar = 2.5;

std::uint64_t pairs(std::size_t m) { return static_cast<std::uint64_t>(m) * (m - 1) / 2; }

void check_reduction_args(std::size_t m, std::uint64_t K) {
  if (m < 2) throw InvalidArgument("reduction needs at least two clauses");
  if (K == 0 || K % m != 0) {
    throw InvalidArgument("reduction: K must be a positive multiple of the clause count");
  }
}

struct Layout {
  std::vector<std::vector<std::size_t>> L;  // L[i][k]
  std::vector<std::vector<std::size_t>> P;  // P[i][j], i < j
  /// Q rows of each clause pair, with the literal slots they join.
  struct QRow {
    std::size_t row, i, k, j, l;
  };
  std::vector<QRow> Q;
  std::size_t R = 0;
};

}  // namespace

CnfFormula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  CnfFormula cnf;
  bool header = false;
  std::size_t declared_clauses = 0;
  std::vector<int> pending;
  auto finish_clause = [&] {
    if (pending.empty()) throw FormatError("DIMACS: empty clause");
    std::array<int, 3> clause{};
    for (std::size_t s = 0; s < 3; ++s) clause[s] = pending[std::min(s, pending.size() - 1)];
    cnf.clauses.push_back(clause);
    pending.clear();
  };
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "c" || first[0] == 'c' || first == "%") continue;
    if (first == "p") {
      std::string fmt;
      long long vars = -1;
      long long clauses = -1;
      if (!(ls >> fmt >> vars >> clauses) || fmt != "cnf" || vars < 0 || clauses < 0) {
        throw FormatError("DIMACS: malformed problem line: " + line);
      }
      cnf.num_vars = static_cast<std::size_t>(vars);
      declared_clauses = static_cast<std::size_t>(clauses);
      header = true;
      continue;
    }
    if (!header) throw FormatError("DIMACS: clause before the problem line");
    std::istringstream tokens(line);
    std::string tok;
    while (tokens >> tok) {
      int lit = 0;
      try {
        std::size_t used = 0;
        lit = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw FormatError("DIMACS: bad literal '" + tok + "'");
      }
      if (lit == 0) {
        finish_clause();
        continue;
      }
      if (static_cast<std::size_t>(std::abs(lit)) > cnf.num_vars) {
        throw FormatError("DIMACS: literal " + tok + " exceeds the declared variable count");
      }
      pending.push_back(lit);
    }
  }
  if (!header) throw FormatError("DIMACS: missing problem line");
  if (!pending.empty()) finish_clause();
  if (cnf.clauses.size() != declared_clauses) {
    throw FormatError("DIMACS: declared " + std::to_string(declared_clauses) + " clauses, found " +
                      std::to_string(cnf.clauses.size()));
  }
  return cnf;
}

std::string to_dimacs(const CnfFormula& cnf) {
  std::ostringstream out;
  out << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& c : cnf.clauses) out << c[0] << ' ' << c[1] << ' ' << c[2] << " 0\n";
  return out.str();
}

std::uint64_t baseline_payoff(std::size_t m, std::uint64_t K) {
  check_reduction_args(m, K);
  const std::uint64_t M = 2 * pairs(m);
  // 3m (m - 1 - 1/m) = 3 (m^2 - m - 1)
  return K * M + 3 * K * (static_cast<std::uint64_t>(m) * m - m - 1) + 9 * pairs(m);
}

namespace {

Layout layout_of(const CnfFormula& cnf) {
  const std::size_t m = cnf.clauses.size();
  Layout lay;
  std::size_t row = 0;
  lay.L.assign(m, std::vector<std::size_t>(3));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < 3; ++k) lay.L[i][k] = row++;
  }
  lay.P.assign(m, std::vector<std::size_t>(m, kNoIndex));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) lay.P[i][j] = row++;
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t l = 0; l < 3; ++l) {
          if (cnf.clauses[i][k] == -cnf.clauses[j][l]) continue;
          lay.Q.push_back({row++, i, k, j, l});
        }
      }
    }
  }
  lay.R = row;
  return lay;
}

}  // namespace

ReductionInstance sat_to_game(const CnfFormula& cnf, std::uint64_t K) {
  const std::size_t m = cnf.clauses.size();
  check_reduction_args(m, K);
  for (const auto& c : cnf.clauses) {
    for (int lit : c) {
      if (lit == 0 || static_cast<std::size_t>(std::abs(lit)) > cnf.num_vars) {
        throw InvalidArgument("sat_to_game: literal out of range");
      }
    }
  }
  const Layout lay = layout_of(cnf);
  const std::size_t n = lay.R + 1;
  const std::uint64_t M = 2 * pairs(m);
  const double wL = static_cast<double>(K * (static_cast<std::uint64_t>(m) * m - m - 1) / m);

  ReductionInstance inst;
  inst.K = K;
  inst.M = M;
  inst.m = m;
  inst.omitted_q = 9 * pairs(m) - lay.Q.size();
  inst.names.resize(n);

  std::vector<double> weights(n);
  std::vector<Label> labels(n, Label::negative);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < 3; ++k) {
      weights[lay.L[i][k]] = wL;
      inst.names[lay.L[i][k]] = "L[" + std::to_string(i + 1) + "," + std::to_string(k + 1) + "]";
    }
    for (std::size_t j = i + 1; j < m; ++j) {
      weights[lay.P[i][j]] = static_cast<double>(2 * K);
      labels[lay.P[i][j]] = Label::positive;
      inst.names[lay.P[i][j]] = "P[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]";
    }
  }
  for (const auto& q : lay.Q) {
    weights[q.row] = 1.0;
    inst.names[q.row] = "Q[" + std::to_string(q.i + 1) + "," + std::to_string(q.k + 1) + ";" +
                        std::to_string(q.j + 1) + "," + std::to_string(q.l + 1) + "]";
  }
  weights[lay.R] = static_cast<double>(K * M);
  inst.names[lay.R] = "R";

  std::vector<Vector> d(n, Vector(n, kFar));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  auto close = [&](std::size_t a, std::size_t b) { d[a][b] = d[b][a] = kClose; };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) close(lay.P[i][j], lay.R);
  }
  for (const auto& q : lay.Q) {
    close(lay.P[q.i][q.j], q.row);
    close(q.row, lay.L[q.i][q.k]);
    close(q.row, lay.L[q.j][q.l]);
  }

  inst.population = Population::indexed(std::move(weights), std::move(labels));
  inst.metric = CostModel::tabular(std::move(d));
  return inst;
}

ReductionReport verify_reduction(const CnfFormula& cnf, std::uint64_t K, ReductionMode mode,
                                 const ReductionOptions& options) {
  ReductionInstance inst = sat_to_game(cnf, K);
  const Population& pop = inst.population;
  const std::size_t n = pop.size();
  ReductionReport report;
  report.mode = mode;
  report.baseline = baseline_payoff(inst.m, K);
  report.simulated_baseline =
      weighted_correct(TabularLabels{std::vector<Label>(n, Label::negative)}, inst.metric, pop);
  report.satisfiable_bound = static_cast<double>(report.baseline + K) -
                             static_cast<double>(9 * pairs(inst.m));

  if (mode == ReductionMode::full) {
    OptimumReport opt = brute_force_optimum(pop, inst.metric, {options.max_points, options.workers});
    report.optimum = opt.opt_correct;
    report.evaluations = opt.evaluations;
    report.labeling = std::get<TabularLabels>(opt.opt_classifier).labels;
  } else {
    const Layout lay = layout_of(cnf);
    // Choices per clause pair: no Q, or exactly one of that pair's Q rows.
    std::vector<std::vector<std::size_t>> choices;
    for (std::size_t i = 0; i < inst.m; ++i) {
      for (std::size_t j = i + 1; j < inst.m; ++j) {
        std::vector<std::size_t> c{kNoIndex};
        for (const auto& q : lay.Q) {
          if (q.i == i && q.j == j) c.push_back(q.row);
        }
        choices.push_back(std::move(c));
      }
    }
    std::uint64_t configs = 1;
    for (const auto& c : choices) {
      if (configs > options.max_configurations / c.size()) {
        throw BudgetExceeded("verify_reduction: restricted enumeration exceeds the budget");
      }
      configs *= c.size();
    }
    std::vector<std::size_t> digit(choices.size(), 0);
    double best = -1.0;
    std::vector<Label> best_labels;
    for (std::uint64_t cfg = 0; cfg < configs; ++cfg) {
      std::vector<Label> labels(n, Label::negative);
      for (std::size_t p = 0; p < choices.size(); ++p) {
        std::size_t row = choices[p][digit[p]];
        if (row != kNoIndex) labels[row] = Label::positive;
      }
      double correct = weighted_correct(TabularLabels{labels}, inst.metric, pop);
      if (correct > best) {
        best = correct;
        best_labels = labels;
      }
      for (std::size_t p = choices.size(); p-- > 0;) {
        if (++digit[p] < choices[p].size()) break;
        digit[p] = 0;
      }
    }
    report.evaluations = configs;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Label> flipped = best_labels;
      flipped[i] = flipped[i] == Label::positive ? Label::negative : Label::positive;
      ++report.evaluations;
      if (weighted_correct(TabularLabels{flipped}, inst.metric, pop) > best) {
        report.perturbation_ok = false;
      }
    }
    report.optimum = best;
    report.labeling = std::move(best_labels);
  }
  report.reaches_satisfiable_bound = report.optimum >= report.satisfiable_bound;
  report.equals_baseline = report.optimum == static_cast<double>(report.baseline);
  return report;
}

}  // namespace stratclass
