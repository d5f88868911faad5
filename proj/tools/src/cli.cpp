#include "stratclass_cli/cli.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stratclass/costs.hpp"
#include "stratclass/errors.hpp"
#include "stratclass/experiments.hpp"
#include "stratclass/game.hpp"
#include "stratclass/io.hpp"
#include "stratclass/learners.hpp"
#include "stratclass/model.hpp"
#include "stratclass/oracle.hpp"

namespace stratclass::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Infinite values are not valid JSON numbers.
json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

bool linear_real_line(const ScoreFn& s) {
  return s.linear_coefficients().has_value() && !s.finite_range();
}

bool cost_has_analytic_solver(const CostModel& c) {
  if (std::holds_alternative<LinearCost>(c.family) ||
      std::holds_alternative<MixedTrueCost>(c.family)) {
    return true;
  }
  if (std::holds_alternative<TabularCost>(c.family)) return false;
  for (const auto& p : separable_parts(c)) {
    if (!linear_real_line(p.c1) || !linear_real_line(p.c2)) return false;
  }
  return true;
}

bool classifier_is_halfspace(const Classifier& f) {
  if (const auto* t = std::get_if<ThresholdOnScore>(&f)) return linear_real_line(t->score);
  return std::holds_alternative<LinearHalfspace>(f);
}

// "auto" searches the whole space when a closed-form solver exists for the
// pair and otherwise lets Contestant move only to the population's rows.
bool use_analytic(const std::string& mode, const Classifier& f, const CostModel& c) {
  if (mode == "analytic") return true;
  if (mode == "population") return false;
  return classifier_is_halfspace(f) && cost_has_analytic_solver(c);
}

CandidateSet candidates_for(bool analytic, const Population& pop) {
  return analytic ? CandidateSet::analytic() : CandidateSet::points(pop);
}

double plain_accuracy(const Classifier& f, const Population& pop) {
  double sum = 0.0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (predict(f, pop.ref(i)) == pop.label(i)) sum += pop.weight(i);
  }
  return sum / pop.total_weight();
}

json classifier_json(const Classifier& f) { return json::parse(format_classifier_json(f)); }

void write_json(const std::string& path, const json& j) {
  if (!path.empty()) write_text_file(path, dump(j));
}

// --- commands -----------------------------------------------------------------------

struct TrainArgs {
  std::string algo;
  std::string cost;
  std::string data;
  std::string out;
  std::string candidates = "auto";
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::uint64_t max_grid = MinSeparableOptions{}.max_grid;
  double reg = BaselineOptions{}.reg;
  int epochs = BaselineOptions{}.epochs;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
  Population data = read_population_csv(a.data);
  json model;
  model["algo"] = a.algo;
  model["seed"] = a.seed;
  Classifier classifier = reject_all();
  double empirical_err = 0.0;

  if (a.algo == "baseline") {
    BaselineModel m = train_baseline_linear(data, {a.reg, a.epochs, a.seed});
    classifier = m.classifier;
    model["reg"] = a.reg;
    model["epochs"] = a.epochs;
    model["single_class"] = m.single_class;
    model["training_accuracy"] = plain_accuracy(classifier, data);
    model["classifier"] = classifier_json(classifier);
    write_json(a.out, model);
    out << "baseline: trained on " << data.size() << " rows, training accuracy "
        << plain_accuracy(classifier, data) << "\n";
    return kOk;
  }

  if (a.cost.empty()) throw InvalidArgument("--cost is required for --algo " + a.algo);
  CostModel cost = parse_cost_json(read_text_file(a.cost));
  if (a.algo == "separable") {
    TrainedThreshold t = train_separable(data, cost);
    classifier = t.classifier;
    empirical_err = t.empirical_err;
    model["threshold"] = number(t.classifier.threshold);
    model["effective_threshold"] = number(t.effective_threshold);
    model["candidate_count"] = t.candidate_thresholds.size();
  } else {
    MinSeparableOptions options;
    options.max_grid = a.max_grid;
    options.workers = a.workers;
    TrainedConjunction t = train_min_separable(data, cost, options);
    classifier = t.classifier;
    empirical_err = t.empirical_err;
    json thresholds = json::array();
    for (double s : t.threshold_vector) thresholds.push_back(number(s));
    model["threshold_vector"] = thresholds;
    model["grid_size"] = t.grid_size;
    model["support_aware"] = t.support_aware;
  }
  bool analytic = use_analytic(a.candidates, classifier, cost);
  double payoff = jury_payoff(classifier, cost, data, candidates_for(analytic, data));
  model["empirical_err"] = empirical_err;
  model["training_payoff"] = payoff;
  model["candidates"] = analytic ? "analytic" : "population";
  model["classifier"] = classifier_json(classifier);
  write_json(a.out, model);

  out << a.algo << ": trained on " << data.size() << " rows, empirical error " << empirical_err
      << ", training payoff " << payoff << "\n";
  if (a.algo == "separable") {
    out << "threshold " << format_number(std::get<ThresholdOnScore>(classifier).threshold) << "\n";
  }
  return kOk;
}

struct EvaluateArgs {
  std::string model;
  std::string cost;
  std::string data;
  std::string out;
  std::string candidates = "auto";
  std::optional<double> gaming;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  Classifier f = parse_classifier_json(read_text_file(a.model));
  CostModel cost = parse_cost_json(read_text_file(a.cost));
  Population data = read_population_csv(a.data);

  double no_gaming = plain_accuracy(f, data);
  json report;
  report["rows"] = data.size();
  report["no_gaming_accuracy"] = no_gaming;
  double accuracy = no_gaming;
  double contestant = 0.0;
  std::string used = "none";
  if (a.gaming && *a.gaming == 0.0) {
    for (std::size_t i = 0; i < data.size(); ++i) {
      contestant += data.weight(i) * sign(predict(f, data.ref(i)));
    }
    contestant /= data.total_weight();
    report["gaming"] = 0.0;
  } else {
    if (a.gaming) {
      cost = scale_for_budget(cost, *a.gaming);
      report["gaming"] = *a.gaming;
    } else {
      report["gaming"] = nullptr;
    }
    bool analytic = use_analytic(a.candidates, f, cost);
    CandidateSet cs = candidates_for(analytic, data);
    accuracy = jury_payoff(f, cost, data, cs);
    contestant = contestant_payoff(f, cost, data, cs);
    used = analytic ? "analytic" : "population";
  }
  report["accuracy"] = accuracy;
  report["contestant_payoff"] = contestant;
  report["candidates"] = used;
  write_json(a.out, report);
  out << "accuracy " << accuracy << " (no gaming " << no_gaming << "), contestant payoff "
      << contestant << " over " << data.size() << " rows\n";
  return kOk;
}

struct SweepArgs {
  std::string kind;
  std::string config;
  std::string out;
  std::optional<std::size_t> workers;
  std::optional<std::uint64_t> seed;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  ExperimentConfig config = parse_config_json(read_text_file(a.config));
  if (a.workers) config.workers = *a.workers;
  if (a.seed) config.seeds = {*a.seed};
  std::vector<SweepRow> rows;
  if (a.kind == "gaming") {
    rows = run_gaming_sweep(config);
  } else if (a.kind == "angle") {
    rows = run_angle_sweep(config);
  } else {
    rows = run_hybrid_sweep(config);
  }
  write_text_file(a.out, format_sweep_csv(rows));
  out << a.kind << " sweep: " << rows.size() << " rows written to " << a.out << "\n";
  return kOk;
}

struct OracleArgs {
  std::string data;
  std::string cost;
  std::string out;
  std::size_t workers = 1;
  std::size_t max_points = BruteForceOptions{}.max_points;
};

int cmd_oracle(const OracleArgs& a, std::ostream& out) {
  Population data = read_population_csv(a.data);
  CostModel cost = parse_cost_json(read_text_file(a.cost));
  OptimumReport r = brute_force_optimum(data, cost, {a.max_points, a.workers});
  json report{{"mode", r.mode},
              {"opt_payoff", r.opt_payoff},
              {"opt_correct", r.opt_correct},
              {"evaluations", r.evaluations},
              {"rows", data.size()},
              {"classifier", classifier_json(r.opt_classifier)}};
  write_json(a.out, report);
  out << "strategic optimum " << r.opt_payoff << " (weighted correct " << r.opt_correct
      << ") over " << r.evaluations << " labelings\n";
  return kOk;
}

struct SatArgs {
  std::string cnf;
  std::uint64_t k = 0;
  bool verify = false;
  std::string mode = "full";
  std::string out;
  std::size_t workers = 1;
  std::size_t max_points = ReductionOptions{}.max_points;
  std::uint64_t max_configurations = ReductionOptions{}.max_configurations;
};

int cmd_sat(const SatArgs& a, std::ostream& out) {
  CnfFormula cnf = parse_dimacs(read_text_file(a.cnf));
  ReductionInstance inst = sat_to_game(cnf, a.k);
  fs::path dir(a.out);
  std::uint64_t b = baseline_payoff(inst.m, inst.K);

  write_text_file(dir / "population.csv", format_population_csv(inst.population));
  write_text_file(dir / "cost.json", format_cost_json(inst.metric));
  std::string names;
  for (const auto& n : inst.names) names += n + "\n";
  write_text_file(dir / "names.txt", names);
  json meta{{"clauses", inst.m},   {"K", inst.K},           {"M", inst.M},
            {"rows", inst.names.size()}, {"omitted_q", inst.omitted_q},
            {"baseline_payoff", b}};
  write_json((dir / "instance.json").string(), meta);
  out << "instance: " << inst.names.size() << " rows, " << inst.m << " clauses, K " << inst.K
      << ", baseline payoff " << b << ", written to " << dir.string() << "\n";

  if (!a.verify) return kOk;
  ReductionMode mode = a.mode == "full" ? ReductionMode::full : ReductionMode::restricted;
  ReductionReport r =
      verify_reduction(cnf, a.k, mode, {a.max_points, a.workers, a.max_configurations});
  json labels = json::array();
  for (Label l : r.labeling) labels.push_back(sign(l));
  json report{{"mode", a.mode},
              {"optimum", r.optimum},
              {"baseline", r.baseline},
              {"simulated_baseline", r.simulated_baseline},
              {"satisfiable_bound", r.satisfiable_bound},
              {"reaches_satisfiable_bound", r.reaches_satisfiable_bound},
              {"equals_baseline", r.equals_baseline},
              {"perturbation_ok", r.perturbation_ok},
              {"evaluations", r.evaluations},
              {"labeling", labels}};
  write_json((dir / "report.json").string(), report);
  out << "optimum " << r.optimum << ", baseline " << r.baseline << " (all-reject on this instance "
      << r.simulated_baseline << "), satisfiable bound " << r.satisfiable_bound << "\n";
  return kOk;
}

struct GenDataArgs {
  std::string schema = "default";
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double separation = 4.0;
  std::string out;
};

int cmd_gen_data(const GenDataArgs& a, std::ostream& out) {
  FeatureSchema schema = FeatureSchema::default_schema();
  Population pop =
      generate_synthetic_population(schema.dim(), a.n, a.seed, a.separation, schema.unit_alpha());
  write_text_file(a.out, format_population_csv(pop));
  out << "generated " << pop.size() << " rows with " << schema.dim() << " features (seed " << a.seed
      << ") to " << a.out << "\n";
  return kOk;
}

struct ValidateArgs {
  std::string cost;
  std::string out;
};

int cmd_validate_cost(const ValidateArgs& a, std::ostream& out) {
  CostModel cost = parse_cost_json(read_text_file(a.cost));
  json report{{"valid", true}, {"family", family_name(cost)}, {"scale", cost.scale}};
  out << "valid " << family_name(cost) << " cost, scale " << cost.scale << "\n";
  if (const auto* t = std::get_if<TabularCost>(&cost.family)) {
    MetricCheckReport m = validate_metric(t->matrix);
    json witnesses = json::array();
    for (const auto& v : m.violations) witnesses.push_back(v);
    report["points"] = t->matrix.size();
    report["metric"] = {{"is_metric", m.is_metric},
                        {"symmetry_ok", m.symmetry_ok},
                        {"diagonal_ok", m.diagonal_ok},
                        {"nonnegative_ok", m.nonnegative_ok},
                        {"violation_count", m.violation_count},
                        {"violations", witnesses}};
    out << (m.is_metric ? "metric" : "not a metric") << ": symmetry "
        << (m.symmetry_ok ? "ok" : "fails") << ", " << m.violation_count
        << " triangle violations\n";
  } else if (!std::holds_alternative<MixedTrueCost>(cost.family)) {
    bool ranges = true;
    auto parts = separable_parts(cost);
    for (const auto& p : parts) ranges = ranges && satisfies_range_condition(p);
    report["parts"] = parts.size();
    report["range_condition"] = ranges;
    out << parts.size() << " separable part(s), range condition "
        << (ranges ? "holds" : "does not hold") << "\n";
  }
  write_json(a.out, report);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Strategic classification toolkit", "stratclass"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train a classifier on a population CSV");
  train_cmd->add_option("--algo", train.algo)
      ->required()
      ->check(CLI::IsMember({"separable", "min-separable", "baseline"}));
  train_cmd->add_option("--cost", train.cost, "Cost JSON (not used by baseline)");
  train_cmd->add_option("--data", train.data)->required();
  train_cmd->add_option("--out", train.out, "Model JSON")->required();
  train_cmd->add_option("--candidates", train.candidates, "Where Contestant may move")
      ->check(CLI::IsMember({"auto", "analytic", "population"}));
  train_cmd->add_option("--seed", train.seed);
  train_cmd->add_option("--workers", train.workers)->check(CLI::PositiveNumber);
  train_cmd->add_option("--max-grid", train.max_grid);
  train_cmd->add_option("--reg", train.reg);
  train_cmd->add_option("--epochs", train.epochs)->check(CLI::PositiveNumber);

  EvaluateArgs evaluate;
  auto* eval_cmd = app.add_subcommand("evaluate", "Accuracy of a model after gaming");
  eval_cmd->add_option("--model", evaluate.model)->required();
  eval_cmd->add_option("--cost", evaluate.cost, "True cost JSON")->required();
  eval_cmd->add_option("--data", evaluate.data)->required();
  eval_cmd->add_option("--gaming", evaluate.gaming, "Gaming budget t (0 = no gaming)")
      ->check(CLI::NonNegativeNumber);
  eval_cmd->add_option("--candidates", evaluate.candidates)
      ->check(CLI::IsMember({"auto", "analytic", "population"}));
  eval_cmd->add_option("--out", evaluate.out, "Report JSON");
  std::uint64_t unused_seed = 0;
  eval_cmd->add_option("--seed", unused_seed);

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run an experiment sweep");
  sweep_cmd->add_option("kind", sweep.kind)
      ->required()
      ->check(CLI::IsMember({"gaming", "angle", "hybrid"}));
  sweep_cmd->add_option("--config", sweep.config)->required();
  sweep_cmd->add_option("--out", sweep.out, "Rows CSV")->required();
  sweep_cmd->add_option("--workers", sweep.workers)->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", sweep.seed, "Replaces the configured seeds");

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive strategic optimum");
  oracle_cmd->add_option("--data", oracle.data)->required();
  oracle_cmd->add_option("--cost", oracle.cost)->required();
  oracle_cmd->add_option("--out", oracle.out, "Report JSON")->required();
  oracle_cmd->add_option("--workers", oracle.workers)->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--max-points", oracle.max_points);
  oracle_cmd->add_option("--seed", unused_seed);

  SatArgs sat;
  auto* sat_cmd = app.add_subcommand("sat", "Build (and optionally verify) a 3SAT reduction");
  sat_cmd->add_option("--cnf", sat.cnf)->required();
  sat_cmd->add_option("--k", sat.k)->required();
  sat_cmd->add_flag("--verify", sat.verify);
  sat_cmd->add_option("--mode", sat.mode)->check(CLI::IsMember({"full", "restricted"}));
  sat_cmd->add_option("--out", sat.out, "Output directory")->required();
  sat_cmd->add_option("--workers", sat.workers)->check(CLI::PositiveNumber);
  sat_cmd->add_option("--max-points", sat.max_points);
  sat_cmd->add_option("--max-configurations", sat.max_configurations);
  sat_cmd->add_option("--seed", unused_seed);

  GenDataArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Synthetic population on the feature schema");
  gen_cmd->add_option("--schema", gen.schema)->check(CLI::IsMember({"default"}));
  gen_cmd->add_option("--n", gen.n)->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--separation", gen.separation)->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--out", gen.out, "Population CSV")->required();

  ValidateArgs validate;
  auto* validate_cmd = app.add_subcommand("validate-cost", "Parse and check a cost JSON");
  validate_cmd->add_option("--cost", validate.cost)->required();
  validate_cmd->add_option("--out", validate.out, "Report JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*train_cmd) return cmd_train(train, out);
    if (*eval_cmd) return cmd_evaluate(evaluate, out);
    if (*sweep_cmd) return cmd_sweep(sweep, out);
    if (*oracle_cmd) return cmd_oracle(oracle, out);
    if (*sat_cmd) return cmd_sat(sat, out);
    if (*gen_cmd) return cmd_gen_data(gen, out);
    return cmd_validate_cost(validate, out);
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
}

}  // namespace stratclass::cli
