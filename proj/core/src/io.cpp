#include "stratclass/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "stratclass/errors.hpp"

namespace stratclass {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view s, std::string_view what) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw FormatError("expected a number for " + std::string(what) + ", got '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// --- JSON helpers ---------------------------------------------------------------

json extended(double v) {
  if (v == kInfinity) return "inf";
  if (v == -kInfinity) return "-inf";
  return v;
}

double extended_from(const json& j) {
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity") return kInfinity;
    if (s == "-inf" || s == "-infinity") return -kInfinity;
    throw FormatError("expected a number or \"inf\", got \"" + s + "\"");
  }
  if (!j.is_number()) throw FormatError("expected a number, got " + j.dump());
  return j.get<double>();
}

Vector numbers(const json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("missing \"") + key + "\"");
  const json& a = j.at(key);
  if (!a.is_array()) throw FormatError(std::string("\"") + key + "\" must be an array");
  Vector out;
  for (const auto& v : a) {
    if (!v.is_number()) throw FormatError(std::string("\"") + key + "\" must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string type_of(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw FormatError("object needs a string \"type\": " + j.dump());
  }
  return j.at("type").get<std::string>();
}

void check_keys(const json& j, std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw FormatError("unexpected key \"" + key + "\"");
  }
}

json score_to_json(const ScoreFn& f) {
  json j = std::visit(overloaded{
                          [](const ScoreFn::Linear& l) {
                            return json{{"type", "linear"}, {"alpha", l.alpha}};
                          },
                          [](const ScoreFn::Tabular& t) {
                            return json{{"type", "tabular"}, {"values", t.values}};
                          },
                      },
                      f.function());
  if (std::holds_alternative<ScoreFn::Linear>(f.function())) {
    if (const auto* fs = std::get_if<FiniteSet>(&f.range())) j["range"] = fs->values;
  }
  if (f.factor() != 1.0) j["factor"] = f.factor();
  return j;
}

ScoreFn score_from_json(const json& j) {
  const std::string type = type_of(j);
  ScoreFn f;
  if (type == "linear") {
    check_keys(j, {"type", "alpha", "range", "factor"});
    f = j.contains("range") ? ScoreFn::linear_with_range(numbers(j, "alpha"), numbers(j, "range"))
                            : ScoreFn::linear(numbers(j, "alpha"));
  } else if (type == "tabular") {
    check_keys(j, {"type", "values", "factor"});
    f = ScoreFn::tabular(numbers(j, "values"));
  } else {
    throw FormatError("unknown score type \"" + type + "\"");
  }
  if (j.contains("factor")) f = f.scaled(extended_from(j.at("factor")));
  return f;
}

json part_to_json(const SeparableCost& p) {
  return json{{"c1", score_to_json(p.c1)}, {"c2", score_to_json(p.c2)}};
}

SeparableCost part_from_json(const json& j) {
  if (!j.is_object() || !j.contains("c1") || !j.contains("c2")) {
    throw FormatError("separable part needs \"c1\" and \"c2\"");
  }
  return {score_from_json(j.at("c1")), score_from_json(j.at("c2"))};
}

json cost_to_json(const CostModel& c) {
  json j = std::visit(
      overloaded{
          [](const LinearCost& l) { return json{{"type", "linear"}, {"alpha", l.alpha}}; },
          [](const SeparableCost& p) {
            json o = part_to_json(p);
            o["type"] = "separable";
            return o;
          },
          [](const MinSeparableCost& m) {
            json parts = json::array();
            bool ranges_ok = true;
            for (const auto& p : m.parts) {
              parts.push_back(part_to_json(p));
              ranges_ok = ranges_ok && satisfies_range_condition(p);
            }
            json o{{"type", "min_separable"}, {"parts", parts}};
            if (!ranges_ok) o["check_ranges"] = false;
            return o;
          },
          [](const TabularCost& t) { return json{{"type", "tabular"}, {"matrix", t.matrix}}; },
          [](const MixedTrueCost& m) {
            return json{{"type", "mixed"}, {"alpha", m.alpha}, {"epsilon", m.epsilon}};
          },
      },
      c.family);
  if (c.scale != 1.0) j["scale"] = c.scale;
  return j;
}

CostModel cost_from_json(const json& j) {
  const std::string type = type_of(j);
  CostModel c;
  if (type == "linear") {
    check_keys(j, {"type", "alpha", "scale"});
    c = CostModel::linear(numbers(j, "alpha"));
  } else if (type == "separable") {
    check_keys(j, {"type", "c1", "c2", "scale"});
    SeparableCost p = part_from_json(j);
    c = CostModel::separable(std::move(p.c1), std::move(p.c2));
  } else if (type == "min_separable") {
    check_keys(j, {"type", "parts", "scale", "check_ranges"});
    if (!j.contains("parts") || !j.at("parts").is_array()) {
      throw FormatError("min_separable needs a \"parts\" array");
    }
    std::vector<SeparableCost> parts;
    for (const auto& p : j.at("parts")) parts.push_back(part_from_json(p));
    bool check = j.value("check_ranges", true);
    if (check) {
      c = CostModel::min_separable(std::move(parts));
    } else {
      if (parts.empty()) throw FormatError("min_separable needs at least one part");
      c = CostModel{MinSeparableCost{std::move(parts)}, 1.0};
    }
  } else if (type == "tabular") {
    check_keys(j, {"type", "matrix", "scale"});
    if (!j.contains("matrix") || !j.at("matrix").is_array()) {
      throw FormatError("tabular cost needs a \"matrix\" array");
    }
    c = CostModel::tabular(j.at("matrix").get<std::vector<Vector>>());
  } else if (type == "mixed") {
    check_keys(j, {"type", "alpha", "epsilon", "scale"});
    if (!j.contains("epsilon")) throw FormatError("mixed cost needs \"epsilon\"");
    c = CostModel::mixed(numbers(j, "alpha"), j.at("epsilon").get<double>());
  } else {
    throw FormatError("unknown cost type \"" + type + "\"");
  }
  if (j.contains("scale")) {
    c.scale = extended_from(j.at("scale"));
    if (!(c.scale > 0.0) || !std::isfinite(c.scale)) throw FormatError("cost scale must be positive");
  }
  return c;
}

json threshold_to_json(const ThresholdOnScore& t) {
  return json{{"score", score_to_json(t.score)}, {"threshold", extended(t.threshold)}};
}

ThresholdOnScore threshold_from_json(const json& j) {
  if (!j.contains("score") || !j.contains("threshold")) {
    throw FormatError("threshold classifier needs \"score\" and \"threshold\"");
  }
  return {score_from_json(j.at("score")), extended_from(j.at("threshold"))};
}

json classifier_to_json(const Classifier& f) {
  return std::visit(
      overloaded{
          [](const LinearHalfspace& h) {
            return json{{"type", "halfspace"}, {"w", h.w}, {"b", extended(h.b)}};
          },
          [](const ThresholdOnScore& t) {
            json o = threshold_to_json(t);
            o["type"] = "threshold";
            return o;
          },
          [](const ConjunctionOfThresholds& c) {
            json parts = json::array();
            for (const auto& p : c.parts) parts.push_back(threshold_to_json(p));
            return json{{"type", "conjunction"}, {"parts", parts}};
          },
          [](const TabularLabels& t) {
            std::vector<int> labels;
            for (Label l : t.labels) labels.push_back(sign(l));
            return json{{"type", "tabular"}, {"labels", labels}};
          },
      },
      f);
}

Classifier classifier_from_json(const json& j) {
  if (j.is_object() && j.contains("classifier")) return classifier_from_json(j.at("classifier"));
  const std::string type = type_of(j);
  if (type == "halfspace") {
    if (!j.contains("b")) throw FormatError("halfspace needs \"b\"");
    return LinearHalfspace{numbers(j, "w"), extended_from(j.at("b"))};
  }
  if (type == "threshold") return threshold_from_json(j);
  if (type == "conjunction") {
    if (!j.contains("parts") || !j.at("parts").is_array()) {
      throw FormatError("conjunction needs a \"parts\" array");
    }
    ConjunctionOfThresholds c;
    for (const auto& p : j.at("parts")) c.parts.push_back(threshold_from_json(p));
    return c;
  }
  if (type == "tabular") {
    if (!j.contains("labels") || !j.at("labels").is_array()) {
      throw FormatError("tabular classifier needs a \"labels\" array");
    }
    TabularLabels t;
    for (const auto& v : j.at("labels")) t.labels.push_back(label_from_int(v.get<int>()));
    return t;
  }
  throw FormatError("unknown classifier type \"" + type + "\"");
}

template <class F>
auto with_json(std::string_view text, F f) {
  try {
    return f(json::parse(text));
  } catch (const json::exception& e) {
    throw FormatError(std::string("JSON: ") + e.what());
  } catch (const FormatError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw FormatError(e.what());
  }
}

std::vector<double> number_list(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_number()) return {v.get<double>()};
  return numbers(j, key);
}

}  // namespace

// --- Files ----------------------------------------------------------------------

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
  if (!out) throw FormatError("failed writing " + path.string());
}

std::string format_number(double v) {
  if (v == kInfinity) return "inf";
  if (v == -kInfinity) return "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error("format_number failed");
  return std::string(buf, ptr);
}

// --- Population CSV ---------------------------------------------------------------

Population parse_population_csv(std::string_view text) {
  std::vector<Vector> points;
  std::vector<double> weights;
  std::vector<Label> labels;
  std::size_t columns = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    std::string_view line = trim(text.substr(pos, end == std::string_view::npos ? end : end - pos));
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (line.empty()) continue;
    auto cells = split_commas(line);
    if (columns == 0) {
      if (cells.size() < 3) throw FormatError("population CSV header needs weight,label and a feature");
      columns = cells.size();
      continue;
    }
    const std::string where = "line " + std::to_string(line_no);
    if (cells.size() != columns) {
      throw FormatError(where + ": expected " + std::to_string(columns) + " columns, got " +
                        std::to_string(cells.size()));
    }
    double w = parse_double(cells[0], where + " weight");
    if (!(w > 0.0) || !std::isfinite(w)) throw FormatError(where + ": weight must be positive");
    double l = parse_double(cells[1], where + " label");
    if (l != 1.0 && l != -1.0) throw FormatError(where + ": label must be -1 or +1");
    Vector x;
    x.reserve(columns - 2);
    for (std::size_t c = 2; c < columns; ++c) {
      double v = parse_double(cells[c], where + " feature");
      if (!std::isfinite(v)) throw FormatError(where + ": features must be finite");
      x.push_back(v);
    }
    points.push_back(std::move(x));
    weights.push_back(w);
    labels.push_back(l > 0 ? Label::positive : Label::negative);
  }
  if (columns == 0) throw FormatError("population CSV is empty");
  if (points.empty()) throw FormatError("population CSV has no rows");
  return Population(std::move(points), std::move(weights), std::move(labels));
}

std::string format_population_csv(const Population& pop) {
  std::string out = "weight,label";
  for (std::size_t j = 0; j < pop.dim(); ++j) out += ",f" + std::to_string(j + 1);
  out += '\n';
  for (std::size_t i = 0; i < pop.size(); ++i) {
    out += format_number(pop.weight(i));
    out += pop.label(i) == Label::positive ? ",1" : ",-1";
    for (double v : pop.point(i)) out += "," + format_number(v);
    out += '\n';
  }
  return out;
}

Population read_population_csv(const std::filesystem::path& path) {
  return parse_population_csv(read_text_file(path));
}

// --- JSON documents ---------------------------------------------------------------

CostModel parse_cost_json(std::string_view text) {
  return with_json(text, [](const json& j) { return cost_from_json(j); });
}

std::string format_cost_json(const CostModel& c) { return cost_to_json(c).dump(2) + "\n"; }

Classifier parse_classifier_json(std::string_view text) {
  return with_json(text, [](const json& j) { return classifier_from_json(j); });
}

std::string format_classifier_json(const Classifier& f) {
  return classifier_to_json(f).dump(2) + "\n";
}

ExperimentConfig parse_config_json(std::string_view text) {
  return with_json(text, [](const json& j) {
    if (!j.is_object()) throw FormatError("config must be a JSON object");
    check_keys(j, {"epsilon", "epsilons", "sin_theta", "sin_theta_grid", "gaming_grid",
                   "gamma_grid", "fixed_t", "seed", "seeds", "n_train", "n_test", "separation",
                   "schema", "data", "baseline", "workers"});
    ExperimentConfig c;
    if (j.contains("epsilons")) c.epsilons = number_list(j, "epsilons");
    if (j.contains("epsilon")) c.epsilons = number_list(j, "epsilon");
    if (j.contains("sin_theta")) c.sin_theta = j.at("sin_theta").get<double>();
    if (j.contains("sin_theta_grid")) c.sin_theta_grid = number_list(j, "sin_theta_grid");
    if (j.contains("gaming_grid")) c.gaming_grid = number_list(j, "gaming_grid");
    if (j.contains("gamma_grid")) c.gamma_grid = number_list(j, "gamma_grid");
    if (j.contains("fixed_t")) c.fixed_t = j.at("fixed_t").get<double>();
    if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("seed")) c.seeds = {j.at("seed").get<std::uint64_t>()};
    if (j.contains("n_train")) c.n_train = j.at("n_train").get<std::size_t>();
    if (j.contains("n_test")) c.n_test = j.at("n_test").get<std::size_t>();
    if (j.contains("separation")) c.separation = j.at("separation").get<double>();
    if (j.contains("workers")) c.workers = j.at("workers").get<std::size_t>();
    if (j.contains("schema")) {
      const json& s = j.at("schema");
      if (s.is_string()) {
        if (s.get<std::string>() != "default") throw FormatError("unknown schema name");
      } else if (s.is_array()) {
        c.schema.features.clear();
        for (const auto& f : s) {
          check_keys(f, {"name", "coefficient"});
          c.schema.features.push_back({f.at("name").get<std::string>(), f.at("coefficient").get<double>()});
        }
      } else {
        throw FormatError("\"schema\" must be \"default\" or a list of {name, coefficient}");
      }
    }
    if (j.contains("data")) {
      auto d = j.at("data").get<std::string>();
      c.data_path = d == "synthetic" ? std::string() : d;
    }
    if (j.contains("baseline")) {
      const json& b = j.at("baseline");
      check_keys(b, {"reg", "epochs"});
      if (b.contains("reg")) c.baseline.reg = b.at("reg").get<double>();
      if (b.contains("epochs")) c.baseline.epochs = b.at("epochs").get<int>();
    }
    c.validate();
    return c;
  });
}

std::string format_config_json(const ExperimentConfig& c) {
  json schema = json::array();
  for (const auto& f : c.schema.features) {
    schema.push_back({{"name", f.name}, {"coefficient", f.cost_coefficient}});
  }
  json j{{"epsilons", c.epsilons},
         {"sin_theta", c.sin_theta},
         {"sin_theta_grid", c.sin_theta_grid},
         {"gaming_grid", c.gaming_grid},
         {"gamma_grid", c.gamma_grid},
         {"fixed_t", c.fixed_t},
         {"seeds", c.seeds},
         {"n_train", c.n_train},
         {"n_test", c.n_test},
         {"separation", c.separation},
         {"schema", schema},
         {"data", c.data_path.empty() ? std::string("synthetic") : c.data_path},
         {"baseline", {{"reg", c.baseline.reg}, {"epochs", c.baseline.epochs}}},
         {"workers", c.workers}};
  return j.dump(2) + "\n";
}

std::string format_sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "method,t,epsilon,sin_theta,gamma,accuracy,seed\n";
  for (const auto& r : rows) {
    out += r.method + "," + format_number(r.t) + "," + format_number(r.epsilon) + "," +
           format_number(r.sin_theta) + "," + format_number(r.gamma) + "," +
           format_number(r.accuracy) + "," + std::to_string(r.seed) + "\n";
  }
  return out;
}

}  // namespace stratclass
