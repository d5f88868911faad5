#pragma once

// File formats: population CSV, cost / classifier / config JSON, sweep CSV
// and plain text helpers. Every parser throws FormatError on bad input.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "stratclass/costs.hpp"
#include "stratclass/experiments.hpp"
#include "stratclass/model.hpp"

namespace stratclass {

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Shortest decimal that reads back to the same double; "inf" / "-inf".
std::string format_number(double v);

/// Header line, then `weight,label,f1,...,fn` per row.
Population parse_population_csv(std::string_view text);
std::string format_population_csv(const Population& pop);
Population read_population_csv(const std::filesystem::path& path);

/// {"type": "linear" | "separable" | "min_separable" | "tabular" | "mixed", ...,
///  "scale": s}
CostModel parse_cost_json(std::string_view text);
std::string format_cost_json(const CostModel& c);

/// {"type": "halfspace" | "threshold" | "conjunction" | "tabular", ...}. A
/// model file (an object with a "classifier" member) is accepted as well.
/// Infinite thresholds are written as the string "inf".
Classifier parse_classifier_json(std::string_view text);
std::string format_classifier_json(const Classifier& f);

ExperimentConfig parse_config_json(std::string_view text);
std::string format_config_json(const ExperimentConfig& config);

/// Header `method,t,epsilon,sin_theta,gamma,accuracy,seed`.
std::string format_sweep_csv(std::span<const SweepRow> rows);

}  // namespace stratclass
