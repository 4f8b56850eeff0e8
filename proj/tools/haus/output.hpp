#pragma once

#include <optional>
#include <string>
#include <vector>

#include "haus/verify.hpp"
#include "haus/weights.hpp"

namespace haus::cli {

/// A JSON object, a path to a .json file, or a bare family name completed by p / alpha.
WeightSpec parse_weight(const std::string& text, std::optional<double> p, std::optional<double> alpha);

/// Comma-separated numbers; InvalidInput on anything else.
std::vector<double> parse_list(const std::string& text);

/// Per-epsilon metrics against epsilon (log-log when every value is positive), or against
/// the row index for reports without an epsilon grid.
void write_report_svg(const std::string& path, const ExperimentReport& report, const std::string& title);

/// Writes <stem>.json, <stem>.csv and <stem>.svg.
void write_report_files(const std::string& stem, const ExperimentReport& report, const std::string& title);

}  // namespace haus::cli
