#include "output.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <json.hpp>

#include "haus/error.hpp"
#include "haus/io.hpp"

namespace haus::cli {

WeightSpec parse_weight(const std::string& text, std::optional<double> p, std::optional<double> alpha) {
  if (!text.empty() && text.front() == '{') return weight_from_json(text);
  const std::filesystem::path path(text);
  if (path.extension() == ".json") {
    const std::string base = path.has_parent_path() ? path.parent_path().string() : ".";
    return weight_from_json(read_text(text), base);
  }
  nlohmann::json j;
  j["family"] = text;
  if (p) j["p"] = *p;
  if (alpha) j["alpha"] = *alpha;
  return weight_from_json(j.dump());
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size() || !std::isfinite(v)) {
      throw InvalidInput("not a comma-separated list of numbers: \"" + text + "\"");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

void write_report_svg(const std::string& path, const ExperimentReport& r, const std::string& title) {
  const bool by_eps = !r.epsilon_grid.empty();
  std::vector<PlotSeries> series;
  bool positive = true;
  for (const auto& [name, values] : r.metrics) {
    if (values.empty() || (by_eps && values.size() != r.epsilon_grid.size())) continue;
    PlotSeries s;
    s.label = name;
    bool finite = true;
    for (std::size_t i = 0; i < values.size(); ++i) {
      finite = finite && std::isfinite(values[i]);
      positive = positive && values[i] > 0.0;
      s.x.push_back(by_eps ? r.epsilon_grid[i] : static_cast<double>(i));
      s.y.push_back(values[i]);
    }
    if (finite) series.push_back(std::move(s));
  }
  PlotOptions options;
  options.title = title;
  options.x_label = by_eps ? "epsilon" : "index";
  options.y_label = "value";
  options.log_x = by_eps;
  options.log_y = positive;
  write_svg_plot(path, series, options);
}

void write_report_files(const std::string& stem, const ExperimentReport& report, const std::string& title) {
  write_text(stem + ".json", report_to_json(report) + "\n");
  write_report_csv(stem + ".csv", report);
  write_report_svg(stem + ".svg", report, title);
}

}  // namespace haus::cli
