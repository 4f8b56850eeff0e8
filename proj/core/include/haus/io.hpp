#pragma once

#include <string>
#include <vector>

#include "haus/signal.hpp"

namespace haus {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const noexcept { return columns.empty() ? 0 : columns.front().size(); }
  /// Column by header name; InvalidInput if absent.
  const std::vector<double>& column(const std::string& name) const;
};

/// Numeric CSV with one header line. IoError when the file cannot be read,
/// InvalidInput on ragged rows or unparsable numbers. `inf` and `nan` cells are accepted here;
/// read_signal_csv rejects them.
CsvTable read_csv(const std::string& path);
/// Values written with 17 significant digits so that doubles round-trip exactly.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

/// `x,value` with strictly increasing, equispaced x (spacing tolerance 1e-9 dx).
SampledSignal read_signal_csv(const std::string& path);
void write_signal_csv(const std::string& path, const SampledSignal& f);
/// `xi,re,im`.
void write_spectrum_csv(const std::string& path, const Spectrum& spectrum);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
  bool log_x = false;
  bool log_y = false;
};

/// Minimal SVG line plot: frame, ticks, one polyline per series, legend.
std::string svg_line_plot(const std::vector<PlotSeries>& series, const PlotOptions& options);
void write_svg_plot(const std::string& path, const std::vector<PlotSeries>& series, const PlotOptions& options);

}  // namespace haus
