#include "haus/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "haus/error.hpp"

namespace haus {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& cell, std::size_t line) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || cell.empty()) {
    throw InvalidInput("line " + std::to_string(line) + ": cannot parse number '" + cell + "'");
  }
  return v;
}

std::string format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

const std::vector<double>& CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return columns[i];
  }
  throw InvalidInput("CSV has no column '" + name + "'");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  CsvTable table;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (table.header.empty()) {
      table.header = cells;
      table.columns.assign(cells.size(), {});
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw InvalidInput(path + ": line " + std::to_string(number) + " has " + std::to_string(cells.size()) +
                         " fields, expected " + std::to_string(table.header.size()));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) table.columns[i].push_back(parse_number(cells[i], number));
  }
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  if (table.header.empty()) throw InvalidInput(path + ": empty CSV");
  return table;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw InvalidInput("CSV header and column count differ");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != rows) throw InvalidInput("CSV columns differ in length");
  }
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << format(columns[i][r]);
    os << '\n';
  }
  write_text(path, os.str());
}

SampledSignal read_signal_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  if (t.header.size() != 2 || t.header[0] != "x" || t.header[1] != "value") {
    throw InvalidInput(path + ": signal CSV header must be 'x,value'");
  }
  const auto& x = t.columns[0];
  const auto& v = t.columns[1];
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(v[i])) {
      throw InvalidInput(path + ": row " + std::to_string(i + 2) + " holds a non-finite value");
    }
  }
  if (n < 2) throw InvalidInput(path + ": a signal needs at least two rows");
  const double x0 = x.front();
  const double nominal = (x.back() - x0) / static_cast<double>(n - 1);
  if (!(nominal > 0.0)) throw InvalidInput(path + ": x must be strictly increasing");
  for (std::size_t i = 1; i < n; ++i) {
    const double step = x[i] - x[i - 1];
    if (!(step > 0.0)) throw InvalidInput(path + ": x must be strictly increasing");
    if (std::abs(step - nominal) > 1e-9 * nominal + 4.0 * std::numeric_limits<double>::epsilon() *
                                                          std::max(std::abs(x[i]), std::abs(x[i - 1]))) {
      throw InvalidInput(path + ": x is not equispaced at row " + std::to_string(i + 1));
    }
  }
  // Recover the exact spacing that regenerates every abscissa, when one exists nearby.
  const auto reproduces = [&](double dx) {
    for (std::size_t i = 0; i < n; ++i) {
      if (x0 + static_cast<double>(i) * dx != x[i]) return false;
    }
    return true;
  };
  double dx = nominal;
  if (!reproduces(dx)) {
    double up = nominal;
    double down = nominal;
    for (int k = 0; k < 64; ++k) {
      up = std::nextafter(up, std::numeric_limits<double>::infinity());
      down = std::nextafter(down, 0.0);
      if (reproduces(up)) {
        dx = up;
        break;
      }
      if (reproduces(down)) {
        dx = down;
        break;
      }
    }
  }
  return SampledSignal(x0, dx, v);
}

void write_signal_csv(const std::string& path, const SampledSignal& f) {
  std::vector<double> x(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) x[i] = f.x(i);
  write_csv(path, {"x", "value"}, {x, std::vector<double>(f.values().begin(), f.values().end())});
}

void write_spectrum_csv(const std::string& path, const Spectrum& spectrum) {
  std::vector<double> xi(spectrum.size());
  std::vector<double> re(spectrum.size());
  std::vector<double> im(spectrum.size());
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    xi[k] = spectrum.xi(k);
    re[k] = spectrum[k].real();
    im[k] = spectrum[k].imag();
  }
  write_csv(path, {"xi", "re", "im"}, {xi, re, im});
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("error while writing '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string svg_line_plot(const std::vector<PlotSeries>& series, const PlotOptions& options) {
  constexpr double kWidth = 640;
  constexpr double kHeight = 400;
  constexpr double kLeft = 70;
  constexpr double kRight = 20;
  constexpr double kTop = 40;
  constexpr double kBottom = 50;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  const auto tx = [&](double v) { return options.log_x ? std::log10(v) : v; };
  const auto ty = [&](double v) { return options.log_y ? std::log10(v) : v; };
  const auto usable = [&](double x, double y) {
    return std::isfinite(tx(x)) && std::isfinite(ty(y)) && (!options.log_x || x > 0) && (!options.log_y || y > 0);
  };

  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      xmin = std::min(xmin, tx(s.x[i]));
      xmax = std::max(xmax, tx(s.x[i]));
      ymin = std::min(ymin, ty(s.y[i]));
      ymax = std::max(ymax, ty(s.y[i]));
    }
  }
  if (!(xmin <= xmax)) xmin = 0, xmax = 1;
  if (!(ymin <= ymax)) ymin = 0, ymax = 1;
  if (xmax == xmin) xmin -= 0.5, xmax += 0.5;
  if (ymax == ymin) ymin -= 0.5, ymax += 0.5;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto px = [&](double v) { return kLeft + (v - xmin) / (xmax - xmin) * pw; };
  const auto py = [&](double v) { return kTop + (ymax - v) / (ymax - ymin) * ph; };

  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << xml_escape(options.title) << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double vx = xmin + (xmax - xmin) * k / 4.0;
    const double vy = ymin + (ymax - ymin) * k / 4.0;
    const double lx = options.log_x ? std::pow(10.0, vx) : vx;
    const double ly = options.log_y ? std::pow(10.0, vy) : vy;
    os << "<line x1=\"" << px(vx) << "\" y1=\"" << kTop + ph << "\" x2=\"" << px(vx) << "\" y2=\"" << kTop + ph + 5
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << px(vx) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">" << lx
       << "</text>\n";
    os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py(vy) << "\" x2=\"" << kLeft << "\" y2=\"" << py(vy)
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(vy) + 4 << "\" text-anchor=\"end\">" << ly << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">"
     << xml_escape(options.x_label) << "</text>\n";
  os << "<text x=\"16\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << kTop + ph / 2 << ")\">" << xml_escape(options.y_label) << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % std::size(kColors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < std::min(series[s].x.size(), series[s].y.size()); ++i) {
      if (!usable(series[s].x[i], series[s].y[i])) continue;
      os << px(tx(series[s].x[i])) << ',' << py(ty(series[s].y[i])) << ' ';
    }
    os << "\"/>\n";
    const double ly = kTop + 16 + 16 * static_cast<double>(s);
    os << "<line x1=\"" << kLeft + pw - 150 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kLeft + pw - 130 << "\" y2=\""
       << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << kLeft + pw - 125 << "\" y=\"" << ly << "\">" << xml_escape(series[s].label)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_svg_plot(const std::string& path, const std::vector<PlotSeries>& series, const PlotOptions& options) {
  write_text(path, svg_line_plot(series, options));
}

}  // namespace haus
