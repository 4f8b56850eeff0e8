#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <optional>

#include "haus/error.hpp"
#include "haus/hardy.hpp"
#include "haus/hausdorff.hpp"
#include "haus/io.hpp"
#include "haus/parallel.hpp"
#include "haus/verify.hpp"
#include "output.hpp"

namespace haus::cli {

namespace {

const std::vector<std::string> kCommands{"check", "multiplier", "kernel", "apply", "sweep", "examples", "h1norm"};

struct Options {
  std::string weight = "power-tail";
  std::optional<double> p;
  std::optional<double> alpha;
  double eps = 1.0;
  std::string eps_list;
  std::string in;
  std::string out;
  std::string svg;
  std::string json;
  std::string csv;
  std::string out_dir = "haus-examples";
  double xmin = -4.0;
  double xmax = 4.0;
  std::size_t points = 401;
  double smin = -20.0;
  double smax = 20.0;
  bool scaled = false;
  std::string path = "spectral";
  std::string kind;
  double sigma = 1.0;
  double d = 1.0;
  std::string x_grid;
  std::string signal = "atom";
  double dx = 1.0 / 16.0;
  std::size_t n = 8192;
  std::optional<double> scale_min;
  std::optional<double> scale_max;
};

void add_weight_options(CLI::App* sub, Options& o) {
  sub->add_option("--weight", o.weight, "Weight: JSON object, .json file, or family name")->capture_default_str();
  sub->add_option("--p", o.p, "Exponent p for the power families");
  sub->add_option("--alpha", o.alpha, "Exponent alpha for riemann-liouville");
}

WeightSpec weight_of(const Options& o) { return parse_weight(o.weight, o.p, o.alpha); }

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) throw InvalidInput("--points must be positive");
  if (!(lo <= hi)) throw InvalidInput("range must satisfy min <= max");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

void emit_json(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text << "\n";
  } else {
    write_text(path, text + "\n");
  }
}

int cmd_check(const Options& o, std::ostream& out) {
  const WeightSpec w = weight_of(o);
  const ScaleSpec a = ScaleSpec::reciprocal();
  const AdmissibilityReport r = check_admissibility(w, a);
  const std::string text = admissibility_to_json(r, w, a);
  out << text << "\n";
  if (!o.out.empty()) write_text(o.out, text + "\n");
  return r.passed ? kExitOk : kExitFailed;
}

int cmd_multiplier(const Options& o) {
  const OperatorConfig cfg(weight_of(o), ScaleSpec::reciprocal(), 1.0);
  const std::vector<double> xs = linspace(o.xmin, o.xmax, o.points);
  std::vector<double> k(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { k[i] = multiplier_eval(cfg, xs[i]); });
  write_csv(o.out, {"x", "khat"}, {xs, k});
  if (!o.svg.empty()) {
    PlotOptions opt;
    opt.title = "multiplier " + cfg.weight().label();
    opt.y_label = "K^(x)";
    write_svg_plot(o.svg, {{"K^", xs, k}}, opt);
  }
  return kExitOk;
}

int cmd_kernel(const Options& o, std::ostream& err) {
  if (!(o.eps > 0.0)) throw DomainError("epsilon must be positive");
  const OperatorConfig cfg(weight_of(o), ScaleSpec::reciprocal(), o.eps);
  const KernelProfile kernel(cfg);
  const std::vector<double> s = linspace(o.smin, o.smax, o.points);
  std::vector<double> k(s.size());
  std::vector<char> singular(s.size(), 0);
  parallel_for(s.size(), [&](std::size_t i) {
    try {
      k[i] = kernel(s[i], o.scaled);
    } catch (const SingularPoint&) {
      k[i] = std::numeric_limits<double>::quiet_NaN();
      singular[i] = 1;
    }
  });
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (singular[i]) err << "haus: kernel is unbounded at s = " << s[i] << "; written as nan\n";
  }
  write_csv(o.out, {"s", "k"}, {s, k});
  if (!o.svg.empty()) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!singular[i]) {
        xs.push_back(s[i]);
        ys.push_back(k[i]);
      }
    }
    PlotOptions opt;
    opt.title = "kernel " + cfg.weight().label();
    opt.x_label = "s";
    opt.y_label = o.scaled ? "K_eps(s)" : "K(s)";
    write_svg_plot(o.svg, {{"K", xs, ys}}, opt);
  }
  return kExitOk;
}

int cmd_apply(const Options& o, std::ostream& err) {
  if (!(o.eps > 0.0)) throw DomainError("epsilon must be positive");
  const OperatorConfig cfg(weight_of(o), ScaleSpec::reciprocal(), o.eps);
  const SampledSignal f = read_signal_csv(o.in);
  if (o.path == "direct") {
    const std::size_t wanted = std::min<std::size_t>(o.points, f.size());
    if (wanted < 2 || wanted > 32) throw InvalidInput("the direct path evaluates between 2 and 32 points");
    const std::size_t stride = (f.size() - 1) / (wanted - 1);
    std::vector<double> v(wanted);
    parallel_for(wanted, [&](std::size_t k) { v[k] = partial_hausdorff_direct(cfg, f, f.x(k * stride)); });
    write_signal_csv(o.out, SampledSignal(f.x0(), f.dx() * static_cast<double>(stride), std::move(v)));
    return kExitOk;
  }
  const PartialResult r =
      o.path == "convolution" ? partial_hausdorff_convolution(cfg, f) : partial_hausdorff_spectral(cfg, f);
  for (const std::string& w : r.warnings) err << "haus: warning: " << w << "\n";
  write_signal_csv(o.out, r.signal);
  return kExitOk;
}

SampledSignal sweep_signal(const Options& o, const Grid& grid) {
  if (!o.in.empty()) return read_signal_csv(o.in);
  if (o.signal == "atom") return make_atom({0.0, 4.0, AtomShape::SmoothOddBump}, grid);
  if (o.signal == "gaussian") return gaussian_derivative(grid);
  if (o.signal == "bandlimited") return make_bandlimited(4.0, grid);
  throw InvalidInput("unknown --signal \"" + o.signal + "\" (atom, gaussian, bandlimited)");
}

std::vector<double> sweep_eps(const Options& o) {
  if (!o.eps_list.empty()) return parse_list(o.eps_list);
  if (o.kind == "convergence") {
    std::vector<double> e;
    for (int k = 0; k <= 8; ++k) e.push_back(std::exp2(-k));
    return e;
  }
  if (o.kind == "hormander") return HormanderOptions{}.eps_grid;
  return {1.0, 0.1, 0.01, 0.001};
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const WeightSpec w = weight_of(o);
  const ScaleSpec a = ScaleSpec::reciprocal();
  const Grid grid = Grid::centered(o.dx, o.n);
  grid.validate();
  ExperimentReport r;
  if (o.kind == "boundedness") {
    const std::vector<SampledSignal> signals =
        o.in.empty() ? standard_atoms(grid) : std::vector<SampledSignal>{read_signal_csv(o.in)};
    r = boundedness_sweep(w, a, signals, sweep_eps(o));
  } else if (o.kind == "convergence") {
    r = convergence_sweep(w, a, sweep_signal(o, grid), o.sigma, sweep_eps(o));
  } else if (o.kind == "hormander") {
    HormanderOptions opt;
    opt.eps_grid = sweep_eps(o);
    r = hormander_check(w, a, o.x_grid.empty() ? default_hormander_grid() : parse_list(o.x_grid), opt);
  } else {
    r = multiplier_rate_conditions(OperatorConfig(w, a, 1.0), o.sigma, o.d);
  }
  const std::string text = report_to_json(r);
  emit_json(text, o.json, out);
  if (!o.json.empty()) out << r.experiment_id << ": " << (r.passed ? "passed" : "failed") << "\n";
  if (!o.csv.empty()) write_report_csv(o.csv, r);
  if (!o.svg.empty()) write_report_svg(o.svg, r, r.experiment_id + " " + w.label());
  return r.passed ? kExitOk : kExitFailed;
}

int cmd_h1norm(const Options& o, std::ostream& out) {
  const SampledSignal f = read_signal_csv(o.in);
  MaximalConfig cfg = MaximalConfig::for_signal(f);
  if (o.scale_min) cfg.s_min = *o.scale_min;
  if (o.scale_max) cfg.s_max = *o.scale_max;
  const H1Estimate e = h1_norm_estimate(f, cfg);
  nlohmann::ordered_json j;
  j["h1_estimate"] = e.value;
  j["l1_norm"] = lp_norm(f, 1.0);
  j["integral"] = integral(f);
  j["scale_min"] = cfg.s_min;
  j["scale_max"] = cfg.s_max;
  j["scales"] = cfg.scales().size();
  j["warnings"] = e.warnings;
  emit_json(j.dump(2), o.out, out);
  return kExitOk;
}

int cmd_examples(const Options& o, std::ostream& out) {
  return run_examples(o.out_dir, out).passed() ? kExitOk : kExitFailed;
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw InvalidInput("--config needs a file path");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!path) return rest;

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(*path));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("malformed config " + *path + ": " + e.what());
  }
  if (!j.is_object()) throw InvalidInput("config " + *path + " must hold a JSON object");

  if (j.contains("command")) {
    if (!j["command"].is_string()) throw InvalidInput("config field \"command\" must be a string");
    const bool named = std::any_of(rest.begin(), rest.end(), [](const std::string& a) {
      return std::find(kCommands.begin(), kCommands.end(), a) != kCommands.end();
    });
    if (!named) rest.insert(rest.begin(), j["command"].get<std::string>());
  }
  const auto scalar = [](const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  for (const auto& [key, value] : j.items()) {
    if (key == "command" || value.is_null()) continue;
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (value.is_boolean()) {
      if (value.get<bool>()) rest.push_back(flag);
      continue;
    }
    rest.push_back(flag);
    if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) joined += (joined.empty() ? "" : ",") + scalar(item);
      rest.push_back(joined);
    } else {
      rest.push_back(scalar(value));
    }
  }
  return rest;
}

int run(const std::vector<std::string>& raw, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  try {
    args = expand_config(raw);
  } catch (const IoError& e) {
    err << "haus: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "haus: " << e.what() << "\n";
    return kExitConfig;
  }

  CLI::App app{"Partial Hausdorff integrals: multipliers, kernels, operators and experiments", "haus"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kReportVersion));
  std::string config_path;
  app.add_option("--config", config_path, "JSON object of flags; its entries override the command line");
  app.fallthrough();

  Options o;
  CLI::App* check = app.add_subcommand("check", "Admissibility report for a weight");
  add_weight_options(check, o);
  check->add_option("--out", o.out, "Also write the JSON report here");

  CLI::App* mult = app.add_subcommand("multiplier", "Tabulate K^(x) as CSV x,khat");
  add_weight_options(mult, o);
  mult->add_option("--xmin", o.xmin)->capture_default_str();
  mult->add_option("--xmax", o.xmax)->capture_default_str();
  mult->add_option("--points", o.points)->capture_default_str();
  mult->add_option("--out", o.out, "CSV output")->required();
  mult->add_option("--svg", o.svg, "SVG plot output");

  CLI::App* kern = app.add_subcommand("kernel", "Tabulate K(s) or K_eps(s) as CSV s,k");
  add_weight_options(kern, o);
  kern->add_option("--eps", o.eps)->capture_default_str();
  kern->add_flag("--scaled", o.scaled, "Tabulate K_eps instead of K");
  kern->add_option("--smin", o.smin)->capture_default_str();
  kern->add_option("--smax", o.smax)->capture_default_str();
  kern->add_option("--points", o.points)->capture_default_str();
  kern->add_option("--out", o.out, "CSV output")->required();
  kern->add_option("--svg", o.svg, "SVG plot output");

  CLI::App* apply = app.add_subcommand("apply", "Apply F_eps to a signal CSV x,value");
  add_weight_options(apply, o);
  apply->add_option("--eps", o.eps)->capture_default_str();
  apply->add_option("--in", o.in, "Input signal CSV")->required();
  apply->add_option("--out", o.out, "Output signal CSV")->required();
  apply->add_option("--path", o.path)
      ->check(CLI::IsMember({"spectral", "convolution", "direct"}))
      ->capture_default_str();
  apply->add_option("--points", o.points, "Evaluation points for the direct path (<= 32)");

  CLI::App* sweep = app.add_subcommand("sweep", "Run one experiment and write its report");
  add_weight_options(sweep, o);
  sweep->add_option("--kind", o.kind)
      ->required()
      ->check(CLI::IsMember({"boundedness", "convergence", "hormander", "rate-conditions"}));
  sweep->add_option("--eps", o.eps_list, "Comma-separated decreasing epsilon grid");
  sweep->add_option("--sigma", o.sigma, "Smoothness order")->capture_default_str();
  sweep->add_option("--d", o.d, "Radius for the rate conditions")->capture_default_str();
  sweep->add_option("--x-grid", o.x_grid, "Comma-separated x grid for the Hormander check");
  sweep->add_option("--signal", o.signal, "atom, gaussian or bandlimited")->capture_default_str();
  sweep->add_option("--in", o.in, "Signal CSV used instead of --signal");
  sweep->add_option("--dx", o.dx, "Grid spacing for generated signals")->capture_default_str();
  sweep->add_option("--n", o.n, "Grid size for generated signals")->capture_default_str();
  sweep->add_option("--json", o.json, "Report JSON (standard output when absent)");
  sweep->add_option("--csv", o.csv, "Per-epsilon metrics CSV");
  sweep->add_option("--svg", o.svg, "Metric plot");

  CLI::App* examples = app.add_subcommand("examples", "Run the canned example suite");
  examples->add_option("--out-dir", o.out_dir)->capture_default_str();

  CLI::App* h1 = app.add_subcommand("h1norm", "Maximal-function estimate of the H1 norm of a signal CSV");
  h1->add_option("--in", o.in, "Input signal CSV")->required();
  h1->add_option("--scale-min", o.scale_min, "Smallest mollifier scale (default dx)");
  h1->add_option("--scale-max", o.scale_max, "Largest mollifier scale (default width / 4)");
  h1->add_option("--out", o.out, "JSON output (standard output when absent)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (check->parsed()) return cmd_check(o, out);
    if (mult->parsed()) return cmd_multiplier(o);
    if (kern->parsed()) return cmd_kernel(o, err);
    if (apply->parsed()) return cmd_apply(o, err);
    if (sweep->parsed()) return cmd_sweep(o, out);
    if (examples->parsed()) return cmd_examples(o, out);
    if (h1->parsed()) return cmd_h1norm(o, out);
  } catch (const IoError& e) {
    err << "haus: " << e.what() << "\n";
    return kExitIo;
  } catch (const InvalidInput& e) {
    err << "haus: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "haus: " << e.what() << "\n";
    return kExitConfig;
  } catch (const OutOfRange& e) {
    err << "haus: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Unsupported& e) {
    err << "haus: " << e.what() << "\n";
    return kExitConfig;
  } catch (const AliasingError& e) {
    err << "haus: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "haus: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitConfig;
}

}  // namespace haus::cli
