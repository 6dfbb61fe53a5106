// Command-line front end: parameter sweeps, finite-size convergence checks,
// and single-point oracle evaluations, with CSV output.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fidsus/sweep.hpp"
#include "fidsus/types.hpp"

namespace {

using fidsus::GridAxis;
using fidsus::SweepConfig;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Plain-text configuration: one `key = value` line per flag, `#` comments.
// Values listed here only fill in flags not given on the command line.
std::map<std::string, std::vector<std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::map<std::string, std::vector<std::string>> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config file line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("config file line " + std::to_string(lineno) +
                                  ": empty key or value");
    kv[key].push_back(value);
  }
  return kv;
}

int parse_int_arg(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": cannot parse '" + s + "'");
  }
}

double parse_double_arg(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": cannot parse '" + s + "'");
  }
}

// Everything a subcommand can receive, before merging with a config file.
struct Options {
  std::string model, preset, oracles, out, config;
  std::vector<std::string> grids;
  std::vector<int> ed_sizes;
  double delta = 1e-3;
  int quad_points = 64;
};

void add_common_flags(CLI::App* cmd, Options& o, bool repeat_ed_size) {
  cmd->add_option("--model", o.model, "Model: two_level, lmg, xxz, bec");
  cmd->add_option("--preset", o.preset, "Named sweep preset: fig1, fig2, fig3, fig4");
  cmd->add_option("--grid", o.grids, "Grid axis, name=min:max:count (repeatable)");
  cmd->add_option("--oracles", o.oracles, "Comma list from closed, pert, fd, loop");
  auto* ed = cmd->add_option("--ed-size", o.ed_sizes, "Diagonalization size (matrix rows / Fock cutoff)");
  if (!repeat_ed_size) ed->expected(0, 1);
  cmd->add_option("--delta", o.delta, "Finite-difference step");
  cmd->add_option("--quad-points", o.quad_points, "Quadrature points per axis");
  cmd->add_option("--out", o.out, "Output CSV path");
  cmd->add_option("--config", o.config, "Config file with key = value lines");
}

void merge_config_file(CLI::App* cmd, Options& o) {
  if (o.config.empty()) return;
  const auto kv = read_config_file(o.config);
  auto unset = [&](const std::string& flag) { return cmd->count(flag) == 0; };
  for (const auto& [key, values] : kv) {
    if (key == "model" && unset("--model")) o.model = values.back();
    else if (key == "preset" && unset("--preset")) o.preset = values.back();
    else if (key == "grid" && unset("--grid")) o.grids = values;
    else if (key == "oracles" && unset("--oracles")) o.oracles = values.back();
    else if (key == "ed-size" && unset("--ed-size")) {
      o.ed_sizes.clear();
      for (const std::string& v : values) o.ed_sizes.push_back(parse_int_arg(v, "ed-size"));
    } else if (key == "delta" && unset("--delta")) o.delta = parse_double_arg(values.back(), "delta");
    else if (key == "quad-points" && unset("--quad-points"))
      o.quad_points = parse_int_arg(values.back(), "quad-points");
    else if (key == "out" && unset("--out")) o.out = values.back();
    else if (key == "model" || key == "preset" || key == "grid" || key == "oracles" ||
             key == "ed-size" || key == "delta" || key == "quad-points" || key == "out") {
      // command line takes precedence; nothing to do
    } else {
      throw std::invalid_argument("config file: unknown key '" + key + "'");
    }
  }
}

SweepConfig build_sweep_config(const Options& o) {
  SweepConfig cfg;
  if (!o.preset.empty()) {
    cfg = fidsus::preset_config(o.preset);
    if (!o.model.empty() && fidsus::parse_model(o.model) != cfg.model)
      throw std::invalid_argument("preset '" + o.preset + "' fixes the model to " +
                                  fidsus::model_name(cfg.model));
  } else if (!o.model.empty()) {
    cfg.model = fidsus::parse_model(o.model);
  } else {
    throw std::invalid_argument("either --model or --preset is required");
  }
  for (const std::string& spec : o.grids) {
    GridAxis ax = fidsus::parse_grid_axis(spec);
    auto it = std::find_if(cfg.axes.begin(), cfg.axes.end(),
                           [&](const GridAxis& a) { return a.name == ax.name; });
    if (it != cfg.axes.end()) *it = std::move(ax);
    else cfg.axes.push_back(std::move(ax));
  }
  if (!o.oracles.empty()) cfg.oracles = fidsus::parse_oracles(o.oracles);
  if (!o.ed_sizes.empty()) {
    if (o.ed_sizes.size() > 1)
      throw std::invalid_argument("this subcommand takes a single --ed-size");
    cfg.ed_size = o.ed_sizes.front();
  }
  cfg.delta = o.delta;
  cfg.quad_points = o.quad_points;
  return cfg;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output path '" + path + "'");
  return out;
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int run_sweep_command(CLI::App* cmd, Options& o) {
  merge_config_file(cmd, o);
  const SweepConfig cfg = build_sweep_config(o);
  const std::string out_path = o.out.empty() ? "sweep.csv" : o.out;
  std::ofstream out = open_output(out_path);  // fail before the heavy work
  const fidsus::SweepResult result = fidsus::run_sweep(cfg);
  fidsus::write_csv(result, out);
  out.flush();
  if (!out) throw std::invalid_argument("failed writing output path '" + out_path + "'");
  std::cout << fidsus::render_summary(result);
  std::cout << "csv: " << out_path << "\n";
  return 0;
}

int run_point_command(CLI::App* cmd, Options& o) {
  merge_config_file(cmd, o);
  const SweepConfig cfg = build_sweep_config(o);
  for (const GridAxis& ax : cfg.axes)
    if (ax.values.size() != 1)
      throw std::invalid_argument("point: axis '" + ax.name + "' must have count 1");
  const fidsus::SweepResult result = fidsus::run_sweep(cfg);
  if (result.rows.empty())
    throw fidsus::CriticalPointError("point: the requested point sits at the critical field");
  const auto& row = result.rows.front();
  for (size_t c = 0; c < result.columns.size(); ++c)
    if (row[c]) std::cout << result.columns[c] << " = " << format_value(*row[c]) << "\n";
  if (!o.out.empty()) {
    std::ofstream out = open_output(o.out);
    fidsus::write_csv(result, out);
  }
  return 0;
}

int run_ed_check_command(CLI::App* cmd, Options& o) {
  merge_config_file(cmd, o);
  if (!o.model.empty() && fidsus::parse_model(o.model) != fidsus::ModelKind::Lmg)
    throw std::invalid_argument("ed-check supports only the lmg model");
  double h = 2.0, gamma = 0.5;
  for (const std::string& spec : o.grids) {
    const GridAxis ax = fidsus::parse_grid_axis(spec);
    if (ax.values.size() != 1)
      throw std::invalid_argument("ed-check: axis '" + ax.name + "' must have count 1");
    if (ax.name == "h") h = ax.values.front();
    else if (ax.name == "gamma") gamma = ax.values.front();
    else throw std::invalid_argument("ed-check: unknown axis '" + ax.name + "'");
  }
  std::vector<int> sizes = o.ed_sizes;
  if (sizes.empty()) sizes = {128, 256, 512, 1024};
  const fidsus::EdCheckResult result = fidsus::ed_check(sizes, h, gamma);
  const std::string table = fidsus::render_ed_check(result, h, gamma);
  std::cout << table;
  if (!o.out.empty()) {
    std::ofstream out = open_output(o.out);
    out << table;
  }
  if (!result.trend_ok) {
    std::cerr << "error: convergence trend violated (error column increased with N)\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fidelity susceptibility and geometric phase for collective spin and boson models"};
  app.require_subcommand(1);

  Options sweep_opts, point_opts, ed_opts;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Evaluate oracles over a parameter grid, emit CSV");
  add_common_flags(sweep_cmd, sweep_opts, false);
  CLI::App* point_cmd = app.add_subcommand("point", "Evaluate oracles at a single parameter point");
  add_common_flags(point_cmd, point_opts, false);
  CLI::App* ed_cmd = app.add_subcommand("ed-check", "Finite-size convergence toward the closed form");
  add_common_flags(ed_cmd, ed_opts, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (sweep_cmd->parsed()) return run_sweep_command(sweep_cmd, sweep_opts);
    if (point_cmd->parsed()) return run_point_command(point_cmd, point_opts);
    return run_ed_check_command(ed_cmd, ed_opts);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
