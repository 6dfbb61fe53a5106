#include "fidsus/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "fidsus/models.hpp"

namespace fidsus {

namespace {

const char* kModelNames[] = {"two_level", "lmg", "xxz", "bec"};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(what);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": cannot parse '" + s + "'");
  }
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> param_names(ModelKind m) {
  switch (m) {
    case ModelKind::TwoLevel: return {"theta", "b"};
    case ModelKind::Lmg: return {"h", "gamma"};
    case ModelKind::Xxz: return {"eta"};
    case ModelKind::Bec: return {"lambda", "sigma"};
  }
  return {};
}

bool has(const std::vector<OracleKind>& v, OracleKind k) {
  return std::find(v.begin(), v.end(), k) != v.end();
}

bool oracle_supported(ModelKind m, OracleKind k) {
  switch (m) {
    case ModelKind::TwoLevel: return true;
    case ModelKind::Lmg: return k != OracleKind::Pancharatnam;
    case ModelKind::Xxz: return k == OracleKind::Closed;
    case ModelKind::Bec:
      return k == OracleKind::Closed || k == OracleKind::FiniteDifference;
  }
  return false;
}

const char* oracle_flag(OracleKind k) {
  switch (k) {
    case OracleKind::Closed: return "closed";
    case OracleKind::Perturbative: return "pert";
    case OracleKind::FiniteDifference: return "fd";
    case OracleKind::Pancharatnam: return "loop";
  }
  return "?";
}

struct RowValues {
  std::optional<double> chi_closed, beta_closed, chi_pert, chi_fd, beta_loop, gap, e0;
};

RowValues compute_two_level(double theta, double b, const SweepConfig& cfg) {
  RowValues out;
  const TwoLevelParams p{b, theta, 0.0};
  if (has(cfg.oracles, OracleKind::Closed)) {
    out.chi_closed = chi_angles(AlgebraKind::SU2, CosetAngles{theta, 0.0}, AngleVelocity{0.0, 1.0});
    out.beta_closed = berry_phase_su2(theta, SpinReference::Up);
  }
  const bool wants_ed =
      has(cfg.oracles, OracleKind::Perturbative) || has(cfg.oracles, OracleKind::FiniteDifference);
  if (wants_ed) {
    const Spectrum s = eigensolve(two_level_hamiltonian(p));
    out.gap = s.energies[1] - s.energies[0];
    out.e0 = s.energies[0];
    if (has(cfg.oracles, OracleKind::Perturbative))
      out.chi_pert = chi_perturbative(s, two_level_phi_derivative(p));
    if (has(cfg.oracles, OracleKind::FiniteDifference)) {
      auto ground = [&](double phi) {
        return QuantumState(
            eigensolve(two_level_hamiltonian(TwoLevelParams{b, theta, phi})).states.col(0));
      };
      out.chi_fd = chi_finite_difference(ground, 0.0, cfg.delta);
    }
  }
  if (has(cfg.oracles, OracleKind::Pancharatnam))
    out.beta_loop = pancharatnam_phase(two_level_phase_loop(theta, cfg.loop_points), true);
  return out;
}

RowValues compute_lmg(double h, double gamma, const SweepConfig& cfg) {
  RowValues out;
  const int n = cfg.ed_size.value_or(256);
  if (has(cfg.oracles, OracleKind::Closed)) {
    out.chi_closed = lmg_chi_closed(h, gamma);
    out.beta_closed = lmg_geometric_phase(h, gamma);
  }
  const bool wants_ed =
      has(cfg.oracles, OracleKind::Perturbative) || has(cfg.oracles, OracleKind::FiniteDifference);
  if (wants_ed) {
    const Spectrum s = eigensolve(lmg_hamiltonian(LmgParams{h, gamma, 1.0, n}));
    out.gap = s.energies[1] - s.energies[0];
    out.e0 = s.energies[0];
    if (has(cfg.oracles, OracleKind::Perturbative))
      out.chi_pert = chi_perturbative(s, lmg_field_derivative(n));
    if (has(cfg.oracles, OracleKind::FiniteDifference)) {
      auto ground = [&](double field) {
        return QuantumState(
            eigensolve(lmg_hamiltonian(LmgParams{field, gamma, 1.0, n})).states.col(0));
      };
      out.chi_fd = chi_finite_difference(ground, h, cfg.delta);
    }
  }
  return out;
}

RowValues compute_xxz(double eta, const SweepConfig& cfg) {
  RowValues out;
  out.chi_closed = xxz_chi(XxzParams{eta},
                           QuadratureSpec{QuadratureRule::GaussLegendre, cfg.quad_points});
  return out;
}

RowValues compute_bec(double lambda, double sigma, const SweepConfig& cfg) {
  RowValues out;
  if (has(cfg.oracles, OracleKind::Closed)) {
    BecModeParams p;
    p.sigma = [sigma](double) { return sigma; };
    p.u = [](double l) { return Complex(l, 0.0); };
    p.lambda0 = lambda;
    out.chi_closed = bec_mode_chi(p);
  }
  if (has(cfg.oracles, OracleKind::FiniteDifference)) {
    const int cutoff = cfg.ed_size.value_or(200);
    auto ground = [&](double l) {
      return QuantumState(eigensolve(bec_mode_hamiltonian(sigma, Complex(l, 0.0), cutoff))
                              .states.col(0));
    };
    out.chi_fd = chi_finite_difference(ground, lambda, cfg.delta);
    const Spectrum s = eigensolve(bec_mode_hamiltonian(sigma, Complex(lambda, 0.0), cutoff));
    out.gap = s.energies[1] - s.energies[0];
    out.e0 = s.energies[0];
  }
  return out;
}

void validate_axis_domain(ModelKind m, const GridAxis& ax) {
  auto require = [&](bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument("grid axis '" + ax.name + "': " + msg);
  };
  for (double v : ax.values)
    require(std::isfinite(v), "non-finite value");
  const double lo = *std::min_element(ax.values.begin(), ax.values.end());
  const double hi = *std::max_element(ax.values.begin(), ax.values.end());
  if (m == ModelKind::Lmg && ax.name == "h") require(lo > 0.0, "field must be positive");
  if (m == ModelKind::Lmg && ax.name == "gamma")
    require(lo >= 0.0 && hi <= 1.0, "anisotropy must lie in [0, 1]");
  if (m == ModelKind::TwoLevel && ax.name == "theta")
    require(lo >= 0.0 && hi <= std::numbers::pi, "theta must lie in [0, pi]");
  if (m == ModelKind::TwoLevel && ax.name == "b") require(lo > 0.0, "field must be positive");
  if (m == ModelKind::Xxz && ax.name == "eta")
    require(lo > 1.0 || hi < -1.0, "need |eta| > 1 across the axis");
  if (m == ModelKind::Bec && ax.name == "sigma") require(lo > 0.0, "sigma must be positive");
}

}  // namespace

ModelKind parse_model(const std::string& name) {
  for (int i = 0; i < 4; ++i)
    if (name == kModelNames[i]) return static_cast<ModelKind>(i);
  throw std::invalid_argument("unknown model '" + name + "' (two_level, lmg, xxz, bec)");
}

std::string model_name(ModelKind m) { return kModelNames[static_cast<int>(m)]; }

std::vector<OracleKind> parse_oracles(const std::string& csv) {
  std::vector<OracleKind> out;
  for (const std::string& tok : split(csv, ',')) {
    OracleKind k;
    if (tok == "closed") k = OracleKind::Closed;
    else if (tok == "pert") k = OracleKind::Perturbative;
    else if (tok == "fd") k = OracleKind::FiniteDifference;
    else if (tok == "loop") k = OracleKind::Pancharatnam;
    else throw std::invalid_argument("unknown oracle '" + tok + "' (closed, pert, fd, loop)");
    if (!has(out, k)) out.push_back(k);
  }
  if (out.empty()) throw std::invalid_argument("oracle list is empty");
  return out;
}

std::vector<double> linspace(double min, double max, int count) {
  if (count < 1) throw std::invalid_argument("grid: count must be >= 1");
  if (!(min <= max)) throw std::invalid_argument("grid: min must not exceed max");
  if (count == 1) {
    if (min != max) throw std::invalid_argument("grid: a single-point axis needs min == max");
    return {min};
  }
  std::vector<double> v(count);
  const double step = (max - min) / (count - 1);
  for (int i = 0; i < count; ++i) v[i] = min + i * step;
  v.back() = max;
  return v;
}

GridAxis parse_grid_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("grid spec must look like name=min:max:count");
  const std::string name = spec.substr(0, eq);
  const auto parts = split(spec.substr(eq + 1), ':');
  if (parts.size() != 3)
    throw std::invalid_argument("grid spec must look like name=min:max:count");
  const double lo = parse_double(parts[0], "grid min");
  const double hi = parse_double(parts[1], "grid max");
  int count = 0;
  try {
    size_t pos = 0;
    count = std::stoi(parts[2], &pos);
    if (pos != parts[2].size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw std::invalid_argument("grid count: cannot parse '" + parts[2] + "'");
  }
  return GridAxis{name, linspace(lo, hi, count)};
}

SweepConfig preset_config(const std::string& name) {
  SweepConfig cfg;
  cfg.model = ModelKind::Lmg;
  cfg.oracles = {OracleKind::Closed};
  if (name == "fig1" || name == "fig3") {
    cfg.axes = {GridAxis{"h", linspace(1.02, 2.0, 50)}, GridAxis{"gamma", linspace(0.0, 0.98, 50)}};
  } else if (name == "fig2" || name == "fig4") {
    std::vector<double> h = linspace(0.2, 0.99, 100);
    const std::vector<double> upper = linspace(1.01, 2.0, 100);
    h.insert(h.end(), upper.begin(), upper.end());
    cfg.axes = {GridAxis{"h", std::move(h)}, GridAxis{"gamma", {0.5}}};
  } else {
    throw std::invalid_argument("unknown preset '" + name + "' (fig1, fig2, fig3, fig4)");
  }
  return cfg;
}

Index column_index(const SweepResult& r, const std::string& name) {
  for (size_t i = 0; i < r.columns.size(); ++i)
    if (r.columns[i] == name) return static_cast<Index>(i);
  return -1;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  for (OracleKind k : cfg.oracles)
    if (!oracle_supported(cfg.model, k))
      throw std::invalid_argument("oracle '" + std::string(oracle_flag(k)) +
                                  "' is not supported for model " + model_name(cfg.model));
  if (cfg.ed_size && *cfg.ed_size < 2)
    throw std::invalid_argument("ed-size must be >= 2");
  if (!(cfg.delta > 0.0) || !std::isfinite(cfg.delta))
    throw std::invalid_argument("delta must be positive");
  if (cfg.quad_points < 2) throw std::invalid_argument("quad-points must be >= 2");
  if (cfg.loop_points < 3) throw std::invalid_argument("loop discretization must be >= 3");

  // canonical axis order; optional axes get their defaults
  const std::vector<std::string> names = param_names(cfg.model);
  std::vector<GridAxis> axes;
  for (const std::string& n : names) {
    auto it = std::find_if(cfg.axes.begin(), cfg.axes.end(),
                           [&](const GridAxis& a) { return a.name == n; });
    if (it != cfg.axes.end()) {
      if (it->values.empty()) throw std::invalid_argument("grid axis '" + n + "' is empty");
      axes.push_back(*it);
    } else if (cfg.model == ModelKind::TwoLevel && n == "b") {
      axes.push_back(GridAxis{"b", {1.0}});
    } else if (cfg.model == ModelKind::Bec && n == "sigma") {
      axes.push_back(GridAxis{"sigma", {2.0}});
    } else {
      throw std::invalid_argument("missing grid axis '" + n + "' for model " +
                                  model_name(cfg.model));
    }
  }
  for (const GridAxis& ax : cfg.axes)
    if (std::find(names.begin(), names.end(), ax.name) == names.end())
      throw std::invalid_argument("model " + model_name(cfg.model) + " has no parameter '" +
                                  ax.name + "'");
  for (const GridAxis& ax : axes) validate_axis_domain(cfg.model, ax);

  SweepResult result;
  result.model = cfg.model;

  // grid points, row-major; closed-form grids stay clear of the critical field
  std::vector<std::vector<double>> points;
  if (cfg.model == ModelKind::Lmg) {
    GridAxis& haxis = axes[0];
    const size_t before = haxis.values.size();
    std::erase_if(haxis.values, [](double h) { return std::abs(h - 1.0) <= 1e-6; });
    result.skipped_points = (before - haxis.values.size()) * axes[1].values.size();
  }
  {
    std::vector<size_t> idx(axes.size(), 0);
    std::vector<double> pt(axes.size());
    bool done = axes.empty();
    for (const GridAxis& ax : axes)
      if (ax.values.empty()) done = true;
    while (!done) {
      for (size_t a = 0; a < axes.size(); ++a) pt[a] = axes[a].values[idx[a]];
      points.push_back(pt);
      size_t a = axes.size();
      while (a > 0) {
        --a;
        if (++idx[a] < axes[a].values.size()) break;
        idx[a] = 0;
        if (a == 0) done = true;
      }
    }
  }

  // Fixed result schema: every run emits the same columns, with empty cells
  // for oracles that were not requested or do not apply to the model.
  result.columns = names;
  for (const char* c : {"chi_closed", "chi_pert", "chi_fd", "beta_closed", "beta_loop", "gap", "e0"})
    result.columns.emplace_back(c);

  std::vector<RowValues> values(points.size());
  {
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
      while (true) {
        const size_t i = next.fetch_add(1);
        if (i >= points.size()) return;
        try {
          const std::vector<double>& pt = points[i];
          switch (cfg.model) {
            case ModelKind::TwoLevel: values[i] = compute_two_level(pt[0], pt[1], cfg); break;
            case ModelKind::Lmg: values[i] = compute_lmg(pt[0], pt[1], cfg); break;
            case ModelKind::Xxz: values[i] = compute_xxz(pt[0], cfg); break;
            case ModelKind::Bec: values[i] = compute_bec(pt[0], pt[1], cfg); break;
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          next.store(points.size());
          return;
        }
      }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const size_t nthreads = std::min<size_t>(hw, std::max<size_t>(points.size(), 1));
    std::vector<std::thread> threads;
    for (size_t t = 0; t < nthreads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  double max_rel = -1.0;
  for (size_t i = 0; i < points.size(); ++i) {
    std::vector<std::optional<double>> row;
    row.reserve(result.columns.size());
    for (double v : points[i]) row.emplace_back(v);
    const RowValues& rv = values[i];
    row.push_back(rv.chi_closed);
    row.push_back(rv.chi_pert);
    row.push_back(rv.chi_fd);
    row.push_back(rv.beta_closed);
    row.push_back(rv.beta_loop);
    row.push_back(rv.gap);
    row.push_back(rv.e0);
    bool any = false;
    for (size_t c = points[i].size(); c < row.size(); ++c) {
      if (!row[c]) continue;
      any = true;
      if (!std::isfinite(*row[c]))
        throw std::runtime_error("non-finite result value in sweep row");
    }
    if (!any) throw std::runtime_error("sweep row has no populated result column");
    if (rv.chi_pert && rv.chi_closed && *rv.chi_closed != 0.0)
      max_rel = std::max(max_rel, std::abs(*rv.chi_pert - *rv.chi_closed) / std::abs(*rv.chi_closed));
    result.rows.push_back(std::move(row));
  }
  if (max_rel >= 0.0) result.max_rel_dev = max_rel;
  return result;
}

void write_csv(const SweepResult& r, std::ostream& os) {
  for (size_t c = 0; c < r.columns.size(); ++c) {
    if (c) os << ',';
    os << r.columns[c];
  }
  os << '\n';
  for (const auto& row : r.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      if (row[c]) os << format_value(*row[c]);
    }
    os << '\n';
  }
}

std::string render_summary(const SweepResult& r) {
  std::ostringstream os;
  os << "model: " << model_name(r.model) << "\n";
  os << "rows: " << r.rows.size();
  if (r.skipped_points > 0) os << " (skipped " << r.skipped_points << " grid points at the critical field)";
  os << "\n";
  if (r.max_rel_dev)
    os << "max |chi_pert - chi_closed| / |chi_closed|: " << format_value(*r.max_rel_dev) << "\n";
  return os.str();
}

EdCheckResult ed_check(std::vector<int> sizes, double h, double gamma) {
  if (sizes.empty()) throw std::invalid_argument("ed_check: size list is empty");
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  for (int n : sizes)
    if (n < 64) throw std::invalid_argument("ed_check: sizes must be >= 64");
  if (!std::isfinite(h)) throw std::invalid_argument("ed_check: non-finite field");
  if (std::abs(h - 1.0) < 1e-12)
    throw CriticalPointError("ed_check: h = 1 is the critical point");
  if (!(h > 1.0))
    throw std::invalid_argument("ed_check: convergence check runs in the symmetric phase, h > 1");
  if (!std::isfinite(gamma) || gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("ed_check: gamma must lie in [0, 1]");

  EdCheckResult r;
  r.chi_closed = lmg_chi_closed(h, gamma);
  for (int n : sizes) {
    const Spectrum s = eigensolve(lmg_hamiltonian(LmgParams{h, gamma, 1.0, n}));
    const double chi = chi_perturbative(s, lmg_field_derivative(n));
    r.rows.push_back(EdCheckRow{n, chi, std::abs(chi - r.chi_closed)});
  }
  r.trend_ok = true;
  for (size_t i = 1; i < r.rows.size(); ++i)
    if (r.rows[i].abs_err > r.rows[i - 1].abs_err) r.trend_ok = false;
  return r;
}

std::string render_ed_check(const EdCheckResult& r, double h, double gamma) {
  std::ostringstream os;
  os << "h = " << format_value(h) << ", gamma = " << format_value(gamma)
     << ", chi_closed = " << format_value(r.chi_closed) << "\n";
  os << "N,chi_pert,abs_err\n";
  for (const EdCheckRow& row : r.rows)
    os << row.n << ',' << format_value(row.chi_pert) << ',' << format_value(row.abs_err) << "\n";
  os << "error trend: " << (r.trend_ok ? "non-increasing" : "NOT non-increasing") << "\n";
  return os.str();
}

}  // namespace fidsus
