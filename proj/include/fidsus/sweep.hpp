#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fidsus/types.hpp"

namespace fidsus {

enum class ModelKind { TwoLevel, Lmg, Xxz, Bec };
enum class OracleKind { Closed, Perturbative, FiniteDifference, Pancharatnam };

ModelKind parse_model(const std::string& name);
std::string model_name(ModelKind m);
std::vector<OracleKind> parse_oracles(const std::string& csv);  // "closed,pert,fd,loop"

// One grid axis with explicit sample values (already expanded).
struct GridAxis {
  std::string name;
  std::vector<double> values;
};

GridAxis parse_grid_axis(const std::string& spec);  // "name=min:max:count"
std::vector<double> linspace(double min, double max, int count);

struct SweepConfig {
  ModelKind model = ModelKind::Lmg;
  std::vector<GridAxis> axes;
  std::vector<OracleKind> oracles{OracleKind::Closed};
  std::optional<int> ed_size;    // matrix size for collective-spin rows, Fock cutoff for mode rows
  double delta = 1e-3;           // finite-difference step
  int quad_points = 64;          // per-axis quadrature points
  int loop_points = 4096;        // loop discretization
};

// fig1/fig3: field-anisotropy plane above the transition, 50 x 50.
// fig2/fig4: gamma = 0.5 line through both phases, 100 + 100 points.
SweepConfig preset_config(const std::string& name);

struct SweepResult {
  ModelKind model = ModelKind::Lmg;
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;
  std::size_t skipped_points = 0;          // grid points dropped near a critical value
  std::optional<double> max_rel_dev;       // max |chi_pert - chi_closed| / |chi_closed|
};

Index column_index(const SweepResult& r, const std::string& name);

// Evaluates every oracle at every grid point, row-major over the axes in
// canonical order. Rows are computed by a worker pool but stored in grid
// order, and each entry is deterministic, so repeated runs are identical.
SweepResult run_sweep(const SweepConfig& cfg);

// CSV with a header row; 17 significant digits per value, empty cell for
// oracles that do not apply.
void write_csv(const SweepResult& r, std::ostream& os);

std::string render_summary(const SweepResult& r);

struct EdCheckRow {
  int n = 0;
  double chi_pert = 0.0;
  double abs_err = 0.0;
};

struct EdCheckResult {
  double chi_closed = 0.0;
  std::vector<EdCheckRow> rows;  // ascending in n
  bool trend_ok = false;         // abs_err non-increasing in n
};

// Finite-size convergence of the perturbative susceptibility toward the
// closed form, symmetric phase only (h > 1), sizes >= 64.
EdCheckResult ed_check(std::vector<int> sizes, double h, double gamma);

std::string render_ed_check(const EdCheckResult& r, double h, double gamma);

}  // namespace fidsus
