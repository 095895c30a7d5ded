#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fracldg/assembly.hpp"
#include "fracldg/errors.hpp"
#include "fracldg/solver.hpp"

namespace fracldg {

enum class Domain { interval, disk, square };
enum class MeshKind { uniform, graded };

const char* to_string(Domain d);
const char* to_string(MeshKind k);
const char* to_string(QSpace q);

/// One convergence study on the unit ball with f = 1.
///
/// Mesh sequence: `j_list` if given, otherwise `levels` values starting at
/// `j0` (1D: doubling; 2D: growth by sqrt 2, rounded). J is the cell count
/// for uniform intervals, the cells per half for graded intervals and the
/// number of rings for disks.
struct ExperimentConfig {
  int dim = 1;
  Domain domain = Domain::interval;
  double s = 0.75;
  MeshKind mesh = MeshKind::uniform;
  /// Default: 1 for uniform meshes, 4 - 2s for graded intervals, 2 for
  /// graded disks.
  std::optional<double> mu;
  int levels = 6;
  std::optional<int> j0;
  std::vector<int> j_list;
  /// Default: P0 on uniform meshes, P1 on graded meshes.
  std::optional<QSpace> q_space;
  FluxParams flux;  ///< flux.s is overwritten with s
  PairQuadrature quad;
  ErrorOptions error_quad;
  SolveOptions solve;

  double resolved_mu() const;
  QSpace resolved_q_space() const;
  std::vector<int> mesh_parameters() const;
  /// "h" for uniform intervals, "N" otherwise.
  std::string abscissa() const;
};

/// ConfigError for invalid values; returns warnings for parameter choices
/// outside the hypotheses of the convergence theory.
std::vector<std::string> validate_config(const ExperimentConfig& config);

/// Builds the mesh of one level (square domain: NVB graded mesh with
/// `j` marking rounds).
Mesh build_mesh(const ExperimentConfig& config, int j);

struct LevelResult {
  int j = 0;
  int elements = 0;
  int N = 0;  ///< dim V_h
  double h = 0.0;
  double energy_err = 0.0;
  double l2_err = 0.0;
  double eoc_energy_pairwise = 0.0;  ///< NaN on the first level
  double eoc_l2_pairwise = 0.0;
  EnergyTerms terms;
  SolveDiagnostics diagnostics;
  BlockResiduals residuals;
  double seconds = 0.0;
};

struct ErrorReport {
  std::vector<LevelResult> levels;
  std::string abscissa = "h";
  double eoc_energy = 0.0;  ///< NaN if fewer than two levels
  double eoc_l2 = 0.0;
  int fit_points = 0;
  bool complete = true;
  std::string failure;
  std::vector<std::string> warnings;
};

using LevelCallback = std::function<void(const LevelResult&)>;

/// Loops over the levels: mesh, spaces, blocks, solve, errors. A failing
/// level stops the loop with `complete = false`; EOCs are fitted on the
/// levels that finished. Throws ConfigError for invalid configurations
/// (including the square domain, which has no closed-form solution).
ErrorReport run_experiment(const ExperimentConfig& config, const LevelCallback& on_level = {});

/// Least-squares slope of log(error) against log(size). Requires at least
/// two pairs; nonpositive values throw ConfigError.
double eoc_fit(const std::vector<std::pair<double, double>>& points);

/// Positive convergence rate from the last max(3, n - 2) points: the slope
/// against h, or minus the slope against N.
double fitted_rate(const std::vector<LevelResult>& levels, bool use_h, bool energy, int* used = nullptr);

/// CSV with a leading `# ...` description line, the columns
/// level,N,h,energy_err,l2_err,eoc_energy_pairwise,eoc_l2_pairwise and a
/// trailing `# eoc_energy=<v> eoc_l2=<v>` line.
void write_report_csv(std::ostream& os, const ExperimentConfig& config, const ErrorReport& report);

}  // namespace fracldg
