#include "fracldg/experiment.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "fracldg/error.hpp"

namespace fracldg {

const char* to_string(Domain d) {
  switch (d) {
    case Domain::interval: return "interval";
    case Domain::disk: return "disk";
    case Domain::square: return "square";
  }
  return "?";
}

const char* to_string(MeshKind k) { return k == MeshKind::uniform ? "uniform" : "graded"; }
const char* to_string(QSpace q) { return q == QSpace::p0 ? "p0" : "p1"; }

double ExperimentConfig::resolved_mu() const {
  if (mu) return *mu;
  if (mesh == MeshKind::uniform) return 1.0;
  return dim == 1 ? 4.0 - 2.0 * s : 2.0;
}

QSpace ExperimentConfig::resolved_q_space() const {
  if (q_space) return *q_space;
  return mesh == MeshKind::uniform ? QSpace::p0 : QSpace::p1;
}

std::vector<int> ExperimentConfig::mesh_parameters() const {
  if (!j_list.empty()) return j_list;
  const int start = j0 ? *j0 : (dim == 1 ? (mesh == MeshKind::uniform ? 16 : 8) : 4);
  std::vector<int> out;
  for (int k = 0; k < levels; ++k) {
    int j = dim == 1 ? start << k : static_cast<int>(std::lround(start * std::pow(std::sqrt(2.0), k)));
    if (!out.empty() && j <= out.back()) j = out.back() + 1;
    out.push_back(j);
  }
  return out;
}

std::string ExperimentConfig::abscissa() const {
  return dim == 1 && mesh == MeshKind::uniform ? "h" : "N";
}

std::vector<std::string> validate_config(const ExperimentConfig& c) {
  if (c.dim != 1 && c.dim != 2) throw ConfigError("dim must be 1 or 2");
  if ((c.dim == 1) != (c.domain == Domain::interval)) {
    throw ConfigError(std::string("domain ") + to_string(c.domain) + " is not available in dimension " +
                      std::to_string(c.dim));
  }
  if (!(c.s > 0.5 && c.s < 1.0)) throw ConfigError("s must lie in (1/2, 1)");
  if (c.j_list.empty() && c.levels < 1) throw ConfigError("levels must be at least 1");
  const double mu = c.resolved_mu();
  if (!(mu >= 1.0)) throw ConfigError("mu must be >= 1");
  if (!(c.flux.c11_scale > 0.0)) throw ConfigError("c11 scale must be positive");
  const QSpace q = c.resolved_q_space();
  if (q == QSpace::p1 && c.flux.cs_rule == FluxParams::CsRule::constant && !(c.flux.cs_value > 0.0)) {
    throw ConfigError("C_s must be positive when Q = P1");
  }
  if (c.quad.singular < 1 || c.quad.far < 1 || c.quad.near < 1 || c.quad.singular > 20 || c.quad.far > 20 ||
      c.quad.near > 20) {
    throw ConfigError("quadrature orders must lie in 1..20");
  }
  for (int j : c.mesh_parameters()) {
    if (j < 1) throw ConfigError("mesh parameter J must be positive");
    if (c.domain == Domain::interval && c.mesh == MeshKind::uniform && (j < 2 || j % 2 != 0)) {
      throw ConfigError("uniform interval meshes need an even J >= 2, got " + std::to_string(j));
    }
    if (c.domain == Domain::disk && j < 2) throw ConfigError("disk meshes need J >= 2");
  }

  std::vector<std::string> warn;
  if (c.mesh == MeshKind::graded && q == QSpace::p0) warn.emplace_back("graded mesh with Q = P0: no stabilization");
  if (c.mesh == MeshKind::uniform && q == QSpace::p1) warn.emplace_back("uniform mesh with Q = P1");
  if (c.mesh == MeshKind::uniform && mu != 1.0) warn.emplace_back("uniform mesh with mu != 1");
  if (c.mesh == MeshKind::graded) {
    const double expected = c.dim == 1 ? 4.0 - 2.0 * c.s : 2.0;
    if (std::abs(mu - expected) > 1e-12) {
      warn.emplace_back("grading mu = " + std::to_string(mu) + " differs from " + std::to_string(expected));
    }
  }
  if (c.dim == 2 && q == QSpace::p1 && c.flux.cs_rule == FluxParams::CsRule::automatic && c.flux.theta < 0.0) {
    warn.emplace_back("theta < 0 for the C_s = h^{2 theta} rule");
  }
  return warn;
}

Mesh build_mesh(const ExperimentConfig& c, int j) {
  switch (c.domain) {
    case Domain::interval:
      return c.mesh == MeshKind::uniform ? uniform_interval_mesh(j) : graded_interval_mesh(j, c.resolved_mu());
    case Domain::disk:
      return disk_mesh(j, c.mesh == MeshKind::uniform ? 1.0 : c.resolved_mu());
    case Domain::square: {
      SquareGradingOptions opts;
      opts.levels = j;
      opts.mu = c.resolved_mu();
      return graded_square_mesh(opts);
    }
  }
  throw ConfigError("unknown domain");
}

double eoc_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw ConfigError("eoc_fit: need at least two points");
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) throw ConfigError("eoc_fit: sizes and errors must be positive");
    sx += std::log(x);
    sy += std::log(y);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - my);
  }
  if (sxx == 0.0) throw ConfigError("eoc_fit: sizes must not all coincide");
  return sxy / sxx;
}

double fitted_rate(const std::vector<LevelResult>& levels, bool use_h, bool energy, int* used) {
  const int n = static_cast<int>(levels.size());
  const int take = std::min(n, std::max(3, n - 2));
  if (used) *used = n >= 2 ? take : 0;
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<double, double>> pts;
  for (int k = n - take; k < n; ++k) {
    const auto& l = levels[static_cast<std::size_t>(k)];
    pts.emplace_back(use_h ? l.h : static_cast<double>(l.N), energy ? l.energy_err : l.l2_err);
  }
  try {
    const double slope = eoc_fit(pts);
    return use_h ? slope : -slope;
  } catch (const ConfigError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

namespace {

double pairwise(double e0, double e1, double x0, double x1, bool use_h) {
  if (!(e0 > 0.0) || !(e1 > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double r = std::log(e1 / e0) / std::log(x1 / x0);
  return use_h ? r : -r;
}

}  // namespace

ErrorReport run_experiment(const ExperimentConfig& config, const LevelCallback& on_level) {
  if (config.domain == Domain::square) {
    throw ConfigError("run: the square domain has no closed-form solution; use profile-square");
  }
  ErrorReport report;
  report.warnings = validate_config(config);
  report.abscissa = config.abscissa();
  const bool use_h = report.abscissa == "h";
  const QSpace q = config.resolved_q_space();
  FluxParams flux = config.flux;
  flux.s = config.s;
  const BallExact exact(config.dim, config.s);
  const ScalarField f = [&exact](const Point& x) { return exact.f(x); };

  for (int j : config.mesh_parameters()) {
    const auto t0 = std::chrono::steady_clock::now();
    LevelResult lr;
    lr.j = j;
    try {
      const Mesh mesh = build_mesh(config, j);
      const DgSpaces spaces(mesh, q);
      const SystemBlocks blocks = assemble_system(spaces, flux, f, config.quad);
      const Solution sol = solve(blocks, config.solve);
      lr.elements = mesh.num_elements();
      lr.N = spaces.v_size();
      for (int e = 0; e < mesh.num_elements(); ++e) lr.h = std::max(lr.h, mesh.diameter(e));
      lr.diagnostics = sol.diagnostics;
      lr.residuals = block_residuals(blocks, sol);
      if (lr.residuals.max() > 1e-9) {
        throw NumericalError("block residual " + std::to_string(lr.residuals.max()) + " exceeds 1e-9");
      }
      lr.terms = energy_terms(blocks, sol, exact, config.error_quad);
      lr.energy_err = energy_error(lr.terms);
      lr.l2_err = l2_error(spaces, sol.U, exact, config.error_quad);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& ex) {
      report.complete = false;
      report.failure = "level J=" + std::to_string(j) + ": " + ex.what();
      break;
    }
    lr.eoc_energy_pairwise = std::numeric_limits<double>::quiet_NaN();
    lr.eoc_l2_pairwise = std::numeric_limits<double>::quiet_NaN();
    if (!report.levels.empty()) {
      const LevelResult& prev = report.levels.back();
      const double x0 = use_h ? prev.h : prev.N, x1 = use_h ? lr.h : lr.N;
      lr.eoc_energy_pairwise = pairwise(prev.energy_err, lr.energy_err, x0, x1, use_h);
      lr.eoc_l2_pairwise = pairwise(prev.l2_err, lr.l2_err, x0, x1, use_h);
    }
    lr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.levels.push_back(lr);
    if (on_level) on_level(report.levels.back());
  }
  report.eoc_energy = fitted_rate(report.levels, use_h, true, &report.fit_points);
  report.eoc_l2 = fitted_rate(report.levels, use_h, false);
  return report;
}

}  // namespace fracldg
