#include "fracldg/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fracldg/error.hpp"

namespace fracldg {

namespace {

double first_component(const DgSpaces& sp, const Solution& sol, int e, const Point& x) {
  double v = sol.P0[sp.sigma_index(0, e)];
  if (sol.Pperp.size() > 0) {
    const Point d = x - sp.mesh().barycenter(e);
    for (int k = 0; k < sp.dim(); ++k) v += sol.Pperp[sp.perp_index(e, 0, k)] * d[k];
  }
  return v;
}

// Averages the element values at x over all elements containing it, so
// points on shared edges see both traces.
double sample_at(const DgSpaces& sp, const Solution& sol, const Point& x) {
  const Mesh& mesh = sp.mesh();
  double sum = 0.0;
  int hits = 0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Point& a = mesh.element_vertex(e, 0);
    const Point& b = mesh.element_vertex(e, 1);
    const Point& c = mesh.element_vertex(e, 2);
    const double lo_x = std::min({a[0], b[0], c[0]}), hi_x = std::max({a[0], b[0], c[0]});
    const double lo_y = std::min({a[1], b[1], c[1]}), hi_y = std::max({a[1], b[1], c[1]});
    if (x[0] < lo_x - 1e-12 || x[0] > hi_x + 1e-12 || x[1] < lo_y - 1e-12 || x[1] > hi_y + 1e-12) continue;
    const Eigen::Vector3d lam = sp.barycentric(e, x);
    if (lam.minCoeff() < -1e-12) continue;
    sum += first_component(sp, sol, e, x);
    ++hits;
  }
  if (hits == 0) throw StructuralError("square profile: sample point outside the mesh");
  return sum / hits;
}

std::string s_tag(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", s);
  return buf;
}

}  // namespace

SquareProfile square_profile(const Mesh& mesh, double s, const ProfileConfig& config) {
  if (mesh.dim() != 2) throw ConfigError("square profile needs a 2D mesh");
  const DgSpaces sp(mesh, QSpace::p1);
  FluxParams flux;
  flux.s = s;
  flux.c11_scale = config.c11_scale;
  flux.cs_rule = FluxParams::CsRule::constant;
  flux.cs_value = config.cs;
  const SystemBlocks blocks = assemble_system(sp, flux, [](const Point&) { return 1.0; }, config.quad);
  const Solution sol = solve(blocks, config.solve);

  SquareProfile out;
  out.s = s;
  out.diagnostics = sol.diagnostics;
  out.surface.reserve(static_cast<std::size_t>(mesh.num_elements()));
  for (int e = 0; e < mesh.num_elements(); ++e) {
    ElementSample es;
    es.element = e;
    es.barycenter = mesh.barycenter(e);
    es.value = first_component(sp, sol, e, es.barycenter);
    for (int i = 0; i < 3; ++i) es.vertex_values[i] = first_component(sp, sol, e, mesh.element_vertex(e, i));
    out.surface.push_back(es);
  }

  for (const Face& f : mesh.faces()) {
    if (!f.is_boundary()) continue;
    const Point& a = mesh.vertex(f.vertices[0]);
    const Point& b = mesh.vertex(f.vertices[1]);
    if (std::abs(a[0] + 1.0) > 1e-12 || std::abs(b[0] + 1.0) > 1e-12) continue;
    const Point m = 0.5 * (a + b);
    out.slice.push_back({m[1], first_component(sp, sol, f.elements[0], m)});
  }
  std::sort(out.slice.begin(), out.slice.end(), [](const SlicePoint& p, const SlicePoint& q) { return p.y < q.y; });
  const double near = 1.0 - config.boundary_window;
  for (std::size_t i = 0; i + 1 < out.slice.size(); ++i) {
    const SlicePoint& p = out.slice[i];
    const SlicePoint& q = out.slice[i + 1];
    if (std::max(std::abs(p.y), std::abs(q.y)) >= near) {
      out.max_edge_slope = std::max(out.max_edge_slope, std::abs((q.value - p.value) / (q.y - p.y)));
    }
    if (i == 0 || std::abs(p.y) < near) continue;
    const SlicePoint& o = out.slice[i - 1];
    out.max_boundary_slope = std::max(out.max_boundary_slope, std::abs((q.value - o.value) / (q.y - o.y)));
  }

  const int M = std::max(config.line_samples, 2);
  std::vector<double> xs(static_cast<std::size_t>(M)), vs(static_cast<std::size_t>(M));
  for (int k = 0; k < M; ++k) {
    xs[k] = -1.0 + 2.0 * (k + 0.5) / M;
    vs[k] = sample_at(sp, sol, Point(xs[k], 0.0));
  }
  double mx = 0.0, mv = 0.0;
  for (int k = 0; k < M; ++k) {
    mx += xs[k] / M;
    mv += vs[k] / M;
  }
  double sxx = 0.0, sxv = 0.0, svv = 0.0;
  for (int k = 0; k < M; ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxv += (xs[k] - mx) * (vs[k] - mv);
    svv += (vs[k] - mv) * (vs[k] - mv);
  }
  out.line_slope = sxv / sxx;
  out.line_intercept = mv - out.line_slope * mx;
  out.line_r2 = svv > 0.0 ? sxv * sxv / (sxx * svv) : 1.0;
  return out;
}

ProfileReport riesz_profile_square(const ProfileConfig& config) {
  if (config.s_list.empty()) throw ConfigError("profile: empty s list");
  for (double s : config.s_list) {
    if (!(s > 0.5 && s < 1.0)) throw ConfigError("profile: s must lie in (1/2, 1)");
  }
  if (!(config.cs > 0.0)) throw ConfigError("profile: C_s must be positive");
  const Mesh mesh = graded_square_mesh(config.mesh);
  ProfileReport report;
  report.elements = mesh.num_elements();
  for (double s : config.s_list) report.profiles.push_back(square_profile(mesh, s, config));
  return report;
}

void write_profile_files(const std::string& directory, const ProfileReport& report) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  const auto open = [&](const std::string& name) {
    std::ofstream os(fs::path(directory) / name);
    if (!os) throw ConfigError("cannot write " + (fs::path(directory) / name).string());
    os.precision(12);
    return os;
  };
  std::ofstream summary = open("summary.csv");
  summary << "# elements=" << report.elements << '\n';
  summary << "s,slice_points,max_boundary_slope,max_edge_slope,line_slope,line_intercept,line_r2\n";
  for (const SquareProfile& p : report.profiles) {
    const std::string tag = s_tag(p.s);
    std::ofstream surf = open("surface_s" + tag + ".csv");
    surf << "element,x,y,p1,p1_v0,p1_v1,p1_v2\n";
    for (const ElementSample& es : p.surface) {
      surf << es.element << ',' << es.barycenter[0] << ',' << es.barycenter[1] << ',' << es.value << ','
           << es.vertex_values[0] << ',' << es.vertex_values[1] << ',' << es.vertex_values[2] << '\n';
    }
    std::ofstream slice = open("slice_s" + tag + ".csv");
    slice << "y,p1\n";
    for (const SlicePoint& sp : p.slice) slice << sp.y << ',' << sp.value << '\n';
    summary << p.s << ',' << p.slice.size() << ',' << p.max_boundary_slope << ',' << p.max_edge_slope << ',' << p.line_slope << ','
            << p.line_intercept << ',' << p.line_r2 << '\n';
  }
}

}  // namespace fracldg
