#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "fracldg/error.hpp"
#include "fracldg/experiment.hpp"
#include "fracldg/mesh_io.hpp"
#include "fracldg/profile.hpp"

namespace {

constexpr int kConfigExit = 2;
constexpr int kNumericalExit = 3;

struct RunArgs {
  int dim = 1;
  std::string domain = "interval";
  double s = 0.75;
  std::string mesh = "uniform";
  std::string mu = "auto";
  int levels = 6;
  int j0 = 0;
  std::vector<int> j_list;
  std::string q_space = "auto";
  double c11_scale = 1.0;
  std::string cs = "auto";
  double theta = 0.0;
  int quad_order = 0;
  int quad_scale = 1;
  int dense_limit = 20000;
  std::string out;
  bool quiet = false;
};

struct MeshArgs {
  int dim = 1;
  std::string domain = "interval";
  std::string mesh = "uniform";
  std::string mu = "auto";
  int j = 16;
  double s = 0.75;
  std::string out;
};

struct ProfileArgs {
  std::vector<double> s_list{0.6, 0.7, 0.8, 0.9};
  int bisections = 11;
  int initial = 10;
  double theta = 24.0;
  double mu = 2.0;
  std::string out = "profile";
};

template <class E>
E parse_enum(const std::string& value, const std::map<std::string, E>& names, const char* what) {
  const auto it = names.find(value);
  if (it == names.end()) throw fracldg::ConfigError(std::string("unknown ") + what + " '" + value + "'");
  return it->second;
}

double parse_real(const std::string& value, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw fracldg::ConfigError(std::string("invalid ") + what + " '" + value + "'");
}

const std::map<std::string, fracldg::Domain> kDomains{
    {"interval", fracldg::Domain::interval}, {"disk", fracldg::Domain::disk}, {"square", fracldg::Domain::square}};
const std::map<std::string, fracldg::MeshKind> kMeshKinds{{"uniform", fracldg::MeshKind::uniform},
                                                          {"graded", fracldg::MeshKind::graded}};

fracldg::ExperimentConfig make_config(const RunArgs& a) {
  fracldg::ExperimentConfig c;
  c.dim = a.dim;
  c.domain = parse_enum(a.domain, kDomains, "domain");
  c.s = a.s;
  c.mesh = parse_enum(a.mesh, kMeshKinds, "mesh kind");
  if (a.mu != "auto") c.mu = parse_real(a.mu, "mu");
  c.levels = a.levels;
  if (a.j0 > 0) c.j0 = a.j0;
  c.j_list = a.j_list;
  if (a.q_space != "auto") {
    c.q_space = parse_enum(a.q_space, std::map<std::string, fracldg::QSpace>{{"p0", fracldg::QSpace::p0},
                                                                            {"p1", fracldg::QSpace::p1}},
                           "q-space");
  }
  c.flux.c11_scale = a.c11_scale;
  c.flux.theta = a.theta;
  if (a.cs != "auto") {
    c.flux.cs_rule = fracldg::FluxParams::CsRule::constant;
    c.flux.cs_value = parse_real(a.cs, "cs");
  }
  if (a.quad_order > 0) c.quad.singular = a.quad_order;
  if (a.quad_scale < 1) throw fracldg::ConfigError("quad-scale must be >= 1");
  if (a.quad_scale > 1) {
    c.quad = c.quad.scaled(a.quad_scale);
    c.error_quad.degree *= a.quad_scale;
  }
  c.solve.dense_limit = a.dense_limit;
  return c;
}

int cmd_run(const RunArgs& a) {
  const fracldg::ExperimentConfig config = make_config(a);
  for (const auto& w : fracldg::validate_config(config)) std::cerr << "warning: " << w << '\n';
  const auto report = fracldg::run_experiment(config, [&](const fracldg::LevelResult& l) {
    if (a.quiet) return;
    // ball_gap: (f, u) over the unit ball minus its value over the meshed
    // domain, i.e. the polygonal boundary defect on the disk.
    std::fprintf(stderr,
                 "J=%d elements=%d N=%d h=%.4e energy=%.6e l2=%.6e ball_gap=%.2e solve=%s res=%.1e time=%.1fs\n",
                 l.j, l.elements, l.N, l.h, l.energy_err, l.l2_err, l.terms.ball_gap, l.diagnostics.method.c_str(),
                 l.diagnostics.relative_residual, l.seconds);
  });
  if (a.out.empty() || a.out == "-") {
    fracldg::write_report_csv(std::cout, config, report);
  } else {
    std::ofstream os(a.out);
    if (!os) throw fracldg::ConfigError("cannot write " + a.out);
    fracldg::write_report_csv(os, config, report);
  }
  if (!report.complete) {
    std::cerr << "error: " << report.failure << '\n';
    return kNumericalExit;
  }
  return 0;
}

int cmd_mesh(const MeshArgs& a) {
  fracldg::ExperimentConfig c;
  c.dim = a.dim;
  c.domain = parse_enum(a.domain, kDomains, "domain");
  c.mesh = parse_enum(a.mesh, kMeshKinds, "mesh kind");
  c.s = a.s;
  if (a.mu != "auto") c.mu = parse_real(a.mu, "mu");
  c.j_list = {a.j};
  if (c.domain != fracldg::Domain::square) fracldg::validate_config(c);
  const fracldg::Mesh mesh = fracldg::build_mesh(c, a.j);
  if (a.out.empty() || a.out == "-") {
    std::cout << fracldg::write_mesh(mesh);
  } else {
    fracldg::write_mesh_file(mesh, a.out);
  }
  std::cerr << "elements=" << mesh.num_elements() << " vertices=" << mesh.num_vertices() << '\n';
  return 0;
}

int cmd_profile(const ProfileArgs& a) {
  fracldg::ProfileConfig c;
  c.s_list = a.s_list;
  c.mesh.levels = a.bisections;
  c.mesh.initial_bisections = a.initial;
  c.mesh.theta = a.theta;
  c.mesh.mu = a.mu;
  const auto report = fracldg::riesz_profile_square(c);
  fracldg::write_profile_files(a.out, report);
  std::fprintf(stderr, "elements=%d\n", report.elements);
  for (const auto& p : report.profiles) {
    std::fprintf(stderr, "s=%.3g slice_points=%zu max_boundary_slope=%.6e line_r2=%.6f\n", p.s, p.slice.size(),
                 p.max_boundary_slope, p.line_r2);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LDG solver for the integral fractional Laplacian"};
  app.require_subcommand(1);

  RunArgs run;
  auto* r = app.add_subcommand("run", "convergence study on the unit ball with f = 1");
  r->add_option("--dim", run.dim, "spatial dimension (1 or 2)");
  r->add_option("--domain", run.domain, "interval | disk");
  r->add_option("--s", run.s, "fractional order in (1/2, 1)");
  r->add_option("--mesh", run.mesh, "uniform | graded");
  r->add_option("--mu", run.mu, "grading parameter or 'auto'");
  r->add_option("--levels", run.levels, "number of refinement levels");
  r->add_option("--j0", run.j0, "mesh parameter of the coarsest level");
  r->add_option("--j-list", run.j_list, "explicit mesh parameters")->delimiter(',');
  r->add_option("--q-space", run.q_space, "p0 | p1 | auto");
  r->add_option("--c11-scale", run.c11_scale, "C11 = scale * h_F^{1-2s}");
  r->add_option("--cs", run.cs, "stabilization constant or 'auto'");
  r->add_option("--theta", run.theta, "exponent of the 2D C_s = h^{2 theta} rule");
  r->add_option("--quad-order", run.quad_order, "Gauss order for singular pairs");
  r->add_option("--quad-scale", run.quad_scale, "multiply every quadrature order");
  r->add_option("--dense-limit", run.dense_limit, "largest system solved by dense Cholesky");
  r->add_option("--out", run.out, "output CSV (default: stdout)");
  r->add_flag("--quiet", run.quiet, "no per-level progress on stderr");

  MeshArgs mesh;
  auto* m = app.add_subcommand("mesh", "write a mesh file");
  m->add_option("--dim", mesh.dim, "spatial dimension (1 or 2)");
  m->add_option("--domain", mesh.domain, "interval | disk | square");
  m->add_option("--mesh", mesh.mesh, "uniform | graded");
  m->add_option("--mu", mesh.mu, "grading parameter or 'auto'");
  m->add_option("--s", mesh.s, "fractional order (sets the automatic 1D grading)");
  m->add_option("--j", mesh.j, "mesh parameter (marking rounds for the square)");
  m->add_option("--out", mesh.out, "output file (default: stdout)");

  ProfileArgs prof;
  auto* p = app.add_subcommand("profile-square", "first component of p_h on the graded square");
  p->add_option("--s-list", prof.s_list, "fractional orders to profile")->delimiter(',');
  p->add_option("--bisections", prof.bisections, "marking and bisection rounds");
  p->add_option("--initial-bisections", prof.initial, "uniform bisections before marking");
  p->add_option("--theta", prof.theta, "marking threshold factor");
  p->add_option("--mu", prof.mu, "distance exponent of the marking rule");
  p->add_option("--out", prof.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*r) return cmd_run(run);
    if (*m) return cmd_mesh(mesh);
    if (*p) return cmd_profile(prof);
  } catch (const fracldg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalExit;
  }
  return 0;
}
