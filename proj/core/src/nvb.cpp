#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "fracldg/error.hpp"
#include "fracldg/mesh.hpp"

namespace fracldg {

namespace {

using Edge = std::pair<int, int>;

Edge make_edge(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// Vertex triple rotated so that the refinement edge is (t[1], t[2]).
std::array<int, 3> canonical(const Mesh& mesh, int e) {
  const auto& el = mesh.elements()[static_cast<std::size_t>(e)];
  const int r = mesh.refinement_edge(e);
  return {el[static_cast<std::size_t>(r)], el[static_cast<std::size_t>((r + 1) % 3)],
          el[static_cast<std::size_t>((r + 2) % 3)]};
}

struct Bisector {
  std::vector<Point>& verts;
  const std::set<Edge>& marked;
  std::map<Edge, int> midpoint;
  std::vector<std::array<int, 3>> out;

  int midpoint_of(int a, int b) {
    auto [it, inserted] = midpoint.try_emplace(make_edge(a, b), static_cast<int>(verts.size()));
    if (inserted) {
      const Point m = 0.5 * (verts[static_cast<std::size_t>(a)] + verts[static_cast<std::size_t>(b)]);
      verts.push_back(m);
    }
    return it->second;
  }

  void refine(const std::array<int, 3>& t) {
    if (!marked.count(make_edge(t[1], t[2]))) {
      out.push_back(t);
      return;
    }
    const int m = midpoint_of(t[1], t[2]);
    refine({m, t[0], t[1]});
    refine({m, t[2], t[0]});
  }
};

}  // namespace

Mesh nvb_refine(const Mesh& mesh, std::span<const int> marked_elements) {
  if (mesh.dim() != 2) throw StructuralError("nvb_refine: requires a triangle mesh");
  const int ne = mesh.num_elements();
  std::vector<std::array<int, 3>> tris(static_cast<std::size_t>(ne));
  for (int e = 0; e < ne; ++e) tris[static_cast<std::size_t>(e)] = canonical(mesh, e);

  std::set<Edge> marked;
  for (int e : marked_elements) {
    if (e < 0 || e >= ne) throw StructuralError("nvb_refine: marked element index out of range");
    const auto& t = tris[static_cast<std::size_t>(e)];
    marked.insert(make_edge(t[1], t[2]));
  }

  // Closure: a triangle with any marked edge must have its refinement edge marked.
  bool changed = !marked.empty();
  while (changed) {
    changed = false;
    for (const auto& t : tris) {
      const Edge ref = make_edge(t[1], t[2]);
      if (marked.count(ref)) continue;
      if (marked.count(make_edge(t[0], t[1])) || marked.count(make_edge(t[2], t[0]))) {
        marked.insert(ref);
        changed = true;
      }
    }
  }

  std::vector<Point> verts = mesh.vertices();
  Bisector b{verts, marked, {}, {}};
  b.out.reserve(tris.size() * 2);
  for (const auto& t : tris) b.refine(t);
  std::vector<int> ref(b.out.size(), 0);
  return Mesh(2, std::move(verts), std::move(b.out), std::move(ref));
}

Mesh nvb_uniform_refine(const Mesh& mesh, int times) {
  if (times < 0) throw ConfigError("nvb_uniform_refine: times must be >= 0");
  Mesh out = mesh;
  for (int r = 0; r < times; ++r) {
    std::vector<int> all(static_cast<std::size_t>(out.num_elements()));
    for (int e = 0; e < out.num_elements(); ++e) all[static_cast<std::size_t>(e)] = e;
    out = nvb_refine(out, all);
  }
  return out;
}

std::vector<int> mark_graded_square(const Mesh& mesh, double theta, double mu) {
  const double N = 3.0 * mesh.num_elements();
  const double scale = theta / N * std::log(N);
  const double exponent = 2.0 * (mu - 1.0) / mu;
  std::vector<int> marked;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Point x = mesh.barycenter(e);
    const double d = 1.0 - std::max(std::abs(x[0]), std::abs(x[1]));
    if (mesh.measure(e) > scale * std::pow(d, exponent)) marked.push_back(e);
  }
  return marked;
}

Mesh graded_square_mesh(const SquareGradingOptions& options) {
  if (!(options.theta > 0.0)) throw ConfigError("graded_square_mesh: theta must be positive");
  if (!(options.mu >= 1.0)) throw ConfigError("graded_square_mesh: mu must be >= 1");
  if (options.levels < 0 || options.initial_bisections < 0) {
    throw ConfigError("graded_square_mesh: levels and initial_bisections must be >= 0");
  }
  Mesh mesh = nvb_uniform_refine(square_two_triangle_mesh(), options.initial_bisections);
  for (int level = 0; level < options.levels; ++level) {
    const std::vector<int> marked = mark_graded_square(mesh, options.theta, options.mu);
    if (marked.empty()) break;
    mesh = nvb_refine(mesh, marked);
  }
  return mesh;
}

}  // namespace fracldg
