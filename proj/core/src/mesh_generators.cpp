#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fracldg/error.hpp"
#include "fracldg/mesh.hpp"

namespace fracldg {

namespace {

Mesh interval_from_nodes(const std::vector<double>& nodes) {
  std::vector<Point> verts;
  verts.reserve(nodes.size());
  for (double x : nodes) verts.emplace_back(x, 0.0);
  std::vector<std::array<int, 3>> elems;
  elems.reserve(nodes.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    elems.push_back({static_cast<int>(i), static_cast<int>(i + 1), -1});
  }
  return Mesh(1, std::move(verts), std::move(elems));
}

double graded_radius(int k, int J, double mu) {
  return 1.0 - std::pow(static_cast<double>(J - k) / J, mu);
}

}  // namespace

Mesh uniform_interval_mesh(int J) {
  if (J < 2 || J % 2 != 0) {
    throw ConfigError("uniform_interval_mesh: J must be even and >= 2, got " + std::to_string(J));
  }
  std::vector<double> nodes(static_cast<std::size_t>(J) + 1);
  for (int i = 0; i <= J; ++i) nodes[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / J;
  nodes[static_cast<std::size_t>(J / 2)] = 0.0;
  nodes.back() = 1.0;
  return interval_from_nodes(nodes);
}

Mesh graded_interval_mesh(int J, double mu) {
  if (J < 2) throw ConfigError("graded_interval_mesh: J must be >= 2");
  if (!(mu >= 1.0)) throw ConfigError("graded_interval_mesh: mu must be >= 1");
  std::vector<double> nodes(2 * static_cast<std::size_t>(J) + 1);
  for (int j = 0; j <= J; ++j) {
    const double r = j == J ? 1.0 : graded_radius(j, J, mu);
    nodes[static_cast<std::size_t>(J + j)] = r;
    nodes[static_cast<std::size_t>(J - j)] = -r;
  }
  return interval_from_nodes(nodes);
}

Mesh disk_mesh(int J, double mu, const QualityLimits& limits) {
  if (J < 2) throw ConfigError("disk_mesh: J must be >= 2");
  if (!(mu >= 1.0)) throw ConfigError("disk_mesh: mu must be >= 1");

  std::vector<double> radius(static_cast<std::size_t>(J) + 1);
  for (int k = 0; k <= J; ++k) radius[static_cast<std::size_t>(k)] = k == J ? 1.0 : graded_radius(k, J, mu);

  std::vector<Point> verts;
  verts.emplace_back(0.0, 0.0);
  // ring_start[k] .. ring_start[k] + ring_count[k] - 1 are the vertices of ring k >= 1.
  std::vector<int> ring_start(static_cast<std::size_t>(J) + 1, 0);
  std::vector<int> ring_count(static_cast<std::size_t>(J) + 1, 1);
  std::vector<double> ring_phase(static_cast<std::size_t>(J) + 1, 0.0);
  for (int k = 1; k <= J; ++k) {
    const double r = radius[static_cast<std::size_t>(k)];
    // Target spacing: mean height of the two layers meeting at ring k.
    double dr = r - radius[static_cast<std::size_t>(k - 1)];
    if (k < J) dr = 0.5 * (dr + radius[static_cast<std::size_t>(k + 1)] - r);
    const int n = std::max(6, static_cast<int>(std::lround(2.0 * std::numbers::pi * r / dr)));
    ring_start[static_cast<std::size_t>(k)] = static_cast<int>(verts.size());
    ring_count[static_cast<std::size_t>(k)] = n;
    const double phase = (k % 2 == 0 ? 0.5 : 0.0) * 2.0 * std::numbers::pi / n;
    ring_phase[static_cast<std::size_t>(k)] = phase;
    for (int j = 0; j < n; ++j) {
      const double t = phase + 2.0 * std::numbers::pi * j / n;
      verts.emplace_back(r * std::cos(t), r * std::sin(t));
    }
  }

  std::vector<std::array<int, 3>> elems;
  const int n1 = ring_count[1];
  for (int j = 0; j < n1; ++j) elems.push_back({0, ring_start[1] + j, ring_start[1] + (j + 1) % n1});

  // Zipper between consecutive rings: walk both in angle order, always
  // advancing the ring whose next point comes first.
  for (int k = 2; k <= J; ++k) {
    const int m = ring_count[static_cast<std::size_t>(k - 1)];
    const int p = ring_count[static_cast<std::size_t>(k)];
    const double pa = ring_phase[static_cast<std::size_t>(k - 1)];
    const double pb = ring_phase[static_cast<std::size_t>(k)];
    auto inner_angle = [&](int i) { return pa + 2.0 * std::numbers::pi * i / m; };
    // Outer point nearest (from below) to the first inner point.
    int j0 = static_cast<int>(std::floor((pa - pb) * p / (2.0 * std::numbers::pi)));
    auto outer_angle = [&](int j) { return pb + 2.0 * std::numbers::pi * j / p; };
    auto inner_id = [&](int i) { return ring_start[static_cast<std::size_t>(k - 1)] + ((i % m) + m) % m; };
    auto outer_id = [&](int j) { return ring_start[static_cast<std::size_t>(k)] + ((j % p) + p) % p; };
    int i = 0;
    int j = j0;
    while (i < m || j < j0 + p) {
      const bool advance_inner =
          j == j0 + p || (i < m && inner_angle(i + 1) <= outer_angle(j + 1));
      if (advance_inner) {
        elems.push_back({inner_id(i), inner_id(i + 1), outer_id(j)});
        ++i;
      } else {
        elems.push_back({inner_id(i), outer_id(j + 1), outer_id(j)});
        ++j;
      }
    }
  }

  Mesh mesh(2, std::move(verts), std::move(elems));
  validate_mesh(mesh, limits);
  return mesh;
}

Mesh square_two_triangle_mesh() {
  std::vector<Point> verts{{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}};
  std::vector<std::array<int, 3>> elems{{1, 2, 0}, {3, 0, 2}};
  return Mesh(2, std::move(verts), std::move(elems), {0, 0});
}

}  // namespace fracldg
