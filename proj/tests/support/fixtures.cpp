#include "fixtures.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace fracldg::fixture {

Renumbered renumber(const Mesh& mesh, unsigned seed) {
  std::mt19937 rng(seed);
  const auto shuffled = [&](int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
  };
  const std::vector<int> vmap = shuffled(mesh.num_vertices());
  Renumbered out;
  out.element_map = shuffled(mesh.num_elements());

  std::vector<Point> vertices(vmap.size());
  for (std::size_t v = 0; v < vmap.size(); ++v) vertices[static_cast<std::size_t>(vmap[v])] = mesh.vertex(static_cast<int>(v));
  const int k = mesh.vertices_per_element();
  std::vector<std::array<int, 3>> elements(static_cast<std::size_t>(mesh.num_elements()), {-1, -1, -1});
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto v = mesh.element(e);
    auto& t = elements[static_cast<std::size_t>(out.element_map[static_cast<std::size_t>(e)])];
    const int r = mesh.dim() == 2 ? e % 3 : 0;
    for (int i = 0; i < k; ++i) t[static_cast<std::size_t>(i)] = vmap[static_cast<std::size_t>(v[(i + r) % k])];
  }
  out.mesh = Mesh(mesh.dim(), std::move(vertices), std::move(elements));
  return out;
}

}  // namespace fracldg::fixture
