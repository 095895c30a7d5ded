#pragma once

#include <vector>

#include "fracldg/mesh.hpp"

namespace fracldg::fixture {

/// The same partition with elements and vertices relabelled by seeded random
/// permutations and each triangle's vertex list rotated. `element_map[e]`
/// is the new id of element e.
struct Renumbered {
  Mesh mesh;
  std::vector<int> element_map;
};

Renumbered renumber(const Mesh& mesh, unsigned seed);

}  // namespace fracldg::fixture
