#pragma once

#include <string>
#include <string_view>

#include "fracldg/mesh.hpp"

namespace fracldg {

/// Plain-text mesh format:
///
///   MESH <dim>
///   <nv> <ne>
///   <nv lines of dim coordinates>
///   <ne lines of dim+1 zero-based vertex indices>
///
/// Lines starting with '#' are ignored. Errors raise StructuralError.
Mesh read_mesh(std::string_view text);
std::string write_mesh(const Mesh& mesh);

Mesh read_mesh_file(const std::string& path);
void write_mesh_file(const Mesh& mesh, const std::string& path);

}  // namespace fracldg
