#include "fracldg/mesh_io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "fracldg/error.hpp"

namespace fracldg {

namespace {

// Concatenates the non-comment lines so that tokens can be streamed.
std::istringstream strip_comments(std::string_view text) {
  std::string body;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos && line[first] == '#') continue;
    body += line;
    body += '\n';
  }
  return std::istringstream(body);
}

}  // namespace

Mesh read_mesh(std::string_view text) {
  std::istringstream in = strip_comments(text);
  std::string tag;
  int dim = 0;
  if (!(in >> tag >> dim) || tag != "MESH" || (dim != 1 && dim != 2)) {
    throw StructuralError("read_mesh: malformed header, expected 'MESH 1' or 'MESH 2'");
  }
  long nv = 0;
  long ne = 0;
  if (!(in >> nv >> ne) || nv < 0 || ne <= 0) throw StructuralError("read_mesh: malformed counts line");
  std::vector<Point> verts(static_cast<std::size_t>(nv), Point::Zero());
  for (auto& p : verts) {
    for (int d = 0; d < dim; ++d) {
      if (!(in >> p[d])) throw StructuralError("read_mesh: truncated coordinate block");
    }
  }
  std::vector<std::array<int, 3>> elems(static_cast<std::size_t>(ne), {-1, -1, -1});
  for (std::size_t e = 0; e < elems.size(); ++e) {
    for (int i = 0; i <= dim; ++i) {
      long idx = 0;
      if (!(in >> idx)) throw StructuralError("read_mesh: truncated element block");
      if (idx < 0 || idx >= nv) {
        throw StructuralError("read_mesh: element " + std::to_string(e) + ": index out of range (" +
                              std::to_string(idx) + " of " + std::to_string(nv) + ")");
      }
      elems[e][static_cast<std::size_t>(i)] = static_cast<int>(idx);
    }
    const auto& el = elems[e];
    if (el[0] == el[1] || (dim == 2 && (el[1] == el[2] || el[0] == el[2]))) {
      throw StructuralError("read_mesh: element " + std::to_string(e) + ": degenerate element");
    }
  }
  return Mesh(dim, std::move(verts), std::move(elems));
}

std::string write_mesh(const Mesh& mesh) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "MESH " << mesh.dim() << '\n' << mesh.num_vertices() << ' ' << mesh.num_elements() << '\n';
  for (const Point& p : mesh.vertices()) {
    out << p[0];
    if (mesh.dim() == 2) out << ' ' << p[1];
    out << '\n';
  }
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto el = mesh.element(e);
    for (std::size_t i = 0; i < el.size(); ++i) out << (i ? " " : "") << el[i];
    out << '\n';
  }
  return out.str();
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("read_mesh_file: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_mesh(buf.str());
}

void write_mesh_file(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw StructuralError("write_mesh_file: cannot open " + path);
  out << write_mesh(mesh);
}

}  // namespace fracldg
