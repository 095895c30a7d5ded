#include "fracldg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <utility>

#include "fracldg/error.hpp"

namespace fracldg {

namespace {

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b - a)[0] * (c - a)[1] - (b - a)[1] * (c - a)[0]);
}

std::string element_label(int e) { return "element " + std::to_string(e); }

}  // namespace

Mesh::Mesh(int dim, std::vector<Point> vertices, std::vector<std::array<int, 3>> elements,
           std::vector<int> refinement_edge)
    : dim_(dim), vertices_(std::move(vertices)), elements_(std::move(elements)),
      refinement_edge_(std::move(refinement_edge)) {
  if (dim_ != 1 && dim_ != 2) throw StructuralError("mesh: dimension must be 1 or 2");
  if (elements_.empty()) throw StructuralError("mesh: no elements");
  if (refinement_edge_.empty()) refinement_edge_.assign(elements_.size(), 0);
  if (refinement_edge_.size() != elements_.size()) {
    throw StructuralError("mesh: refinement_edge size does not match element count");
  }
  const int nv = num_vertices();
  const int k = dim_ + 1;
  measures_.resize(elements_.size());
  diameters_.resize(elements_.size());
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    auto& el = elements_[e];
    for (int i = 0; i < k; ++i) {
      if (el[static_cast<std::size_t>(i)] < 0 || el[static_cast<std::size_t>(i)] >= nv) {
        throw StructuralError("mesh: " + element_label(static_cast<int>(e)) + ": index out of range");
      }
    }
    if (dim_ == 1) {
      el[2] = -1;
      double len = vertices_[static_cast<std::size_t>(el[1])][0] - vertices_[static_cast<std::size_t>(el[0])][0];
      if (len < 0.0) {
        std::swap(el[0], el[1]);
        len = -len;
      }
      if (!(len > 0.0)) throw StructuralError("mesh: " + element_label(static_cast<int>(e)) + ": degenerate element");
      measures_[e] = len;
      diameters_[e] = len;
    } else {
      if (el[0] == el[1] || el[1] == el[2] || el[0] == el[2]) {
        throw StructuralError("mesh: " + element_label(static_cast<int>(e)) + ": degenerate element");
      }
      const Point& a = vertices_[static_cast<std::size_t>(el[0])];
      const Point& b = vertices_[static_cast<std::size_t>(el[1])];
      const Point& c = vertices_[static_cast<std::size_t>(el[2])];
      double area = signed_area(a, b, c);
      if (area < 0.0) {
        // Swapping vertices 1 and 2 keeps local face 0 in place.
        std::swap(el[1], el[2]);
        int& r = refinement_edge_[e];
        if (r == 1) r = 2; else if (r == 2) r = 1;
        area = -area;
      }
      if (!(area > 0.0)) throw StructuralError("mesh: " + element_label(static_cast<int>(e)) + ": degenerate element");
      measures_[e] = area;
      diameters_[e] = std::max({(a - b).norm(), (b - c).norm(), (c - a).norm()});
    }
  }
  faces_ = enumerate_faces(dim_, vertices_, elements_, element_faces_);
  boundary_vertex_.assign(vertices_.size(), 0);
  for (const Face& f : faces_) {
    if (!f.is_boundary()) continue;
    for (int v : f.vertices) {
      if (v >= 0) boundary_vertex_[static_cast<std::size_t>(v)] = 1;
    }
  }
}

Point Mesh::barycenter(int e) const {
  Point c = Point::Zero();
  for (int v : element(e)) c += vertices_[static_cast<std::size_t>(v)];
  return c / (dim_ + 1);
}

bool Mesh::touches_boundary(int e) const {
  for (int v : element(e)) {
    if (boundary_vertex_[static_cast<std::size_t>(v)]) return true;
  }
  return false;
}

double Mesh::total_measure() const {
  double sum = 0.0;
  for (double m : measures_) sum += m;
  return sum;
}

std::vector<Face> enumerate_faces(int dim, const std::vector<Point>& vertices,
                                  const std::vector<std::array<int, 3>>& elements,
                                  std::vector<std::array<int, 3>>& element_faces) {
  std::vector<Face> faces;
  element_faces.assign(elements.size(), {-1, -1, -1});
  std::map<std::pair<int, int>, int> lookup;
  const int k = dim + 1;
  for (std::size_t e = 0; e < elements.size(); ++e) {
    const auto& el = elements[e];
    for (int i = 0; i < k; ++i) {
      std::pair<int, int> key;
      std::array<int, 2> verts{-1, -1};
      if (dim == 1) {
        verts[0] = el[static_cast<std::size_t>(i)];
        key = {verts[0], -1};
      } else {
        verts[0] = el[static_cast<std::size_t>((i + 1) % 3)];
        verts[1] = el[static_cast<std::size_t>((i + 2) % 3)];
        key = {std::min(verts[0], verts[1]), std::max(verts[0], verts[1])};
      }
      auto [it, inserted] = lookup.try_emplace(key, static_cast<int>(faces.size()));
      if (inserted) {
        Face f;
        f.vertices = verts;
        f.elements = {static_cast<int>(e), -1};
        f.local = {i, -1};
        if (dim == 1) {
          f.normal = Point(i == 0 ? -1.0 : 1.0, 0.0);
          f.measure = 1.0;
        } else {
          const Point t = vertices[static_cast<std::size_t>(verts[1])] - vertices[static_cast<std::size_t>(verts[0])];
          f.measure = t.norm();
          f.normal = Point(t[1], -t[0]) / f.measure;
        }
        faces.push_back(f);
      } else {
        Face& f = faces[static_cast<std::size_t>(it->second)];
        if (f.elements[1] != -1) {
          std::ostringstream msg;
          msg << "non-conforming mesh: facet (" << key.first << ", " << key.second
              << ") is shared by more than two elements";
          throw StructuralError(msg.str());
        }
        f.elements[1] = static_cast<int>(e);
        f.local[1] = i;
      }
      element_faces[e][static_cast<std::size_t>(i)] = it->second;
    }
  }
  for (Face& f : faces) {
    f.kind = f.elements[1] < 0 ? FaceKind::boundary : FaceKind::interior;
    if (dim == 2) {
      f.size = f.measure;
    } else {
      auto len = [&](int e) {
        const auto& el = elements[static_cast<std::size_t>(e)];
        return std::abs(vertices[static_cast<std::size_t>(el[1])][0] - vertices[static_cast<std::size_t>(el[0])][0]);
      };
      f.size = f.is_boundary() ? len(f.elements[0]) : 0.5 * (len(f.elements[0]) + len(f.elements[1]));
    }
  }
  return faces;
}

double inscribed_diameter(const Mesh& mesh, int e) {
  if (mesh.dim() == 1) return mesh.measure(e);
  const Point& a = mesh.element_vertex(e, 0);
  const Point& b = mesh.element_vertex(e, 1);
  const Point& c = mesh.element_vertex(e, 2);
  const double perimeter = (a - b).norm() + (b - c).norm() + (c - a).norm();
  return 4.0 * mesh.measure(e) / perimeter;
}

MeshQuality assess_quality(const Mesh& mesh) {
  MeshQuality q;
  q.min_measure = std::numeric_limits<double>::infinity();
  q.h_min = std::numeric_limits<double>::infinity();
  std::vector<double> vmin(static_cast<std::size_t>(mesh.num_vertices()), std::numeric_limits<double>::infinity());
  std::vector<double> vmax(static_cast<std::size_t>(mesh.num_vertices()), 0.0);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double h = mesh.diameter(e);
    q.min_measure = std::min(q.min_measure, mesh.measure(e));
    q.h_min = std::min(q.h_min, h);
    q.h_max = std::max(q.h_max, h);
    q.max_shape_ratio = std::max(q.max_shape_ratio, h / inscribed_diameter(mesh, e));
    if (mesh.dim() == 2) {
      for (int i = 0; i < 3; ++i) {
        const Point u = mesh.element_vertex(e, (i + 1) % 3) - mesh.element_vertex(e, i);
        const Point w = mesh.element_vertex(e, (i + 2) % 3) - mesh.element_vertex(e, i);
        const double cosang = std::clamp(u.dot(w) / (u.norm() * w.norm()), -1.0, 1.0);
        q.min_angle_deg = std::min(q.min_angle_deg, std::acos(cosang) * 180.0 / std::numbers::pi);
      }
    }
    for (int v : mesh.element(e)) {
      vmin[static_cast<std::size_t>(v)] = std::min(vmin[static_cast<std::size_t>(v)], h);
      vmax[static_cast<std::size_t>(v)] = std::max(vmax[static_cast<std::size_t>(v)], h);
    }
  }
  for (std::size_t v = 0; v < vmin.size(); ++v) {
    if (vmax[v] > 0.0) q.max_neighbor_ratio = std::max(q.max_neighbor_ratio, vmax[v] / vmin[v]);
  }
  return q;
}

void validate_mesh(const Mesh& mesh, const QualityLimits& limits) {
  const MeshQuality q = assess_quality(mesh);
  std::ostringstream msg;
  if (!(q.min_measure > 0.0)) {
    msg << "mesh validation: non-positive element measure " << q.min_measure;
  } else if (q.max_shape_ratio > limits.max_shape_ratio) {
    msg << "mesh validation: shape ratio h/rho = " << q.max_shape_ratio << " exceeds " << limits.max_shape_ratio;
  } else if (q.max_neighbor_ratio > limits.max_neighbor_ratio) {
    msg << "mesh validation: neighbor size ratio " << q.max_neighbor_ratio << " exceeds "
        << limits.max_neighbor_ratio;
  } else if (mesh.dim() == 2 && q.min_angle_deg < limits.min_angle_deg) {
    msg << "mesh validation: minimum angle " << q.min_angle_deg << " deg below " << limits.min_angle_deg;
  } else {
    return;
  }
  throw StructuralError(msg.str());
}

}  // namespace fracldg
