#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace fracldg {

using Point = Eigen::Vector2d;

enum class FaceKind { interior, boundary };

/// A facet of the partition: a point in 1D, an edge in 2D.
struct Face {
  /// Vertex ids; vertices[1] is -1 in 1D.
  std::array<int, 2> vertices{-1, -1};
  /// Side elements; elements[1] is -1 on boundary faces.
  std::array<int, 2> elements{-1, -1};
  /// Local face number of this face inside each side element.
  std::array<int, 2> local{-1, -1};
  /// Unit normal, outward from elements[0].
  Point normal = Point::Zero();
  /// |F|: edge length in 2D, 1 in 1D.
  double measure = 0.0;
  /// h_F: edge length in 2D; mean size of the adjacent cells in 1D.
  double size = 0.0;
  FaceKind kind = FaceKind::boundary;

  bool is_boundary() const noexcept { return kind == FaceKind::boundary; }
};

/// Conforming simplicial partition of an interval (dim 1) or a polygon (dim 2).
///
/// Elements are stored as vertex triples; 1D elements use the first two
/// entries. Triangles are kept counter-clockwise and segments left-to-right
/// (the constructor reorients if needed). Local face i of a triangle is the
/// edge opposite vertex i; local face i of a segment is vertex i.
/// `refinement_edge(e)` is the local index of the newest-vertex-bisection
/// edge (defaults to 0, the edge opposite the first vertex).
///
/// A Mesh is immutable once built; all derived data (faces, measures,
/// diameters) is computed by the constructor.
class Mesh {
 public:
  Mesh() = default;
  Mesh(int dim, std::vector<Point> vertices, std::vector<std::array<int, 3>> elements,
       std::vector<int> refinement_edge = {});

  int dim() const noexcept { return dim_; }
  int vertices_per_element() const noexcept { return dim_ + 1; }
  int num_vertices() const noexcept { return static_cast<int>(vertices_.size()); }
  int num_elements() const noexcept { return static_cast<int>(elements_.size()); }
  int num_faces() const noexcept { return static_cast<int>(faces_.size()); }

  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  const Point& vertex(int v) const { return vertices_[static_cast<std::size_t>(v)]; }
  const std::vector<std::array<int, 3>>& elements() const noexcept { return elements_; }
  std::span<const int> element(int e) const {
    return {elements_[static_cast<std::size_t>(e)].data(), static_cast<std::size_t>(dim_ + 1)};
  }
  const Point& element_vertex(int e, int local) const {
    return vertices_[static_cast<std::size_t>(elements_[static_cast<std::size_t>(e)][static_cast<std::size_t>(local)])];
  }

  const std::vector<Face>& faces() const noexcept { return faces_; }
  const Face& face(int f) const { return faces_[static_cast<std::size_t>(f)]; }
  /// Face id of each local face of element e.
  const std::array<int, 3>& element_faces(int e) const { return element_faces_[static_cast<std::size_t>(e)]; }

  double measure(int e) const { return measures_[static_cast<std::size_t>(e)]; }
  double diameter(int e) const { return diameters_[static_cast<std::size_t>(e)]; }
  const std::vector<double>& diameters() const noexcept { return diameters_; }
  Point barycenter(int e) const;
  int refinement_edge(int e) const { return refinement_edge_[static_cast<std::size_t>(e)]; }
  const std::vector<int>& refinement_edges() const noexcept { return refinement_edge_; }

  bool is_boundary_vertex(int v) const { return boundary_vertex_[static_cast<std::size_t>(v)] != 0; }
  /// True if some vertex of e lies on the boundary.
  bool touches_boundary(int e) const;
  double total_measure() const;

 private:
  int dim_ = 0;
  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> elements_;
  std::vector<int> refinement_edge_;
  std::vector<Face> faces_;
  std::vector<std::array<int, 3>> element_faces_;
  std::vector<double> measures_;
  std::vector<double> diameters_;
  std::vector<char> boundary_vertex_;
};

/// Builds the face list of a partition. Interior faces carry both side
/// elements with the normal pointing from side 0 to side 1. Throws
/// StructuralError if a facet is shared by more than two elements.
/// `element_faces` receives the face id of every local face.
std::vector<Face> enumerate_faces(int dim, const std::vector<Point>& vertices,
                                  const std::vector<std::array<int, 3>>& elements,
                                  std::vector<std::array<int, 3>>& element_faces);

/// Inscribed-ball diameter rho_T.
double inscribed_diameter(const Mesh& mesh, int e);

struct QualityLimits {
  double max_shape_ratio = 10.0;     ///< sup h_T / rho_T
  double max_neighbor_ratio = 10.0;  ///< lambda: h_T <= lambda h_T' for touching T, T'
  double min_angle_deg = 15.0;       ///< triangles only
};

struct MeshQuality {
  double min_measure = 0.0;
  double max_shape_ratio = 0.0;
  double min_angle_deg = 180.0;
  double max_neighbor_ratio = 1.0;
  double h_min = 0.0;
  double h_max = 0.0;
};

MeshQuality assess_quality(const Mesh& mesh);

/// Throws StructuralError with a diagnostic naming the violated limit.
void validate_mesh(const Mesh& mesh, const QualityLimits& limits = {});

// ---- generators -----------------------------------------------------------

/// J equal cells on [-1, 1]; J must be even and at least 2.
Mesh uniform_interval_mesh(int J);

/// 2J cells on [-1, 1] graded towards both end points: on [0, 1] the nodes
/// are r_j = 1 - ((J - j)/J)^mu, mirrored onto [-1, 0].
Mesh graded_interval_mesh(int J, double mu);

/// Concentric-ring triangulation of the unit disk with J layers and radii
/// r_k = 1 - ((J - k)/J)^mu. Ring k carries about 2 pi r_k / (r_k - r_{k-1})
/// points so that circumferential and radial spacing agree. Boundary points
/// lie on the unit circle. Validated against `limits`.
Mesh disk_mesh(int J, double mu, const QualityLimits& limits = {});

/// (-1, 1)^2 split along the diagonal from (-1,-1) to (1,1), which is the
/// refinement edge of both triangles.
Mesh square_two_triangle_mesh();

/// Newest vertex bisection. Each marked element is bisected across its
/// refinement edge; closure bisections keep the result conforming.
Mesh nvb_refine(const Mesh& mesh, std::span<const int> marked);

/// `times` rounds of bisecting every element.
Mesh nvb_uniform_refine(const Mesh& mesh, int times);

struct SquareGradingOptions {
  double theta = 24.0;
  double mu = 2.0;
  int levels = 11;
  /// Uniform bisection rounds applied to the two-triangle square before
  /// the marking loop starts.
  int initial_bisections = 10;
};

/// Marking predicate |T| > theta N^{-1} ln N d(x_T, boundary)^{2(mu-1)/mu}
/// with N = 3 #elements and x_T the barycenter; equality is not marked.
std::vector<int> mark_graded_square(const Mesh& mesh, double theta, double mu);

/// Starting from the two-triangle square (uniformly bisected
/// `initial_bisections` times), applies `levels` rounds of
/// {mark_graded_square, nvb_refine}.
Mesh graded_square_mesh(const SquareGradingOptions& options);

}  // namespace fracldg
