#pragma once

#include <Eigen/Core>

#include "fracldg/mesh.hpp"

namespace fracldg {

enum class QSpace { p0, p1 };

/// Degree-of-freedom layout of the three discrete spaces on a mesh.
///
///   V_h: discontinuous P1 scalars, nodal basis, index e (n+1) + i.
///   Sigma_h: P0 vectors, index c E + e (component-major).
///   Q_h = Sigma_h ⊕ Q_perp; Q_perp (only for Q = P1) holds the mean-zero
///   part with basis e_c (x_d - xbar_d), index (e n + c) n + d.
///
/// The mesh is referenced, not copied, and must outlive the spaces.
class DgSpaces {
 public:
  DgSpaces(const Mesh& mesh, QSpace q);

  const Mesh& mesh() const noexcept { return *mesh_; }
  int dim() const noexcept { return n_; }
  QSpace q_space() const noexcept { return q_; }
  int num_elements() const noexcept { return E_; }

  int v_size() const noexcept { return (n_ + 1) * E_; }
  int sigma_size() const noexcept { return n_ * E_; }
  int perp_size() const noexcept { return q_ == QSpace::p1 ? n_ * n_ * E_ : 0; }

  int v_index(int e, int i) const noexcept { return e * (n_ + 1) + i; }
  int sigma_index(int c, int e) const noexcept { return c * E_ + e; }
  int perp_index(int e, int c, int d) const noexcept { return (e * n_ + c) * n_ + d; }

  /// Evaluates u_h at x in element e.
  double eval_v(const Eigen::VectorXd& U, int e, const Point& x) const;
  /// Barycentric coordinates of x with respect to element e.
  Eigen::Vector3d barycentric(int e, const Point& x) const;

 private:
  const Mesh* mesh_;
  QSpace q_;
  int n_;
  int E_;
};

/// Nodal layout of a P1 vector field: index (e n + c)(n+1) + i is the value
/// of component c at local vertex i of element e.
int q_nodal_size(const DgSpaces& spaces);

/// Π_Σ^0 of a nodal P1 vector field: per-element component means.
Eigen::VectorXd project_sigma(const DgSpaces& spaces, const Eigen::VectorXd& q_nodal);

/// Mean-zero part of a nodal P1 field in the Q_perp basis (its gradient).
Eigen::VectorXd perp_part(const DgSpaces& spaces, const Eigen::VectorXd& q_nodal);

/// Nodal representation of (sigma part, perp part).
Eigen::VectorXd q_to_nodal(const DgSpaces& spaces, const Eigen::VectorXd& sigma, const Eigen::VectorXd& perp);

}  // namespace fracldg
