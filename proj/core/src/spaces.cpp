#include "fracldg/spaces.hpp"

#include <Eigen/Dense>

#include "fracldg/error.hpp"

namespace fracldg {

DgSpaces::DgSpaces(const Mesh& mesh, QSpace q)
    : mesh_(&mesh), q_(q), n_(mesh.dim()), E_(mesh.num_elements()) {}

Eigen::Vector3d DgSpaces::barycentric(int e, const Point& x) const {
  Eigen::Vector3d lam = Eigen::Vector3d::Zero();
  const Point& p0 = mesh_->element_vertex(e, 0);
  const Point& p1 = mesh_->element_vertex(e, 1);
  if (n_ == 1) {
    lam[1] = (x[0] - p0[0]) / (p1[0] - p0[0]);
    lam[0] = 1.0 - lam[1];
    return lam;
  }
  const Point& p2 = mesh_->element_vertex(e, 2);
  Eigen::Matrix2d m;
  m.col(0) = p1 - p0;
  m.col(1) = p2 - p0;
  const Eigen::Vector2d t = m.inverse() * (x - p0);
  lam << 1.0 - t[0] - t[1], t[0], t[1];
  return lam;
}

double DgSpaces::eval_v(const Eigen::VectorXd& U, int e, const Point& x) const {
  const Eigen::Vector3d lam = barycentric(e, x);
  double v = 0.0;
  for (int i = 0; i <= n_; ++i) v += lam[i] * U[v_index(e, i)];
  return v;
}

int q_nodal_size(const DgSpaces& spaces) {
  return spaces.num_elements() * spaces.dim() * (spaces.dim() + 1);
}

namespace {

int nodal_index(const DgSpaces& sp, int e, int c, int i) { return (e * sp.dim() + c) * (sp.dim() + 1) + i; }

// Per-element matrix mapping vertex values to the gradient.
Eigen::Matrix2d edge_matrix(const Mesh& mesh, int e) {
  Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
  if (mesh.dim() == 1) {
    m(0, 0) = mesh.element_vertex(e, 1)[0] - mesh.element_vertex(e, 0)[0];
    return m;
  }
  m.row(0) = (mesh.element_vertex(e, 1) - mesh.element_vertex(e, 0)).transpose();
  m.row(1) = (mesh.element_vertex(e, 2) - mesh.element_vertex(e, 0)).transpose();
  return m;
}

}  // namespace

Eigen::VectorXd project_sigma(const DgSpaces& spaces, const Eigen::VectorXd& q_nodal) {
  if (q_nodal.size() != q_nodal_size(spaces)) throw StructuralError("project_sigma: size mismatch");
  const int n = spaces.dim();
  Eigen::VectorXd out(spaces.sigma_size());
  for (int e = 0; e < spaces.num_elements(); ++e) {
    for (int c = 0; c < n; ++c) {
      double sum = 0.0;
      for (int i = 0; i <= n; ++i) sum += q_nodal[nodal_index(spaces, e, c, i)];
      out[spaces.sigma_index(c, e)] = sum / (n + 1);
    }
  }
  return out;
}

Eigen::VectorXd perp_part(const DgSpaces& spaces, const Eigen::VectorXd& q_nodal) {
  if (q_nodal.size() != q_nodal_size(spaces)) throw StructuralError("perp_part: size mismatch");
  const int n = spaces.dim();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n * n * spaces.num_elements());
  for (int e = 0; e < spaces.num_elements(); ++e) {
    const Eigen::Matrix2d m = edge_matrix(spaces.mesh(), e);
    for (int c = 0; c < n; ++c) {
      Eigen::Vector2d rhs = Eigen::Vector2d::Zero();
      for (int i = 1; i <= n; ++i) {
        rhs[i - 1] = q_nodal[nodal_index(spaces, e, c, i)] - q_nodal[nodal_index(spaces, e, c, 0)];
      }
      const Eigen::Vector2d g = n == 1 ? Eigen::Vector2d(rhs[0] / m(0, 0), 0.0) : Eigen::Vector2d(m.partialPivLu().solve(rhs));
      for (int d = 0; d < n; ++d) out[spaces.perp_index(e, c, d)] = g[d];
    }
  }
  return out;
}

Eigen::VectorXd q_to_nodal(const DgSpaces& spaces, const Eigen::VectorXd& sigma, const Eigen::VectorXd& perp) {
  const int n = spaces.dim();
  Eigen::VectorXd out(q_nodal_size(spaces));
  const bool has_perp = perp.size() > 0;
  for (int e = 0; e < spaces.num_elements(); ++e) {
    const Point xbar = spaces.mesh().barycenter(e);
    for (int c = 0; c < n; ++c) {
      for (int i = 0; i <= n; ++i) {
        double v = sigma[spaces.sigma_index(c, e)];
        if (has_perp) {
          const Point dx = spaces.mesh().element_vertex(e, i) - xbar;
          for (int d = 0; d < n; ++d) v += perp[spaces.perp_index(e, c, d)] * dx[d];
        }
        out[nodal_index(spaces, e, c, i)] = v;
      }
    }
  }
  return out;
}

}  // namespace fracldg
