#include "fracldg/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Cholesky>

#include "fracldg/error.hpp"
#include "fracldg/kernel.hpp"
#include "fracldg/quadrature.hpp"

namespace fracldg {

// ---- parameters -------------------------------------------------------------

double FluxParams::c11(const Face& f) const { return c11_scale * std::pow(f.size, 1.0 - 2.0 * s); }

double FluxParams::cs(const Mesh& mesh, int e) const {
  if (cs_rule == CsRule::constant) return cs_value;
  const double h = mesh.diameter(e);
  return mesh.dim() == 1 ? std::pow(h, 2.0 - 2.0 * s) : std::pow(h, 2.0 * theta);
}

Point FluxParams::beta_at(int face) const {
  return beta.empty() ? Point::Zero() : beta[static_cast<std::size_t>(face)];
}

// ---- RieszMatrix ------------------------------------------------------------

Eigen::VectorXd RieszMatrix::apply(const Eigen::VectorXd& x) const {
  const Eigen::Index E = scalar.rows();
  Eigen::VectorXd y(x.size());
  for (int c = 0; c < components; ++c) {
    y.segment(c * E, E).noalias() = scalar.selfadjointView<Eigen::Lower>() * x.segment(c * E, E);
  }
  return y;
}

Eigen::MatrixXd RieszMatrix::dense() const {
  const Eigen::Index E = scalar.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(size(), size());
  for (int c = 0; c < components; ++c) out.block(c * E, c * E, E, E) = scalar;
  return out;
}

// ---- BlockDiagonal ----------------------------------------------------------

BlockDiagonal::BlockDiagonal(int num_blocks, int block_size)
    : nb_(num_blocks), k_(block_size), data_(Eigen::MatrixXd::Zero(block_size, static_cast<Eigen::Index>(num_blocks) * block_size)) {}

Eigen::VectorXd BlockDiagonal::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y(size());
  for (int b = 0; b < nb_; ++b) y.segment(b * k_, k_).noalias() = block(b) * x.segment(b * k_, k_);
  return y;
}

void BlockDiagonal::prepare_inverse() const {
  if (factorized_) return;
  inverse_.resize(data_.rows(), data_.cols());
  for (int b = 0; b < nb_; ++b) {
    Eigen::LLT<Eigen::MatrixXd> llt(data_.middleCols(static_cast<Eigen::Index>(b) * k_, k_));
    if (llt.info() != Eigen::Success) {
      throw StructuralError("block-diagonal solve: block " + std::to_string(b) + " is not positive definite");
    }
    inverse_.middleCols(static_cast<Eigen::Index>(b) * k_, k_) = llt.solve(Eigen::MatrixXd::Identity(k_, k_));
  }
  factorized_ = true;
}

Eigen::VectorXd BlockDiagonal::solve(const Eigen::VectorXd& x) const {
  prepare_inverse();
  Eigen::VectorXd y(size());
  for (int b = 0; b < nb_; ++b) {
    y.segment(b * k_, k_).noalias() = inverse_.middleCols(static_cast<Eigen::Index>(b) * k_, k_) * x.segment(b * k_, k_);
  }
  return y;
}

Eigen::MatrixXd BlockDiagonal::solve(const Eigen::MatrixXd& x) const {
  prepare_inverse();
  Eigen::MatrixXd y(x.rows(), x.cols());
  for (int b = 0; b < nb_; ++b) {
    y.middleRows(b * k_, k_).noalias() = inverse_.middleCols(static_cast<Eigen::Index>(b) * k_, k_) * x.middleRows(b * k_, k_);
  }
  return y;
}

Eigen::MatrixXd BlockDiagonal::dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(size(), size());
  for (int b = 0; b < nb_; ++b) out.block(b * k_, b * k_, k_, k_) = block(b);
  return out;
}

SparseMatrix BlockDiagonal::sparse() const {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(nb_) * k_ * k_);
  for (int b = 0; b < nb_; ++b) {
    for (int i = 0; i < k_; ++i) {
      for (int j = 0; j < k_; ++j) {
        const double v = data_(i, static_cast<Eigen::Index>(b) * k_ + j);
        if (v != 0.0) trip.emplace_back(b * k_ + i, b * k_ + j, v);
      }
    }
  }
  SparseMatrix m(size(), size());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

// ---- geometry helpers -------------------------------------------------------

Point outward_normal(const Mesh& mesh, int e, int local) {
  const Face& f = mesh.face(mesh.element_faces(e)[static_cast<std::size_t>(local)]);
  return f.elements[0] == e && f.local[0] == local ? f.normal : Point(-f.normal);
}

namespace {

// Vertices in lexicographic order, so mapped rules depend on geometry only
// and the assembled operator is invariant under renumbering.
Triangle triangle_of(const Mesh& mesh, int e) {
  Triangle t{mesh.element_vertex(e, 0), mesh.element_vertex(e, 1), mesh.element_vertex(e, 2)};
  std::sort(t.begin(), t.end(),
            [](const Point& a, const Point& b) { return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]); });
  return t;
}

struct FacePoints {
  std::vector<Point> x;
  std::vector<double> w;
};

// Exact for quadratics on the face (P1 x P1 traces).
FacePoints face_points(const Mesh& mesh, const Face& f) {
  FacePoints fp;
  if (mesh.dim() == 1) {
    fp.x.push_back(mesh.vertex(f.vertices[0]));
    fp.w.push_back(1.0);
    return fp;
  }
  const Point& a = mesh.vertex(f.vertices[0]);
  const Point& b = mesh.vertex(f.vertices[1]);
  const QuadRule& g = gauss_segment(2);
  for (std::size_t q = 0; q < g.size(); ++q) {
    fp.x.push_back(a + g.points[q][0] * (b - a));
    fp.w.push_back(g.weights[q] * f.measure);
  }
  return fp;
}

void element_rule(const Mesh& mesh, int e, int degree, std::vector<Point>& x, std::vector<double>& w) {
  if (mesh.dim() == 1) {
    const QuadRule& g = gauss_segment(std::max(1, (degree + 2) / 2));
    const Point& a = mesh.element_vertex(e, 0);
    const Point& b = mesh.element_vertex(e, 1);
    x.resize(g.size());
    w.resize(g.size());
    for (std::size_t q = 0; q < g.size(); ++q) {
      x[q] = a + g.points[q][0] * (b - a);
      w[q] = g.weights[q] * mesh.measure(e);
    }
    return;
  }
  map_to_triangle(gauss_triangle(degree), triangle_of(mesh, e), x, w);
}

void assemble_riesz_1d(const Mesh& mesh, double s, Eigen::MatrixXd& R) {
  const int E = mesh.num_elements();
  for (int i = 0; i < E; ++i) {
    const double a = mesh.element_vertex(i, 0)[0];
    const double b = mesh.element_vertex(i, 1)[0];
    for (int j = i; j < E; ++j) {
      const double v = riesz_pair_1d(a, b, mesh.element_vertex(j, 0)[0], mesh.element_vertex(j, 1)[0], s);
      R(i, j) = v;
      R(j, i) = v;
    }
  }
}

void assemble_riesz_2d(const Mesh& mesh, double s, const PairQuadrature& quad, Eigen::MatrixXd& R) {
  const int E = mesh.num_elements();
  const double gamma = 2.0 * s;
  const QuadRule far_rule = collapsed_triangle(quad.far);
  const QuadRule near_rule = collapsed_triangle(quad.near);
  const auto kf = static_cast<Eigen::Index>(far_rule.size());

  // All far-rule points, element-major.
  Eigen::ArrayXd px(E * kf), py(E * kf), pw(E * kf);
  std::vector<std::vector<Point>> near_x(static_cast<std::size_t>(E));
  std::vector<std::vector<double>> near_w(static_cast<std::size_t>(E));
  std::vector<Point> bary(static_cast<std::size_t>(E));
  {
    std::vector<Point> x;
    std::vector<double> w;
    for (int e = 0; e < E; ++e) {
      map_to_triangle(far_rule, triangle_of(mesh, e), x, w);
      for (Eigen::Index q = 0; q < kf; ++q) {
        px[e * kf + q] = x[static_cast<std::size_t>(q)][0];
        py[e * kf + q] = x[static_cast<std::size_t>(q)][1];
        pw[e * kf + q] = w[static_cast<std::size_t>(q)];
      }
      map_to_triangle(near_rule, triangle_of(mesh, e), near_x[static_cast<std::size_t>(e)],
                      near_w[static_cast<std::size_t>(e)]);
      bary[static_cast<std::size_t>(e)] = mesh.barycenter(e);
    }
  }

  // Elements sharing at least one vertex with e.
  std::vector<std::vector<int>> vertex_elems(static_cast<std::size_t>(mesh.num_vertices()));
  for (int e = 0; e < E; ++e) {
    for (int v : mesh.element(e)) vertex_elems[static_cast<std::size_t>(v)].push_back(e);
  }

#pragma omp parallel
  {
    Eigen::ArrayXd acc, r2;
#pragma omp for schedule(dynamic, 8)
    for (int i = 0; i < E; ++i) {
      const Eigen::Index start = static_cast<Eigen::Index>(i + 1) * kf;
      const Eigen::Index len = static_cast<Eigen::Index>(E) * kf - start;
      if (len > 0) {
        acc.setZero(len);
        // Chunks small enough to stay in L1 across the q loop.
        constexpr Eigen::Index kChunk = 512;
        for (Eigen::Index c0 = 0; c0 < len; c0 += kChunk) {
          const Eigen::Index cl = std::min(kChunk, len - c0);
          auto a = acc.segment(c0, cl);
          const auto qx = px.segment(start + c0, cl);
          const auto qy = py.segment(start + c0, cl);
          const auto qw = pw.segment(start + c0, cl);
          for (Eigen::Index q = 0; q < kf; ++q) {
            r2 = (qx - px[i * kf + q]).square() + (qy - py[i * kf + q]).square();
            a += pw[i * kf + q] * (((-0.5 * gamma) * r2.log()).exp() * qw);
          }
        }
        for (int j = i + 1; j < E; ++j) R(j, i) = acc.segment((j - i - 1) * kf, kf).sum();
      }

      std::set<int> touching;
      for (int v : mesh.element(i)) {
        for (int j : vertex_elems[static_cast<std::size_t>(v)]) {
          if (j >= i) touching.insert(j);
        }
      }
      const Triangle ti = triangle_of(mesh, i);
      for (int j : touching) R(j, i) = riesz_pair_2d(ti, triangle_of(mesh, j), s, quad);
      const double hi = mesh.diameter(i);
      for (int j = i + 1; j < E; ++j) {
        if (touching.count(j)) continue;
        const double reach = quad.near_factor * std::max(hi, mesh.diameter(j));
        if ((bary[static_cast<std::size_t>(i)] - bary[static_cast<std::size_t>(j)]).squaredNorm() < reach * reach) {
          R(j, i) = riesz_pair_disjoint(near_x[static_cast<std::size_t>(i)], near_w[static_cast<std::size_t>(i)],
                                        near_x[static_cast<std::size_t>(j)], near_w[static_cast<std::size_t>(j)], gamma);
        }
      }
    }
  }
  for (int j = 1; j < E; ++j) {
    for (int i = 0; i < j; ++i) R(i, j) = R(j, i);
  }
}

}  // namespace

// ---- operators --------------------------------------------------------------

RieszMatrix assemble_A(const DgSpaces& spaces, double s, const PairQuadrature& quad) {
  const Mesh& mesh = spaces.mesh();
  const FracParams fp(mesh.dim(), s);
  RieszMatrix A;
  A.components = mesh.dim();
  A.scalar.resize(mesh.num_elements(), mesh.num_elements());
  if (mesh.dim() == 1) {
    assemble_riesz_1d(mesh, s, A.scalar);
  } else {
    assemble_riesz_2d(mesh, s, quad, A.scalar);
  }
  A.scalar /= riesz_normalization(mesh.dim(), fp.alpha());
  return A;
}

BlockDiagonal assemble_M0(const DgSpaces& spaces) {
  const Mesh& mesh = spaces.mesh();
  BlockDiagonal M(spaces.sigma_size(), 1);
  for (int c = 0; c < spaces.dim(); ++c) {
    for (int e = 0; e < mesh.num_elements(); ++e) M.block(spaces.sigma_index(c, e))(0, 0) = mesh.measure(e);
  }
  M.prepare_inverse();
  return M;
}

BlockDiagonal assemble_Ms_perp(const DgSpaces& spaces, const FluxParams& params) {
  if (spaces.q_space() == QSpace::p0) return BlockDiagonal(0, spaces.dim() * spaces.dim());
  const Mesh& mesh = spaces.mesh();
  const int n = spaces.dim();
  BlockDiagonal M(mesh.num_elements(), n * n);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    // Second moments ∫_T (x - xbar)(x - xbar)^T, exact for simplices.
    Eigen::Matrix2d mom = Eigen::Matrix2d::Zero();
    if (n == 1) {
      const double h = mesh.measure(e);
      mom(0, 0) = h * h * h / 12.0;
    } else {
      const Point xbar = mesh.barycenter(e);
      for (int i = 0; i < 3; ++i) {
        const Point d = mesh.element_vertex(e, i) - xbar;
        mom += d * d.transpose();
      }
      mom *= mesh.measure(e) / 12.0;
    }
    const double cs = params.cs(mesh, e);
    auto blk = M.block(e);
    for (int c = 0; c < n; ++c) {
      for (int d = 0; d < n; ++d) {
        for (int d2 = 0; d2 < n; ++d2) blk(c * n + d, c * n + d2) = cs * mom(d, d2);
      }
    }
  }
  return M;
}

std::pair<SparseMatrix, SparseMatrix> assemble_B(const DgSpaces& spaces, const FluxParams& params) {
  const Mesh& mesh = spaces.mesh();
  const int n = spaces.dim();
  const bool p1 = spaces.q_space() == QSpace::p1;
  std::vector<Eigen::Triplet<double>> t0, tp;

  if (p1) {
    // (v, div q)_T: div(e_c (x_d - xbar_d)) = delta_cd.
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const double w = mesh.measure(e) / (n + 1);
      for (int i = 0; i <= n; ++i) {
        for (int c = 0; c < n; ++c) tp.emplace_back(spaces.v_index(e, i), spaces.perp_index(e, c, c), w);
      }
    }
  }

  // -∫_F ({v} + beta·[[v]]) [q] on interior faces.
  for (int fi = 0; fi < mesh.num_faces(); ++fi) {
    const Face& f = mesh.face(fi);
    if (f.is_boundary()) continue;
    const FacePoints fp = face_points(mesh, f);
    const Point beta = params.beta_at(fi);
    for (int sv = 0; sv < 2; ++sv) {
      const int ev = f.elements[static_cast<std::size_t>(sv)];
      const Point nv = sv == 0 ? f.normal : Point(-f.normal);
      const double vw = 0.5 + beta.dot(nv);
      for (int sq = 0; sq < 2; ++sq) {
        const int eq = f.elements[static_cast<std::size_t>(sq)];
        const Point nq = sq == 0 ? f.normal : Point(-f.normal);
        const Point xbar = mesh.barycenter(eq);
        for (std::size_t q = 0; q < fp.x.size(); ++q) {
          const Eigen::Vector3d lam = spaces.barycentric(ev, fp.x[q]);
          const Point dx = fp.x[q] - xbar;
          for (int i = 0; i <= n; ++i) {
            const double base = -fp.w[q] * vw * lam[i];
            if (base == 0.0) continue;
            for (int c = 0; c < n; ++c) {
              t0.emplace_back(spaces.v_index(ev, i), spaces.sigma_index(c, eq), base * nq[c]);
              if (!p1) continue;
              for (int d = 0; d < n; ++d) {
                tp.emplace_back(spaces.v_index(ev, i), spaces.perp_index(eq, c, d), base * nq[c] * dx[d]);
              }
            }
          }
        }
      }
    }
  }
  SparseMatrix B0(spaces.v_size(), spaces.sigma_size());
  B0.setFromTriplets(t0.begin(), t0.end());
  SparseMatrix Bp(spaces.v_size(), spaces.perp_size());
  Bp.setFromTriplets(tp.begin(), tp.end());
  return {std::move(B0), std::move(Bp)};
}

SparseMatrix assemble_C(const DgSpaces& spaces, const FluxParams& params) {
  const Mesh& mesh = spaces.mesh();
  const int n = spaces.dim();
  std::vector<Eigen::Triplet<double>> trip;
  for (const Face& f : mesh.faces()) {
    const FacePoints fp = face_points(mesh, f);
    const double c11 = params.c11(f);
    const int sides = f.is_boundary() ? 1 : 2;
    for (std::size_t q = 0; q < fp.x.size(); ++q) {
      for (int a = 0; a < sides; ++a) {
        const int ea = f.elements[static_cast<std::size_t>(a)];
        const Eigen::Vector3d la = spaces.barycentric(ea, fp.x[q]);
        for (int b = 0; b < sides; ++b) {
          const int eb = f.elements[static_cast<std::size_t>(b)];
          const Eigen::Vector3d lb = spaces.barycentric(eb, fp.x[q]);
          const double sign = a == b ? 1.0 : -1.0;
          for (int i = 0; i <= n; ++i) {
            for (int j = 0; j <= n; ++j) {
              const double v = c11 * sign * fp.w[q] * la[i] * lb[j];
              if (v != 0.0) trip.emplace_back(spaces.v_index(ea, i), spaces.v_index(eb, j), v);
            }
          }
        }
      }
    }
  }
  SparseMatrix C(spaces.v_size(), spaces.v_size());
  C.setFromTriplets(trip.begin(), trip.end());
  return C;
}

Eigen::VectorXd assemble_F(const DgSpaces& spaces, const ScalarField& f, int degree) {
  const Mesh& mesh = spaces.mesh();
  Eigen::VectorXd F = Eigen::VectorXd::Zero(spaces.v_size());
  std::vector<Point> x;
  std::vector<double> w;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    element_rule(mesh, e, degree, x, w);
    for (std::size_t q = 0; q < x.size(); ++q) {
      const double fw = w[q] * f(x[q]);
      const Eigen::Vector3d lam = spaces.barycentric(e, x[q]);
      for (int i = 0; i <= spaces.dim(); ++i) F[spaces.v_index(e, i)] += fw * lam[i];
    }
  }
  return F;
}

SystemBlocks assemble_system(const DgSpaces& spaces, const FluxParams& params, const ScalarField& f,
                             const PairQuadrature& quad) {
  SystemBlocks blocks;
  blocks.spaces = &spaces;
  blocks.params = params;
  blocks.A = assemble_A(spaces, params.s, quad);
  blocks.M0 = assemble_M0(spaces);
  blocks.Ms_perp = assemble_Ms_perp(spaces, params);
  if (blocks.Ms_perp.num_blocks() > 0) blocks.Ms_perp.prepare_inverse();
  std::tie(blocks.B0, blocks.B_perp) = assemble_B(spaces, params);
  blocks.C = assemble_C(spaces, params);
  blocks.F = assemble_F(spaces, f);
  return blocks;
}

}  // namespace fracldg
