#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "fracldg/assembly.hpp"
#include "fracldg/kernel.hpp"
#include "fracldg/mesh.hpp"
#include "fracldg/riesz_pair.hpp"
#include "fracldg/spaces.hpp"

namespace fracldg {
namespace {

Eigen::VectorXd random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = d(rng);
  return x;
}

FluxParams flux(double s) {
  FluxParams p;
  p.s = s;
  return p;
}

int interior_face(const Mesh& m) {
  for (int f = 0; f < m.num_faces(); ++f) {
    if (!m.face(f).is_boundary()) return f;
  }
  return -1;
}

TEST(AssembleA, TwoCellEntry) {
  const Mesh m = uniform_interval_mesh(2);
  const DgSpaces sp(m, QSpace::p0);
  const RieszMatrix A = assemble_A(sp, 0.75);
  EXPECT_NEAR(A.scalar(1, 1), (8.0 / 3.0) / std::sqrt(2.0 * std::numbers::pi), 1e-14);
}

TEST(AssembleA, MatchesClosedFormIn1D) {
  const Mesh m = graded_interval_mesh(4, 2.0);
  for (double s : {0.6, 0.9}) {
    const DgSpaces sp(m, QSpace::p1);
    const RieszMatrix A = assemble_A(sp, s);
    const double g = riesz_normalization(1, 2.0 - 2.0 * s);
    for (int i = 0; i < m.num_elements(); ++i) {
      for (int j = 0; j < m.num_elements(); ++j) {
        const double ref = riesz_pair_1d(m.element_vertex(i, 0)[0], m.element_vertex(i, 1)[0],
                                         m.element_vertex(j, 0)[0], m.element_vertex(j, 1)[0], s) / g;
        EXPECT_NEAR(A.scalar(i, j), ref, 1e-10 * std::abs(ref));
      }
    }
  }
}

TEST(AssembleA, ComponentsDecouple) {
  const Mesh m = disk_mesh(2, 1.0);
  const DgSpaces sp(m, QSpace::p0);
  const RieszMatrix A = assemble_A(sp, 0.75);
  const Eigen::MatrixXd D = A.dense();
  const int E = m.num_elements();
  ASSERT_EQ(D.rows(), 2 * E);
  EXPECT_EQ(D.topRightCorner(E, E).norm(), 0.0);
  EXPECT_EQ(D.bottomLeftCorner(E, E).norm(), 0.0);
  EXPECT_EQ(D.topLeftCorner(E, E), D.bottomRightCorner(E, E));
  const Eigen::VectorXd x = random_vector(2 * E, 3);
  EXPECT_NEAR((A.apply(x) - D * x).norm(), 0.0, 1e-12 * x.norm() * D.norm());
}

TEST(AssembleA, SymmetricPositiveDefinite) {
  const Mesh m1 = uniform_interval_mesh(4);
  const DgSpaces sp1(m1, QSpace::p0);
  const RieszMatrix A1 = assemble_A(sp1, 0.75);
  EXPECT_EQ(A1.scalar, A1.scalar.transpose());
  for (unsigned k = 0; k < 20; ++k) EXPECT_GT(A1.quadratic_form(random_vector(4, k)), 0.0);

  const Mesh m2 = disk_mesh(3, 2.0);
  const DgSpaces sp2(m2, QSpace::p1);
  const RieszMatrix A2 = assemble_A(sp2, 0.6);
  EXPECT_EQ(A2.scalar, A2.scalar.transpose());
  EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(A2.scalar).info(), Eigen::Success);
}

TEST(AssembleM0, Diagonal) {
  const Mesh m = uniform_interval_mesh(4);
  const DgSpaces sp(m, QSpace::p0);
  const Eigen::MatrixXd M = assemble_M0(sp).dense();
  EXPECT_EQ(M, Eigen::MatrixXd(Eigen::VectorXd::Constant(4, 0.5).asDiagonal()));
  const Mesh sq = square_two_triangle_mesh();
  const DgSpaces sps(sq, QSpace::p0);
  const BlockDiagonal M2 = assemble_M0(sps);
  EXPECT_EQ(M2.dense(), Eigen::MatrixXd(Eigen::VectorXd::Constant(4, 2.0).asDiagonal()));
  const Eigen::VectorXd x = random_vector(4, 5);
  EXPECT_NEAR((M2.solve(M2.apply(x)) - x).norm(), 0.0, 1e-15);
}

TEST(ProjectSigma, Examples) {
  const Mesh m = square_two_triangle_mesh();
  const DgSpaces sp(m, QSpace::p1);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(q_nodal_size(sp));
  for (int e = 0; e < 2; ++e) {
    for (int i = 0; i < 3; ++i) q[(e * 2 + 0) * 3 + i] = 1.0;
  }
  const Eigen::VectorXd sigma = project_sigma(sp, q);
  EXPECT_NEAR(sigma[sp.sigma_index(0, 0)], 1.0, 1e-15);
  EXPECT_NEAR(sigma[sp.sigma_index(1, 1)], 0.0, 1e-15);
  EXPECT_NEAR(perp_part(sp, q).norm(), 0.0, 1e-15);

  const Mesh unit(1, {Point(0, 0), Point(1, 0)}, {{0, 1, -1}});
  const DgSpaces sp1(unit, QSpace::p1);
  Eigen::VectorXd lin(2);
  lin << 0.0, 1.0;
  EXPECT_NEAR(project_sigma(sp1, lin)[0], 0.5, 1e-15);

  const Eigen::VectorXd r = random_vector(q_nodal_size(sp), 9);
  const Eigen::VectorXd once = project_sigma(sp, r);
  const Eigen::VectorXd twice = project_sigma(sp, q_to_nodal(sp, once, Eigen::VectorXd::Zero(sp.perp_size())));
  EXPECT_NEAR((once - twice).norm(), 0.0, 1e-14);
  const Eigen::VectorXd back = q_to_nodal(sp, once, perp_part(sp, r));
  EXPECT_NEAR((back - r).norm(), 0.0, 1e-13);
}

TEST(AssembleMsPerp, VanishesForP0) {
  const Mesh m = disk_mesh(2, 1.0);
  const DgSpaces sp(m, QSpace::p0);
  const BlockDiagonal Ms = assemble_Ms_perp(sp, flux(0.75));
  EXPECT_EQ(Ms.size(), 0);
  EXPECT_TRUE(Ms.is_zero());
  const auto [B0, Bp] = assemble_B(sp, flux(0.75));
  EXPECT_EQ(Bp.cols(), 0);
}

TEST(AssembleMsPerp, GramOfMeanZeroPart) {
  const Mesh m(1, {Point(0, 0), Point(1, 0)}, {{0, 1, -1}});
  const DgSpaces sp(m, QSpace::p1);
  FluxParams p = flux(0.75);
  p.cs_rule = FluxParams::CsRule::constant;
  p.cs_value = 1.0;
  const BlockDiagonal Ms = assemble_Ms_perp(sp, p);
  ASSERT_EQ(Ms.size(), 1);
  EXPECT_NEAR(Ms.dense()(0, 0), 1.0 / 12.0, 1e-15);
  p.cs_value = 2.0;
  EXPECT_NEAR(assemble_Ms_perp(sp, p).dense()(0, 0), 2.0 / 12.0, 1e-15);
}

TEST(AssembleMsPerp, DoublingScalesTriangleBlocks) {
  const Mesh m = disk_mesh(3, 2.0);
  const DgSpaces sp(m, QSpace::p1);
  FluxParams p = flux(0.75);
  p.cs_rule = FluxParams::CsRule::constant;
  const Eigen::MatrixXd one = assemble_Ms_perp(sp, p).dense();
  p.cs_value = 2.0;
  const Eigen::MatrixXd two = assemble_Ms_perp(sp, p).dense();
  EXPECT_NEAR((two - 2.0 * one).norm(), 0.0, 1e-15 * one.norm());
  EXPECT_EQ(one, one.transpose());
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(one).eigenvalues().minCoeff(), 0.0);
}

TEST(AssembleB, FaceTerm) {
  const Mesh m = uniform_interval_mesh(2);
  const DgSpaces sp(m, QSpace::p0);
  const auto [B0, Bp] = assemble_B(sp, flux(0.75));
  // Left-cell basis with value 1 at x = 0 against the left-cell indicator.
  EXPECT_NEAR(B0.coeff(sp.v_index(0, 1), sp.sigma_index(0, 0)), -0.5, 1e-15);
  EXPECT_NEAR(B0.coeff(sp.v_index(1, 0), sp.sigma_index(0, 0)), -0.5, 1e-15);
  EXPECT_NEAR(B0.coeff(sp.v_index(1, 0), sp.sigma_index(0, 1)), 0.5, 1e-15);
  EXPECT_EQ(B0.coeff(sp.v_index(0, 0), sp.sigma_index(0, 0)), 0.0);
}

TEST(AssembleB, ContinuousFieldSeesOnlyBoundaryFlux) {
  // With v = 1 the jump terms vanish and the averages telescope, leaving the
  // flux of each piecewise constant test field through the domain boundary.
  for (const Mesh& m : {uniform_interval_mesh(6), disk_mesh(3, 2.0)}) {
    const DgSpaces sp(m, QSpace::p1);
    const auto [B0, Bp] = assemble_B(sp, flux(0.7));
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(sp.v_size());
    const Eigen::VectorXd row = Eigen::MatrixXd(B0).transpose() * ones;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(sp.sigma_size());
    for (const Face& f : m.faces()) {
      if (!f.is_boundary()) continue;
      for (int d = 0; d < m.dim(); ++d) g[sp.sigma_index(d, f.elements[0])] += (m.dim() == 1 ? 1.0 : f.size) * f.normal[d];
    }
    EXPECT_GT(g.lpNorm<Eigen::Infinity>(), 0.0);
    EXPECT_LE((row - g).lpNorm<Eigen::Infinity>(), 1e-13);
  }
}

TEST(AssembleB, UpwindShift) {
  const Mesh m = uniform_interval_mesh(4);
  const DgSpaces sp(m, QSpace::p1);
  FluxParams p = flux(0.75);
  const int fi = interior_face(m);
  const Face& f = m.face(fi);
  p.beta.assign(static_cast<std::size_t>(m.num_faces()), Point::Zero());
  p.beta[static_cast<std::size_t>(fi)] = 0.5 * f.normal;
  const auto [B0, Bp] = assemble_B(sp, flux(0.75));
  const auto [B0b, Bpb] = assemble_B(sp, p);
  const Eigen::MatrixXd diff = Eigen::MatrixXd(B0b) - Eigen::MatrixXd(B0);
  const int left = f.elements[0], right = f.elements[1];
  const int vl = sp.v_index(left, f.local[0]), vr = sp.v_index(right, f.local[1]);
  // -beta·[v][q] with [v] = (v_l - v_r) n and [q] = q_l - q_r.
  EXPECT_NEAR(diff(vl, sp.sigma_index(0, left)), -0.5, 1e-15);
  EXPECT_NEAR(diff(vl, sp.sigma_index(0, right)), 0.5, 1e-15);
  EXPECT_NEAR(diff(vr, sp.sigma_index(0, left)), 0.5, 1e-15);
  EXPECT_NEAR(diff(vr, sp.sigma_index(0, right)), -0.5, 1e-15);
  EXPECT_NEAR(diff.cwiseAbs().sum(), 2.0, 1e-14);
  const Eigen::MatrixXd dperp = Eigen::MatrixXd(Bpb) - Eigen::MatrixXd(Bp);
  EXPECT_NEAR(dperp(vl, sp.perp_index(left, 0, 0)), -0.5 * 0.5 * m.measure(left), 1e-15);
}

TEST(AssembleC, SingleJump) {
  const Mesh m = uniform_interval_mesh(4);
  const DgSpaces sp(m, QSpace::p0);
  const double s = 0.75;
  const SparseMatrix C = assemble_C(sp, flux(s));
  Eigen::VectorXd u = Eigen::VectorXd::Zero(sp.v_size());
  u[sp.v_index(1, 1)] = 1.0;  // [-0.5, 0], value 1 at x = 0
  EXPECT_NEAR(u.dot(C * u), std::pow(0.5, 1.0 - 2.0 * s), 1e-14);
  const Eigen::MatrixXd Cd(C);
  EXPECT_EQ(Cd, Cd.transpose());
}

TEST(AssembleC, VanishesOnConformingZeroTraceFields) {
  const Mesh m = disk_mesh(4, 2.0);
  const DgSpaces sp(m, QSpace::p1);
  const SparseMatrix C = assemble_C(sp, flux(0.6));
  for (unsigned seed = 0; seed < 5; ++seed) {
    Eigen::VectorXd nodal = random_vector(m.num_vertices(), seed);
    for (int v = 0; v < m.num_vertices(); ++v) {
      if (m.is_boundary_vertex(v)) nodal[v] = 0.0;
    }
    Eigen::VectorXd u(sp.v_size());
    for (int e = 0; e < m.num_elements(); ++e) {
      for (int i = 0; i < 3; ++i) u[sp.v_index(e, i)] = nodal[m.element(e)[i]];
    }
    EXPECT_NEAR(u.dot(C * u), 0.0, 1e-12 * u.squaredNorm());
    const Eigen::VectorXd r = random_vector(sp.v_size(), 100 + seed);
    EXPECT_GE(r.dot(C * r), 0.0);
  }
}

TEST(AssembleF, Examples) {
  const Mesh m(1, {Point(0, 0), Point(1, 0)}, {{0, 1, -1}});
  const DgSpaces sp(m, QSpace::p0);
  const Eigen::VectorXd F = assemble_F(sp, [](const Point&) { return 1.0; });
  EXPECT_NEAR(F[0], 0.5, 1e-15);
  EXPECT_NEAR(F[1], 0.5, 1e-15);
  EXPECT_EQ(assemble_F(sp, [](const Point&) { return 0.0; }).norm(), 0.0);
  const Mesh sq = square_two_triangle_mesh();
  const DgSpaces sps(sq, QSpace::p0);
  const Eigen::VectorXd F2 = assemble_F(sps, [](const Point&) { return 1.0; });
  for (int i = 0; i < F2.size(); ++i) EXPECT_NEAR(F2[i], 2.0 / 3.0, 1e-14);
}

TEST(AssembleF, LinearLoad) {
  // ∫_0^1 x (1 - x) = 1/6, ∫_0^1 x^2 = 1/3.
  const Mesh m(1, {Point(0, 0), Point(1, 0)}, {{0, 1, -1}});
  const DgSpaces sp(m, QSpace::p0);
  const Eigen::VectorXd F = assemble_F(sp, [](const Point& x) { return x[0]; });
  EXPECT_NEAR(F[0], 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(F[1], 1.0 / 3.0, 1e-15);
}

TEST(AssembleSystem, BlockShapes) {
  const Mesh m = disk_mesh(3, 2.0);
  const DgSpaces sp(m, QSpace::p1);
  const SystemBlocks b = assemble_system(sp, flux(0.8), [](const Point&) { return 1.0; });
  const int E = m.num_elements();
  EXPECT_EQ(sp.v_size(), 3 * E);
  EXPECT_EQ(b.A.size(), 2 * E);
  EXPECT_EQ(b.M0.size(), 2 * E);
  EXPECT_EQ(b.Ms_perp.size(), 4 * E);
  EXPECT_EQ(b.B0.rows(), 3 * E);
  EXPECT_EQ(b.B0.cols(), 2 * E);
  EXPECT_EQ(b.B_perp.cols(), 4 * E);
  EXPECT_EQ(b.C.rows(), 3 * E);
  EXPECT_EQ(b.F.size(), 3 * E);
}

TEST(Flux, ParameterRules) {
  const Mesh m = uniform_interval_mesh(4);
  FluxParams p = flux(0.75);
  EXPECT_NEAR(p.c11(m.face(0)), std::pow(0.5, -0.5), 1e-15);
  EXPECT_NEAR(p.cs(m, 0), std::pow(0.5, 0.5), 1e-15);
  const Mesh d = disk_mesh(2, 1.0);
  EXPECT_EQ(p.cs(d, 0), 1.0);
  p.theta = 0.5;
  EXPECT_NEAR(p.cs(d, 0), d.diameter(0), 1e-15);
}

}  // namespace
}  // namespace fracldg
