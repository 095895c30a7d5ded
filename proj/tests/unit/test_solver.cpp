#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <gtest/gtest.h>

#include "fracldg/assembly.hpp"
#include "fracldg/error.hpp"
#include "fracldg/mesh.hpp"
#include "fracldg/solver.hpp"
#include "fracldg/spaces.hpp"
#include "fixtures.hpp"

namespace fracldg {
namespace {

const ScalarField kOne = [](const Point&) { return 1.0; };
const ScalarField kZero = [](const Point&) { return 0.0; };

FluxParams flux(double s) {
  FluxParams p;
  p.s = s;
  return p;
}

double rel_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() == 0 && b.size() == 0) return 0.0;
  return (a - b).lpNorm<Eigen::Infinity>() / std::max(b.lpNorm<Eigen::Infinity>(), 1e-300);
}

void expect_agree(const Solution& x, const Solution& y, double tol) {
  EXPECT_LE(rel_diff(x.U, y.U), tol);
  EXPECT_LE(rel_diff(x.S, y.S), tol);
  EXPECT_LE(rel_diff(x.P0, y.P0), tol);
  EXPECT_LE(rel_diff(x.Pperp, y.Pperp), tol);
}

TEST(Schur, MatchesMonolithic1D) {
  const Mesh m = uniform_interval_mesh(16);
  for (double s : {0.6, 0.9}) {
    for (QSpace q : {QSpace::p0, QSpace::p1}) {
      const DgSpaces sp(m, q);
      const SystemBlocks b = assemble_system(sp, flux(s), kOne);
      expect_agree(solve(b), solve_monolithic(b), 1e-8);
    }
  }
}

TEST(Schur, MatchesMonolithicSquare) {
  const Mesh m = square_two_triangle_mesh();
  for (QSpace q : {QSpace::p0, QSpace::p1}) {
    const DgSpaces sp(m, q);
    const SystemBlocks b = assemble_system(sp, flux(0.75), kOne);
    expect_agree(solve(b), solve_monolithic(b), 1e-8);
  }
}

TEST(Schur, MatchesMonolithicGradedDisk) {
  const Mesh m = disk_mesh(3, 2.0);
  const DgSpaces sp(m, QSpace::p1);
  const SystemBlocks b = assemble_system(sp, flux(0.7), kOne);
  expect_agree(solve(b), solve_monolithic(b), 1e-8);
}

TEST(Schur, ReducedOperatorIsSymmetricPositiveDefinite) {
  const Mesh m = uniform_interval_mesh(2);
  for (QSpace q : {QSpace::p0, QSpace::p1}) {
    const DgSpaces sp(m, q);
    const SystemBlocks b = assemble_system(sp, flux(0.75), kOne);
    const Eigen::MatrixXd A = schur_reduce(b).dense();
    EXPECT_LE((A - A.transpose()).cwiseAbs().maxCoeff(), 1e-14 * A.cwiseAbs().maxCoeff());
    EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(A).info(), Eigen::Success);
  }
}

TEST(Schur, P0DropsStabilization) {
  const Mesh m = uniform_interval_mesh(8);
  const DgSpaces sp(m, QSpace::p0);
  const SystemBlocks b = assemble_system(sp, flux(0.75), kOne);
  const Eigen::MatrixXd B0(b.B0);
  const Eigen::MatrixXd Minv = b.M0.dense().inverse();
  const Eigen::MatrixXd ref = B0 * Minv * b.A.dense() * Minv * B0.transpose() + Eigen::MatrixXd(b.C);
  const Eigen::MatrixXd A = schur_reduce(b).dense();
  EXPECT_LE((A - ref).cwiseAbs().maxCoeff(), 1e-12 * ref.cwiseAbs().maxCoeff());
}

TEST(Schur, ApplyMatchesDense) {
  const Mesh m = disk_mesh(3, 2.0);
  const DgSpaces sp(m, QSpace::p1);
  const SystemBlocks b = assemble_system(sp, flux(0.8), kOne);
  const ReducedOperator op = schur_reduce(b);
  const Eigen::MatrixXd A = op.dense();
  std::mt19937 rng(4);
  std::normal_distribution<double> d;
  Eigen::VectorXd x(op.size());
  for (auto& v : x) v = d(rng);
  EXPECT_LE((op.apply(x) - A * x).norm(), 1e-12 * (A * x).norm());
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(op.size(), op.size());
  op.fill_dense(lower);
  const Eigen::MatrixXd diff = (lower - A).triangularView<Eigen::Lower>();
  EXPECT_LE(diff.cwiseAbs().maxCoeff(), 1e-13 * A.cwiseAbs().maxCoeff());
}

TEST(Solve, HomogeneousDataGivesZero) {
  for (const Mesh& m : {uniform_interval_mesh(8), square_two_triangle_mesh()}) {
    const DgSpaces sp(m, QSpace::p1);
    const SystemBlocks b = assemble_system(sp, flux(0.75), kZero);
    for (const Solution& x : {solve(b), solve_monolithic(b)}) {
      EXPECT_EQ(x.U.lpNorm<Eigen::Infinity>(), 0.0);
      EXPECT_EQ(x.S.lpNorm<Eigen::Infinity>(), 0.0);
      EXPECT_EQ(x.P0.lpNorm<Eigen::Infinity>(), 0.0);
      EXPECT_EQ(x.Pperp.lpNorm<Eigen::Infinity>(), 0.0);
    }
  }
}

TEST(Solve, ReducedContract) {
  for (int J : {16, 64, 256}) {
    const Mesh m = uniform_interval_mesh(J);
    const DgSpaces sp(m, QSpace::p0);
    const SystemBlocks b = assemble_system(sp, flux(0.75), kOne);
    const ReducedOperator op = schur_reduce(b);
    SolveDiagnostics diag;
    const Eigen::VectorXd U = solve_reduced(op, b.F, {}, &diag);
    EXPECT_LE((op.apply(U) - b.F).norm() / b.F.norm(), 1e-10);
    EXPECT_EQ(diag.method, "cholesky");
    EXPECT_LE(diag.relative_residual, 1e-10);
  }
}

TEST(Solve, ConjugateGradientContract) {
  const Mesh m = uniform_interval_mesh(32);
  const DgSpaces sp(m, QSpace::p0);
  const SystemBlocks b = assemble_system(sp, flux(0.75), kOne);
  const ReducedOperator op = schur_reduce(b);
  SolveOptions o;
  o.dense_limit = 0;
  SolveDiagnostics diag;
  const Eigen::VectorXd U = solve_reduced(op, b.F, o, &diag);
  EXPECT_EQ(diag.method, "cg");
  EXPECT_GT(diag.iterations, 0);
  EXPECT_LE((op.apply(U) - b.F).norm() / b.F.norm(), 1e-10);
  const Eigen::VectorXd Ud = solve_reduced(op, b.F);
  EXPECT_LE(rel_diff(U, Ud), 1e-8);
}

TEST(Solve, Linearity) {
  const Mesh m = disk_mesh(3, 1.0);
  const DgSpaces sp(m, QSpace::p0);
  SystemBlocks b = assemble_system(sp, flux(0.75), kOne);
  const ReducedOperator op = schur_reduce(b);
  const Eigen::VectorXd U1 = solve_reduced(op, b.F);
  const Eigen::VectorXd U2 = solve_reduced(op, 2.0 * b.F);
  EXPECT_LE(rel_diff(U2, 2.0 * U1), 1e-14);
}

TEST(Solve, Deterministic) {
  const Mesh m = disk_mesh(3, 2.0);
  const DgSpaces sp(m, QSpace::p1);
  const SystemBlocks b = assemble_system(sp, flux(0.75), kOne);
  const Solution x = solve(b), y = solve(b);
  EXPECT_EQ(x.U, y.U);
  EXPECT_EQ(x.Pperp, y.Pperp);
}

TEST(Solve, FactorizationFailureNamesPivot) {
  const Mesh m = uniform_interval_mesh(4);
  const DgSpaces sp(m, QSpace::p0);
  SystemBlocks b = assemble_system(sp, flux(0.75), kOne);
  b.C = -10.0 * b.C;
  try {
    solve_reduced(schur_reduce(b), b.F);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("pivot"), std::string::npos);
  }
}

TEST(Solve, SingularStabilizationIsStructural) {
  const Mesh m = uniform_interval_mesh(4);
  const DgSpaces sp(m, QSpace::p1);
  FluxParams p = flux(0.75);
  p.cs_rule = FluxParams::CsRule::constant;
  p.cs_value = 0.0;
  EXPECT_THROW(schur_reduce(assemble_system(sp, p, kOne)), StructuralError);
}

TEST(RecoverFluxes, BlockResiduals) {
  const Mesh m = uniform_interval_mesh(8);
  const DgSpaces sp(m, QSpace::p1);
  const SystemBlocks b = assemble_system(sp, flux(0.75), kOne);
  const Eigen::VectorXd U = solve_reduced(schur_reduce(b), b.F);
  const Solution x = recover_fluxes(b, U);
  EXPECT_LE(block_residuals(b, x).max(), 1e-10);
  const Solution y = solve(b);
  EXPECT_LE(block_residuals(b, y).max(), 1e-10);
}

TEST(RecoverFluxes, GradedMeshResidualsAfterRefinement) {
  const Mesh m = graded_interval_mesh(64, 4.0 - 2.0 * 0.6);
  const DgSpaces sp(m, QSpace::p1);
  const SystemBlocks b = assemble_system(sp, flux(0.6), kOne);
  EXPECT_LE(block_residuals(b, solve(b)).max(), 1e-10);
}

TEST(RecoverFluxes, ZeroAndP0) {
  const Mesh m = uniform_interval_mesh(8);
  const DgSpaces sp(m, QSpace::p0);
  const SystemBlocks b = assemble_system(sp, flux(0.75), kOne);
  const Solution z = recover_fluxes(b, Eigen::VectorXd::Zero(sp.v_size()));
  EXPECT_EQ(z.S.norm() + z.P0.norm(), 0.0);
  const Solution x = solve(b);
  EXPECT_EQ(x.Pperp.size(), 0);
  EXPECT_EQ(x.P0.size(), sp.sigma_size());
}

TEST(Solve, RenumberingEquivariance) {
  const Mesh m = disk_mesh(3, 2.0);
  const int E = m.num_elements();
  const fixture::Renumbered r = fixture::renumber(m, 11);
  const Mesh& p = r.mesh;
  const std::vector<int>& perm = r.element_map;
  for (QSpace q : {QSpace::p0, QSpace::p1}) {
    const DgSpaces sa(m, q), sb(p, q);
    const Solution xa = solve(assemble_system(sa, flux(0.75), kOne));
    const Solution xb = solve(assemble_system(sb, flux(0.75), kOne));
    double worst = 0.0, scale = 0.0;
    for (int e = 0; e < E; ++e) {
      const Point c = m.barycenter(e);
      for (int i = 0; i < 3; ++i) {
        const Point x = 0.5 * (c + m.element_vertex(e, i));
        const double ua = sa.eval_v(xa.U, e, x), ub = sb.eval_v(xb.U, perm[e], x);
        worst = std::max(worst, std::abs(ua - ub));
        scale = std::max(scale, std::abs(ua));
      }
    }
    EXPECT_LE(worst, 1e-9 * scale);
  }
}

}  // namespace
}  // namespace fracldg
