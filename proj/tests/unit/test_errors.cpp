#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fracldg/assembly.hpp"
#include "fracldg/error.hpp"
#include "fracldg/errors.hpp"
#include "fracldg/kernel.hpp"
#include "fracldg/mesh.hpp"
#include "fracldg/solver.hpp"
#include "fracldg/spaces.hpp"
#include "oracles.hpp"

namespace fracldg {
namespace {

const ScalarField kOne = [](const Point&) { return 1.0; };

FluxParams flux(double s) {
  FluxParams p;
  p.s = s;
  return p;
}

Solution zero_solution(const DgSpaces& sp) {
  Solution z;
  z.U = Eigen::VectorXd::Zero(sp.v_size());
  z.S = Eigen::VectorXd::Zero(sp.sigma_size());
  z.P0 = Eigen::VectorXd::Zero(sp.sigma_size());
  z.Pperp = Eigen::VectorXd::Zero(sp.perp_size());
  return z;
}

// Nodal interpolant of the exact solution in the discontinuous P1 space.
Eigen::VectorXd interpolate(const DgSpaces& sp, const BallExact& ex) {
  const Mesh& m = sp.mesh();
  Eigen::VectorXd U(sp.v_size());
  for (int e = 0; e < m.num_elements(); ++e) {
    for (int i = 0; i <= sp.dim(); ++i) U[sp.v_index(e, i)] = ex.u(m.element_vertex(e, i));
  }
  return U;
}

TEST(BoundaryLayerRule, WeightsAndExactness) {
  for (const Mesh& m : {graded_interval_mesh(4, 2.0), disk_mesh(3, 2.0)}) {
    for (int e = 0; e < m.num_elements(); ++e) {
      double w = 0.0, lin = 0.0;
      Eigen::Vector3d bary = Eigen::Vector3d::Zero();
      boundary_layer_rule(m, e, {}, [&](const Eigen::Vector3d& lam, const Point& x, double weight) {
        w += weight;
        lin += weight * x[0];
        bary += weight * lam;
      });
      EXPECT_NEAR(w, m.measure(e), 1e-12 * m.measure(e));
      EXPECT_NEAR(lin, m.measure(e) * m.barycenter(e)[0], 1e-12 * m.measure(e));
      const int k = m.dim() + 1;
      for (int i = 0; i < k; ++i) EXPECT_NEAR(bary[i], m.measure(e) / k, 1e-12 * m.measure(e));
    }
  }
}

TEST(BoundaryLayerRule, ResolvesDistancePower) {
  // ∫_{-1}^{1} (1 - x^2)^s dx = sqrt(pi) Gamma(s + 1) / Gamma(s + 3/2).
  const Mesh m = uniform_interval_mesh(8);
  for (double s : {0.6, 0.9}) {
    const double exact = std::sqrt(std::numbers::pi) * oracle::gamma_hp(s + 1.0) / oracle::gamma_hp(s + 1.5);
    const double v = integrate_mesh(m, [&](const Point& x) { return std::pow(1.0 - x[0] * x[0], s); });
    EXPECT_NEAR(v / exact, 1.0, 1e-8);
  }
  const Mesh d = disk_mesh(4, 1.0);
  const double area = integrate_mesh(d, [](const Point&) { return 1.0; });
  EXPECT_NEAR(area, d.total_measure(), 1e-13);
}

TEST(BoundaryLayerRule, Scaling) {
  const Mesh m = disk_mesh(3, 1.0);
  const auto g = [](const Point& x) { return std::pow(std::max(0.0, 1.0 - x.squaredNorm()), 0.7); };
  const double a = integrate_mesh(m, g);
  const double b = integrate_mesh(m, [&](const Point& x) { return 4.0 * g(x); });
  EXPECT_NEAR(b, 4.0 * a, 1e-14);
}

TEST(EnergyError, ZeroSolution1D) {
  const Mesh m = uniform_interval_mesh(8);
  const DgSpaces sp(m, QSpace::p0);
  const SystemBlocks b = assemble_system(sp, flux(0.75), kOne);
  const BallExact ex(1, 0.75);
  const EnergyTerms t = energy_terms(b, zero_solution(sp), ex);
  EXPECT_EQ(t.p_sigma_h, 0.0);
  EXPECT_EQ(t.f_u_h, 0.0);
  EXPECT_EQ(t.stab, 0.0);
  EXPECT_NEAR(t.identity(), 1.081565, 1e-6);
  EXPECT_NEAR(t.f_u / ex.load_times_u(), 1.0, 1e-8);
  EXPECT_NEAR(energy_error(t), std::sqrt(t.f_u), 1e-15);
}

TEST(EnergyError, NegativeIdentity) {
  EnergyTerms t;
  t.f_u = 1.0;
  t.p_sigma_h = 1.0;
  EXPECT_THROW(energy_error(t), NumericalError);
  t.p_sigma_h = 0.5 + 1e-13;
  EXPECT_EQ(energy_error(t), 0.0);
}

TEST(EnergyError, StabilizationTermMatchesBlocks) {
  const Mesh m = graded_interval_mesh(8, 2.5);
  const DgSpaces sp(m, QSpace::p1);
  const SystemBlocks b = assemble_system(sp, flux(0.75), kOne);
  const Solution x = solve(b);
  const EnergyTerms t = energy_terms(b, x, BallExact(1, 0.75));
  EXPECT_DOUBLE_EQ(t.stab, x.Pperp.dot(b.Ms_perp.apply(x.Pperp)));
  EXPECT_DOUBLE_EQ(t.f_u_h, b.F.dot(x.U));
  EXPECT_GT(t.identity(), 0.0);
}

TEST(EnergyError, DiscreteEnergyAlgebra) {
  for (QSpace q : {QSpace::p0, QSpace::p1}) {
    const Mesh m = disk_mesh(3, q == QSpace::p1 ? 2.0 : 1.0);
    const DgSpaces sp(m, q);
    const SystemBlocks b = assemble_system(sp, flux(0.7), kOne);
    const Solution x = solve(b);
    const DiscreteEnergy d = discrete_energy(b, x);
    EXPECT_NEAR(d.a, x.S.dot(b.A.apply(x.S)), 1e-12 * d.load);
    EXPECT_NEAR(d.c, x.U.dot(b.C * x.U), 1e-12 * d.load);
    EXPECT_NEAR(d.a + d.stab + d.c, d.load, 1e-12 * d.load);
  }
}

TEST(L2Error, ZeroSolutionHalfOrder) {
  const Mesh m = uniform_interval_mesh(4);
  const DgSpaces sp(m, QSpace::p0);
  const double e = l2_error(sp, Eigen::VectorXd::Zero(sp.v_size()), BallExact(1, 0.5));
  EXPECT_NEAR(e, std::sqrt(4.0 / 3.0), 1e-13);
}

TEST(L2Error, InterpolantConverges) {
  double previous = 1e300;
  for (int J : {8, 16, 32, 64}) {
    const Mesh m = uniform_interval_mesh(J);
    const DgSpaces sp(m, QSpace::p0);
    const BallExact ex(1, 0.7);
    const double e = l2_error(sp, interpolate(sp, ex), ex);
    EXPECT_GT(e, 0.0);
    EXPECT_LT(e, previous);
    previous = e;
  }
  previous = 1e300;
  for (int J : {4, 8, 16}) {
    const Mesh m = disk_mesh(J, 1.0);
    const DgSpaces sp(m, QSpace::p0);
    const BallExact ex(2, 0.7);
    const double e = l2_error(sp, interpolate(sp, ex), ex);
    EXPECT_GT(e, 0.0);
    EXPECT_LT(e, previous);
    previous = e;
  }
}

TEST(EnergyError, DecreasesUnderRefinement) {
  double previous = 1e300;
  for (int J : {8, 16, 32}) {
    const Mesh m = uniform_interval_mesh(J);
    const DgSpaces sp(m, QSpace::p0);
    const SystemBlocks b = assemble_system(sp, flux(0.8), kOne);
    const double e = energy_error(b, solve(b), BallExact(1, 0.8));
    EXPECT_LT(e, previous);
    previous = e;
  }
}

}  // namespace
}  // namespace fracldg
