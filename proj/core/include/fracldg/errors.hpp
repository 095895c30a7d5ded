#pragma once

#include <functional>

#include <Eigen/Core>

#include "fracldg/kernel.hpp"
#include "fracldg/solver.hpp"

namespace fracldg {

/// Quadrature for integrands involving the exact solution, which behaves
/// like dist^s near the boundary. Cells touching the boundary are halved
/// (1D) or red-refined (2D) recursively toward it, `levels` times.
struct ErrorOptions {
  int levels = 8;
  int degree = 6;
};

/// Called once per quadrature point: barycentric coordinates in the parent
/// element, physical point, weight.
using PointVisitor = std::function<void(const Eigen::Vector3d& lambda, const Point& x, double w)>;

/// Visits a boundary-layer rule on element e. Interior elements get the
/// plain degree-`degree` rule.
void boundary_layer_rule(const Mesh& mesh, int e, const ErrorOptions& options, const PointVisitor& visit);

/// Integrates g over the mesh domain with the boundary-layer rule.
double integrate_mesh(const Mesh& mesh, const std::function<double(const Point&)>& g, const ErrorOptions& options = {});

/// Terms of |(sigma - sigma_h, u - u_h)|^2 = -2 (p, sigma_h) + (f, u + u_h) - a_s(p_h, p_h).
struct EnergyTerms {
  double p_sigma_h = 0.0;  ///< (p, sigma_h), exact since p is linear
  double f_u = 0.0;        ///< (f, u) over the mesh domain
  double f_u_h = 0.0;      ///< (f, u_h) = F^T U
  double stab = 0.0;       ///< a_s(p_h, p_h) = Pperp^T Ms Pperp
  double ball_gap = 0.0;   ///< (f, u) over the unit ball minus f_u

  double identity() const { return -2.0 * p_sigma_h + f_u + f_u_h - stab; }
};

EnergyTerms energy_terms(const SystemBlocks& blocks, const Solution& sol, const BallExact& exact,
                         const ErrorOptions& options = {});

/// Square root of the energy identity. Values below -1e-10 max(1, |(f,u)|)
/// throw NumericalError; smaller negative values are clamped to zero.
double energy_error(const SystemBlocks& blocks, const Solution& sol, const BallExact& exact,
                    const ErrorOptions& options = {});
double energy_error(const EnergyTerms& terms);

/// ||u - u_h||_{L^2} with the boundary-layer rule.
double l2_error(const DgSpaces& spaces, const Eigen::VectorXd& U, const BallExact& exact,
                const ErrorOptions& options = {});

/// sigma_h^T A sigma_h + Pperp^T Ms Pperp + U^T C U and F^T U; equal for any
/// solution of the discrete system.
struct DiscreteEnergy {
  double a = 0.0;
  double stab = 0.0;
  double c = 0.0;
  double load = 0.0;
};

DiscreteEnergy discrete_energy(const SystemBlocks& blocks, const Solution& sol);

}  // namespace fracldg
