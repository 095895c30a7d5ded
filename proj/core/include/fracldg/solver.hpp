#pragma once

#include <string>

#include <Eigen/Core>

#include "fracldg/assembly.hpp"

namespace fracldg {

struct SolveDiagnostics {
  std::string method;  ///< "cholesky", "cg" or "lu"
  int iterations = 0;  ///< CG iterations, or refinement steps after Cholesky
  /// ||A_LDG U - F|| / ||F|| of the reduced solve, before block refinement.
  double relative_residual = 0.0;
};

/// Coefficient vectors of (u_h, sigma_h, Pi p_h, (I - Pi) p_h).
struct Solution {
  Eigen::VectorXd U;
  Eigen::VectorXd S;
  Eigen::VectorXd P0;
  Eigen::VectorXd Pperp;  ///< empty when Q = P0
  SolveDiagnostics diagnostics;
};

/// A_LDG = B0 M0^{-1} A M0^{-1} B0^T + B_perp Ms^{-1} B_perp^T + C, kept in
/// factored form. `apply` never forms the dense matrix; `dense` does.
/// References the blocks, which must outlive the operator.
class ReducedOperator {
 public:
  explicit ReducedOperator(const SystemBlocks& blocks);

  int size() const noexcept { return static_cast<int>(C_.rows()); }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd dense() const;
  /// Writes the lower triangle (at least) of A_LDG into `out`.
  void fill_dense(Eigen::MatrixXd& out) const;

 private:
  const Eigen::MatrixXd* R_;
  std::vector<SparseMatrix> W_;  ///< per component: B0_c M0_c^{-1}
  SparseMatrix B_perp_;
  SparseMatrix Ms_inv_;
  SparseMatrix C_;
};

ReducedOperator schur_reduce(const SystemBlocks& blocks);

struct SolveOptions {
  int dense_limit = 20000;
  double cg_tolerance = 1e-10;
  int cg_max_iterations = 0;  ///< 0: 10 * size
  /// Refinement steps on the four-block system in `solve`.
  int block_refinements = 3;
};

/// Dense in-place Cholesky when size <= dense_limit, otherwise unpreconditioned
/// CG to the relative residual tolerance. NumericalError on breakdown; a
/// Cholesky failure names the offending pivot.
Eigen::VectorXd solve_reduced(const ReducedOperator& op, const Eigen::VectorXd& F, const SolveOptions& options = {},
                              SolveDiagnostics* diag = nullptr);

/// S = -M0^{-1} B0^T U, P0 = M0^{-1} A S, Pperp = -Ms^{-1} B_perp^T U.
Solution recover_fluxes(const SystemBlocks& blocks, const Eigen::VectorXd& U);

/// Schur path: schur_reduce, solve_reduced, recover_fluxes, then up to
/// `block_refinements` refinement steps on the four-block system.
Solution solve(const SystemBlocks& blocks, const SolveOptions& options = {});

/// Dense LU of the full four-block system; test oracle for small meshes.
/// StructuralError if the system is numerically singular.
Solution solve_monolithic(const SystemBlocks& blocks);

/// Componentwise backward errors of the four block equations: for an
/// equation sum_k M_k x_k = 0 the value max_i |sum_k M_k x_k|_i /
/// (sum_k |M_k| |x_k|)_i. Rows whose terms all vanish are skipped.
struct BlockResiduals {
  double sigma = 0.0;  ///< A S - M0 P0
  double p0 = 0.0;     ///< M0 S + B0^T U
  double perp = 0.0;   ///< Ms Pperp + B_perp^T U
  double u = 0.0;      ///< -B0 P0 - B_perp Pperp + C U - F
  double absolute_max = 0.0;

  double max() const;
};

BlockResiduals block_residuals(const SystemBlocks& blocks, const Solution& sol);

}  // namespace fracldg
