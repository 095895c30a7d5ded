#include "fracldg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "fracldg/error.hpp"

namespace fracldg {

namespace {

// Inverse of a block-diagonal matrix as a sparse matrix. Blocks are at most
// 4x4, so explicit inverses are cheap and well-conditioned relative to C.
SparseMatrix sparse_inverse(const BlockDiagonal& M) {
  const int k = M.block_size();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(M.num_blocks()) * k * k);
  for (int b = 0; b < M.num_blocks(); ++b) {
    Eigen::LLT<Eigen::MatrixXd> llt(M.block(b));
    if (llt.info() != Eigen::Success) {
      throw StructuralError("schur_reduce: local block " + std::to_string(b) + " is singular (requires C_s > 0)");
    }
    const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(k, k));
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) trip.emplace_back(b * k + i, b * k + j, inv(i, j));
    }
  }
  SparseMatrix out(M.size(), M.size());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

// One term M x of a block equation with its magnitude |M| |x|.
struct Term {
  Eigen::VectorXd value;
  Eigen::VectorXd magnitude;
};

// Componentwise backward error max_i |sum_k term_k|_i / (sum_k |M_k| |x_k|)_i
// of an equation sum_k term_k = 0.
double componentwise_residual(std::initializer_list<Term> terms, double& absolute) {
  const Eigen::Index n = terms.begin()->value.size();
  if (n == 0) return 0.0;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd scale = Eigen::VectorXd::Zero(n);
  for (const auto& t : terms) {
    sum += t.value;
    scale += t.magnitude;
  }
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = std::abs(sum[i]);
    absolute = std::max(absolute, r);
    if (r == 0.0) continue;
    worst = std::max(worst, scale[i] > 0.0 ? r / scale[i] : std::numeric_limits<double>::infinity());
  }
  return worst;
}

Term sparse_term(const SparseMatrix& M, const Eigen::VectorXd& x, double sign = 1.0) {
  return {sign * (M * x), SparseMatrix(M.cwiseAbs()) * x.cwiseAbs()};
}

Term block_term(const BlockDiagonal& M, const Eigen::VectorXd& x, double sign = 1.0) {
  Term t{sign * M.apply(x), Eigen::VectorXd(M.size())};
  const int k = M.block_size();
  for (int b = 0; b < M.num_blocks(); ++b) {
    t.magnitude.segment(b * k, k).noalias() = M.block(b).cwiseAbs() * x.segment(b * k, k).cwiseAbs();
  }
  return t;
}

}  // namespace

ReducedOperator::ReducedOperator(const SystemBlocks& blocks) : R_(&blocks.A.scalar), C_(blocks.C) {
  const int E = static_cast<int>(blocks.A.scalar.rows());
  const int n = blocks.A.components;
  if (blocks.M0.size() != n * E || blocks.B0.cols() != n * E) throw StructuralError("schur_reduce: block size mismatch");

  Eigen::VectorXd m0_inv(n * E);
  for (int b = 0; b < n * E; ++b) {
    const double m = blocks.M0.block(b)(0, 0);
    if (!(m > 0.0)) throw StructuralError("schur_reduce: M0 block " + std::to_string(b) + " is not positive");
    m0_inv[b] = 1.0 / m;
  }
  W_.reserve(n);
  for (int c = 0; c < n; ++c) {
    SparseMatrix w = blocks.B0.middleCols(static_cast<Eigen::Index>(c) * E, E);
    w = w * m0_inv.segment(static_cast<Eigen::Index>(c) * E, E).asDiagonal();
    W_.push_back(std::move(w));
  }

  if (blocks.B_perp.cols() > 0) {
    B_perp_ = blocks.B_perp;
    Ms_inv_ = sparse_inverse(blocks.Ms_perp);
  }
}

// The stabilization part is applied in factored form, exactly as the block
// equations evaluate it; an assembled B_perp Ms^{-1} B_perp^T carries
// rounding of order eps |B_perp Ms^{-1} B_perp^T| that graded meshes amplify.
Eigen::VectorXd ReducedOperator::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = C_ * x;
  if (B_perp_.cols() > 0) {
    const Eigen::VectorXd g = Ms_inv_ * Eigen::VectorXd(B_perp_.transpose() * x);
    y.noalias() += B_perp_ * g;
  }
  for (const auto& w : W_) {
    const Eigen::VectorXd t = w.transpose() * x;
    const Eigen::VectorXd r = *R_ * t;
    y.noalias() += w * r;
  }
  return y;
}

void ReducedOperator::fill_dense(Eigen::MatrixXd& out) const {
  const int N = size();
  out.setZero(N, N);
  constexpr int kBlock = 1024;
  for (const auto& w : W_) {
    const SparseMatrix wt = w.transpose();
    for (int j0 = 0; j0 < N; j0 += kBlock) {
      const int nb = std::min(kBlock, N - j0);
      const SparseMatrix wt_blk = wt.middleCols(j0, nb);
      const Eigen::MatrixXd G = *R_ * wt_blk;
      out.middleCols(j0, nb).noalias() += w * G;
    }
  }
  SparseMatrix local = C_;
  if (B_perp_.cols() > 0) {
    const SparseMatrix bt = B_perp_.transpose();
    local = SparseMatrix(B_perp_ * Ms_inv_ * bt) + C_;
  }
  for (int k = 0; k < local.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(local, k); it; ++it) out(it.row(), it.col()) += it.value();
  }
}

Eigen::MatrixXd ReducedOperator::dense() const {
  Eigen::MatrixXd out;
  fill_dense(out);
  return out;
}

ReducedOperator schur_reduce(const SystemBlocks& blocks) { return ReducedOperator(blocks); }

namespace {

// Graded meshes spread the diagonal over many orders of magnitude, so the
// matrix is equilibrated (D^{-1/2} A D^{-1/2}) before factorization.
class DenseCholesky {
 public:
  explicit DenseCholesky(const ReducedOperator& op) {
    op.fill_dense(L_);
    const Eigen::Index N = L_.rows();
    d_.resize(N);
    for (Eigen::Index i = 0; i < N; ++i) {
      if (!(L_(i, i) > 0.0)) {
        throw NumericalError("Cholesky factorization of the reduced matrix failed at pivot " + std::to_string(i) +
                             " of " + std::to_string(N) + " (nonpositive diagonal)");
      }
      d_[i] = 1.0 / std::sqrt(L_(i, i));
    }
    for (Eigen::Index j = 0; j < N; ++j) L_.col(j).tail(N - j).array() *= d_.tail(N - j).array() * d_[j];
    const Eigen::Index fail = Eigen::internal::llt_inplace<double, Eigen::Lower>::blocked(L_);
    if (fail >= 0) {
      throw NumericalError("Cholesky factorization of the reduced matrix failed at pivot " + std::to_string(fail) +
                           " of " + std::to_string(N));
    }
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd y = d_.cwiseProduct(rhs);
    L_.triangularView<Eigen::Lower>().solveInPlace(y);
    L_.triangularView<Eigen::Lower>().adjoint().solveInPlace(y);
    return d_.cwiseProduct(y);
  }

 private:
  Eigen::MatrixXd L_;
  Eigen::VectorXd d_;
};

// Fixed-precision refinement against the factored-form operator.
Eigen::VectorXd refine(const ReducedOperator& op, const DenseCholesky& chol, const Eigen::VectorXd& F, int& steps) {
  Eigen::VectorXd u = chol.solve(F);
  Eigen::VectorXd r = F - op.apply(u);
  double rnorm = r.norm();
  steps = 0;
  for (int it = 0; it < 5 && rnorm > 1e-15 * F.norm(); ++it) {
    const Eigen::VectorXd candidate = u + chol.solve(r);
    const Eigen::VectorXd r_new = F - op.apply(candidate);
    const double n_new = r_new.norm();
    if (!(n_new < 0.5 * rnorm)) break;
    u = candidate;
    r = r_new;
    rnorm = n_new;
    ++steps;
  }
  return u;
}

Eigen::VectorXd cg_solve(const ReducedOperator& op, const Eigen::VectorXd& F, double tol, int max_iter, int& iters) {
  const double fnorm = F.norm();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(F.size());
  Eigen::VectorXd r = F;
  Eigen::VectorXd p = r;
  double rr = r.squaredNorm();
  iters = 0;
  while (std::sqrt(rr) > tol * fnorm) {
    if (iters >= max_iter) {
      throw NumericalError("conjugate gradients did not reach tolerance in " + std::to_string(max_iter) + " iterations");
    }
    const Eigen::VectorXd q = op.apply(p);
    const double pq = p.dot(q);
    if (!(pq > 0.0)) throw NumericalError("conjugate gradients breakdown: reduced matrix not positive definite");
    const double alpha = rr / pq;
    x.noalias() += alpha * p;
    r.noalias() -= alpha * q;
    const double rr_new = r.squaredNorm();
    p = r + (rr_new / rr) * p;
    rr = rr_new;
    ++iters;
  }
  return x;
}

}  // namespace

namespace {

// Reduced solves sharing one factorization (or none, for CG).
class ReducedSolver {
 public:
  ReducedSolver(const ReducedOperator& op, const SolveOptions& options) : op_(op), options_(options) {
    if (op.size() <= options.dense_limit) chol_.emplace(op);
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& F, SolveDiagnostics& d) const {
    if (F.size() != op_.size()) throw StructuralError("solve_reduced: right-hand side size mismatch");
    d.method = chol_ ? "cholesky" : "cg";
    const double fnorm = F.norm();
    if (fnorm == 0.0) {
      d.relative_residual = 0.0;
      return Eigen::VectorXd::Zero(F.size());
    }
    Eigen::VectorXd U;
    if (chol_) {
      U = refine(op_, *chol_, F, d.iterations);
    } else {
      const int max_iter = options_.cg_max_iterations > 0 ? options_.cg_max_iterations : 10 * op_.size();
      U = cg_solve(op_, F, options_.cg_tolerance, max_iter, d.iterations);
    }
    d.relative_residual = (op_.apply(U) - F).norm() / fnorm;
    if (!std::isfinite(d.relative_residual)) throw NumericalError("solve_reduced: non-finite residual");
    return U;
  }

 private:
  const ReducedOperator& op_;
  SolveOptions options_;
  std::optional<DenseCholesky> chol_;
};

struct BlockVectors {
  Eigen::VectorXd sigma, p0, perp, u;
};

// Block elimination for a general right-hand side of
//   A S - M0 P0 = g.sigma,  M0 S + B0^T U = g.p0,
//   Ms Pperp + B_perp^T U = g.perp,  -B0 P0 - B_perp Pperp + C U = g.u.
Solution block_solve(const SystemBlocks& b, const ReducedSolver& reduced, const BlockVectors& g,
                     SolveDiagnostics& d) {
  const bool perp = b.B_perp.cols() > 0;
  Eigen::VectorXd rhs = g.u + b.B0 * b.M0.solve(Eigen::VectorXd(b.A.apply(b.M0.solve(g.p0)) - g.sigma));
  if (perp) rhs += b.B_perp * b.Ms_perp.solve(g.perp);
  Solution x;
  x.U = reduced.solve(rhs, d);
  x.S = b.M0.solve(Eigen::VectorXd(g.p0 - b.B0.transpose() * x.U));
  x.P0 = b.M0.solve(Eigen::VectorXd(b.A.apply(x.S) - g.sigma));
  if (perp) x.Pperp = b.Ms_perp.solve(Eigen::VectorXd(g.perp - b.B_perp.transpose() * x.U));
  return x;
}

BlockVectors residual_vectors(const SystemBlocks& b, const Solution& x) {
  BlockVectors r;
  r.sigma = -(b.A.apply(x.S) - b.M0.apply(x.P0));
  r.p0 = -(b.M0.apply(x.S) + b.B0.transpose() * x.U);
  Eigen::VectorXd u = b.F + b.B0 * x.P0 - b.C * x.U;
  if (b.B_perp.cols() > 0) {
    r.perp = -(b.Ms_perp.apply(x.Pperp) + b.B_perp.transpose() * x.U);
    u += b.B_perp * x.Pperp;
  }
  r.u = u;
  return r;
}

}  // namespace

Eigen::VectorXd solve_reduced(const ReducedOperator& op, const Eigen::VectorXd& F, const SolveOptions& options,
                              SolveDiagnostics* diag) {
  SolveDiagnostics d;
  const ReducedSolver solver(op, options);
  Eigen::VectorXd U = solver.solve(F, d);
  if (diag) *diag = d;
  return U;
}

Solution recover_fluxes(const SystemBlocks& blocks, const Eigen::VectorXd& U) {
  Solution sol;
  sol.U = U;
  sol.S = -blocks.M0.solve(Eigen::VectorXd(blocks.B0.transpose() * U));
  sol.P0 = blocks.M0.solve(blocks.A.apply(sol.S));
  if (blocks.B_perp.cols() > 0) {
    sol.Pperp = -blocks.Ms_perp.solve(Eigen::VectorXd(blocks.B_perp.transpose() * U));
  }
  return sol;
}

// Flux recovery from U alone loses accuracy where C_s h^{n+2} is tiny: the
// jumps of u_h that determine Pperp are far below the precision of U. Each
// refinement step solves for a correction of all four blocks, so the flux
// corrections carry the information that does not fit into U.
Solution solve(const SystemBlocks& blocks, const SolveOptions& options) {
  const ReducedOperator op = schur_reduce(blocks);
  const ReducedSolver reduced(op, options);
  SolveDiagnostics diag;
  Solution sol = recover_fluxes(blocks, reduced.solve(blocks.F, diag));
  double best = block_residuals(blocks, sol).max();
  for (int it = 0; it < options.block_refinements && best > 1e-14; ++it) {
    SolveDiagnostics inner;
    const Solution dx = block_solve(blocks, reduced, residual_vectors(blocks, sol), inner);
    Solution cand = sol;
    cand.U += dx.U;
    cand.S += dx.S;
    cand.P0 += dx.P0;
    if (cand.Pperp.size() > 0) cand.Pperp += dx.Pperp;
    const double r = block_residuals(blocks, cand).max();
    if (!(r < 0.5 * best)) break;
    sol = std::move(cand);
    best = r;
  }
  sol.diagnostics = diag;
  return sol;
}

Solution solve_monolithic(const SystemBlocks& blocks) {
  const int ns = static_cast<int>(blocks.B0.cols());
  const int np = static_cast<int>(blocks.B_perp.cols());
  const int nv = static_cast<int>(blocks.C.rows());
  const int os = 0, op0 = ns, opp = 2 * ns, ou = 2 * ns + np;
  const int N = ou + nv;

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(N, N);
  K.block(os, os, ns, ns) = blocks.A.dense();
  const Eigen::MatrixXd m0 = blocks.M0.dense();
  K.block(os, op0, ns, ns) = -m0;
  K.block(op0, os, ns, ns) = m0;
  const Eigen::MatrixXd b0 = Eigen::MatrixXd(blocks.B0);
  K.block(op0, ou, ns, nv) = b0.transpose();
  K.block(ou, op0, nv, ns) = -b0;
  if (np > 0) {
    const Eigen::MatrixXd bp = Eigen::MatrixXd(blocks.B_perp);
    K.block(opp, opp, np, np) = blocks.Ms_perp.dense();
    K.block(opp, ou, np, nv) = bp.transpose();
    K.block(ou, opp, nv, np) = -bp;
  }
  K.block(ou, ou, nv, nv) = Eigen::MatrixXd(blocks.C);

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
  rhs.segment(ou, nv) = blocks.F;

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(K);
  const double rcond = lu.rcond();
  if (!(rcond >= 1e-14)) {
    throw StructuralError("solve_monolithic: system is numerically singular (rcond " + std::to_string(rcond) + ")");
  }
  const Eigen::VectorXd x = lu.solve(rhs);

  Solution sol;
  sol.S = x.segment(os, ns);
  sol.P0 = x.segment(op0, ns);
  if (np > 0) sol.Pperp = x.segment(opp, np);
  sol.U = x.segment(ou, nv);
  sol.diagnostics.method = "lu";
  sol.diagnostics.relative_residual = blocks.F.norm() == 0.0 ? 0.0 : (K * x - rhs).norm() / blocks.F.norm();
  return sol;
}

double BlockResiduals::max() const { return std::max({sigma, p0, perp, u}); }

BlockResiduals block_residuals(const SystemBlocks& blocks, const Solution& sol) {
  BlockResiduals r;
  // The Riesz matrix has positive entries, so |A| |S| = A |S|.
  const Term as{blocks.A.apply(sol.S), blocks.A.apply(sol.S.cwiseAbs())};
  r.sigma = componentwise_residual({as, block_term(blocks.M0, sol.P0, -1.0)}, r.absolute_max);
  const SparseMatrix b0t = blocks.B0.transpose();
  r.p0 = componentwise_residual({block_term(blocks.M0, sol.S), sparse_term(b0t, sol.U)}, r.absolute_max);
  const Term f{-blocks.F, blocks.F.cwiseAbs()};
  if (blocks.B_perp.cols() > 0) {
    const SparseMatrix bpt = blocks.B_perp.transpose();
    r.perp = componentwise_residual({block_term(blocks.Ms_perp, sol.Pperp), sparse_term(bpt, sol.U)}, r.absolute_max);
    r.u = componentwise_residual({sparse_term(blocks.B0, sol.P0, -1.0), sparse_term(blocks.B_perp, sol.Pperp, -1.0),
                                  sparse_term(blocks.C, sol.U), f},
                                 r.absolute_max);
  } else {
    r.u = componentwise_residual({sparse_term(blocks.B0, sol.P0, -1.0), sparse_term(blocks.C, sol.U), f},
                                 r.absolute_max);
  }
  return r;
}

}  // namespace fracldg
