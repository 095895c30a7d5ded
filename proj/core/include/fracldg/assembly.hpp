#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "fracldg/riesz_pair.hpp"
#include "fracldg/spaces.hpp"

namespace fracldg {

using SparseMatrix = Eigen::SparseMatrix<double>;
using ScalarField = std::function<double(const Point&)>;

/// Penalty, stabilization and upwinding parameters.
struct FluxParams {
  enum class CsRule { automatic, constant };

  double s = 0.75;
  /// C11|_F = c11_scale * h_F^{1-2s}.
  double c11_scale = 1.0;
  /// automatic: C_s|_T = h_T^{2-2s} for n = 1 and h_T^{2 theta} for n = 2.
  CsRule cs_rule = CsRule::automatic;
  double cs_value = 1.0;
  double theta = 0.0;
  /// Per-face beta; empty means beta = 0 everywhere.
  std::vector<Point> beta;

  double c11(const Face& f) const;
  double cs(const Mesh& mesh, int e) const;
  Point beta_at(int face) const;
};

/// A = I_n ⊗ R in the component-major Sigma_h layout, with R the scalar
/// E x E matrix (1/gamma(2-2s)) ∫_{T_i} ∫_{T_j} |x-y|^{-(n-2+2s)}.
struct RieszMatrix {
  Eigen::MatrixXd scalar;
  int components = 1;

  int size() const noexcept { return static_cast<int>(scalar.rows()) * components; }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  double quadratic_form(const Eigen::VectorXd& x) const { return x.dot(apply(x)); }
  Eigen::MatrixXd dense() const;
};

/// Equal-size dense diagonal blocks; block b acts on [b k, (b+1) k).
class BlockDiagonal {
 public:
  BlockDiagonal() = default;
  BlockDiagonal(int num_blocks, int block_size);

  int num_blocks() const noexcept { return nb_; }
  int block_size() const noexcept { return k_; }
  int size() const noexcept { return nb_ * k_; }

  Eigen::Ref<Eigen::MatrixXd> block(int b) { return data_.middleCols(static_cast<Eigen::Index>(b) * k_, k_); }
  Eigen::Ref<const Eigen::MatrixXd> block(int b) const {
    return data_.middleCols(static_cast<Eigen::Index>(b) * k_, k_);
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// Applies the inverse block by block. Throws StructuralError if a block
  /// is not symmetric positive definite.
  Eigen::VectorXd solve(const Eigen::VectorXd& x) const;
  /// Same, applied to every column.
  Eigen::MatrixXd solve(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd dense() const;
  SparseMatrix sparse() const;
  bool is_zero() const { return data_.isZero(0.0); }
  /// Precomputes the block inverses; call before sharing across threads.
  void prepare_inverse() const;

 private:

  int nb_ = 0;
  int k_ = 0;
  Eigen::MatrixXd data_;
  mutable Eigen::MatrixXd inverse_;
  mutable bool factorized_ = false;
};

struct SystemBlocks {
  const DgSpaces* spaces = nullptr;
  FluxParams params;
  RieszMatrix A;
  BlockDiagonal M0;
  BlockDiagonal Ms_perp;
  SparseMatrix B0;      ///< v_size x sigma_size, B0(i, j) = b(v_i, tau_j)
  SparseMatrix B_perp;  ///< v_size x perp_size
  SparseMatrix C;       ///< v_size x v_size
  Eigen::VectorXd F;
};

RieszMatrix assemble_A(const DgSpaces& spaces, double s, const PairQuadrature& quad = {});
BlockDiagonal assemble_M0(const DgSpaces& spaces);
/// Empty (zero-size) when Q = P0.
BlockDiagonal assemble_Ms_perp(const DgSpaces& spaces, const FluxParams& params);
std::pair<SparseMatrix, SparseMatrix> assemble_B(const DgSpaces& spaces, const FluxParams& params);
SparseMatrix assemble_C(const DgSpaces& spaces, const FluxParams& params);
/// (f, v_i) with a degree-`degree` element rule.
Eigen::VectorXd assemble_F(const DgSpaces& spaces, const ScalarField& f, int degree = 6);

SystemBlocks assemble_system(const DgSpaces& spaces, const FluxParams& params, const ScalarField& f,
                             const PairQuadrature& quad = {});

/// Unit normal outward from element e across its local face `local`.
Point outward_normal(const Mesh& mesh, int e, int local);

}  // namespace fracldg
