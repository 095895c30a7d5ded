#pragma once

#include <Eigen/Core>

namespace fracldg {

/// Gamma function on the positive axis. Thin wrapper around std::tgamma that
/// rejects non-positive and non-finite arguments.
double gamma_fn(double x);

/// Spatial dimension and fractional order s in (1/2, 1). The Riesz order
/// alpha = 2 - 2s is always derived, never stored.
class FracParams {
 public:
  FracParams(int dim, double s);

  int dim() const noexcept { return dim_; }
  double s() const noexcept { return s_; }
  double alpha() const noexcept { return 2.0 - 2.0 * s_; }
  /// Exponent of |x - y| in the Riesz kernel, n - alpha.
  double kernel_exponent() const noexcept { return dim_ - alpha(); }

 private:
  int dim_;
  double s_;
};

/// gamma(alpha) = pi^{n/2} 2^alpha Gamma(alpha/2) / Gamma(n/2 - alpha/2),
/// the constant such that I_alpha v = gamma^{-1} |.|^{alpha-n} * v.
/// Throws std::domain_error unless 0 < alpha < n.
double riesz_normalization(int n, double alpha);

/// K_{n,s} = 2^{-2s} Gamma(n/2) / (Gamma(n/2 + s) Gamma(1 + s)); the
/// unit-ball solution of (-Delta)^s u = 1 is K (1 - |x|^2)_+^s.
/// Throws std::domain_error unless n in {1,2} and 0 < s < 1.
double ball_constant(int n, double s);

struct BallState {
  double u = 0.0;
  Eigen::Vector2d sigma = Eigen::Vector2d::Zero();
  Eigen::Vector2d p = Eigen::Vector2d::Zero();
};

/// Closed-form solution of the unit-ball benchmark with f = 1.
///
/// u = K (1-|x|^2)_+^s, sigma = grad u, p = I_{2-2s} sigma = -x/n.
/// Only the first n coordinates of a point are read; the unused components
/// of sigma and p are zero. sigma is returned as 0 for |x| >= 1, including
/// the unit sphere itself where it is unbounded.
class BallExact {
 public:
  BallExact(int n, double s);

  int dim() const noexcept { return n_; }
  double s() const noexcept { return s_; }
  double K() const noexcept { return K_; }

  double u(const Eigen::Vector2d& x) const;
  Eigen::Vector2d sigma(const Eigen::Vector2d& x) const;
  Eigen::Vector2d p(const Eigen::Vector2d& x) const;
  BallState at(const Eigen::Vector2d& x) const;

  double f(const Eigen::Vector2d&) const { return 1.0; }
  /// (f, u) over the unit ball, i.e. K * |S^{n-1}| * B(n/2, s+1) / 2.
  double load_times_u() const;

 private:
  double radius_sq(const Eigen::Vector2d& x) const;

  int n_;
  double s_;
  double K_;
};

BallState exact_ball(int n, double s, const Eigen::Vector2d& x);

}  // namespace fracldg
