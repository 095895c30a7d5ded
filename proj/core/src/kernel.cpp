#include "fracldg/kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fracldg {

double gamma_fn(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("gamma_fn: argument must be positive and finite, got " + std::to_string(x));
  }
  return std::tgamma(x);
}

FracParams::FracParams(int dim, double s) : dim_(dim), s_(s) {
  if (dim != 1 && dim != 2) throw std::domain_error("FracParams: dimension must be 1 or 2");
  if (!(s > 0.5 && s < 1.0)) throw std::domain_error("FracParams: s must lie in (1/2, 1)");
}

double riesz_normalization(int n, double alpha) {
  if (n < 1) throw std::domain_error("riesz_normalization: dimension must be positive");
  if (!(alpha > 0.0 && alpha < n)) {
    throw std::domain_error("riesz_normalization: alpha must lie in (0, n)");
  }
  const double half_n = 0.5 * n;
  return std::pow(std::numbers::pi, half_n) * std::pow(2.0, alpha) * gamma_fn(0.5 * alpha) /
         gamma_fn(half_n - 0.5 * alpha);
}

double ball_constant(int n, double s) {
  if (n != 1 && n != 2) throw std::domain_error("ball_constant: dimension must be 1 or 2");
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("ball_constant: s must lie in (0, 1)");
  const double half_n = 0.5 * n;
  return std::pow(2.0, -2.0 * s) * gamma_fn(half_n) / (gamma_fn(half_n + s) * gamma_fn(1.0 + s));
}

BallExact::BallExact(int n, double s) : n_(n), s_(s), K_(ball_constant(n, s)) {}

double BallExact::radius_sq(const Eigen::Vector2d& x) const {
  return n_ == 1 ? x[0] * x[0] : x.squaredNorm();
}

double BallExact::u(const Eigen::Vector2d& x) const {
  const double w = 1.0 - radius_sq(x);
  return w > 0.0 ? K_ * std::pow(w, s_) : 0.0;
}

Eigen::Vector2d BallExact::sigma(const Eigen::Vector2d& x) const {
  const double w = 1.0 - radius_sq(x);
  Eigen::Vector2d out = Eigen::Vector2d::Zero();
  if (w <= 0.0) return out;
  const double scale = -2.0 * s_ * K_ * std::pow(w, s_ - 1.0);
  out[0] = scale * x[0];
  if (n_ == 2) out[1] = scale * x[1];
  return out;
}

Eigen::Vector2d BallExact::p(const Eigen::Vector2d& x) const {
  Eigen::Vector2d out = Eigen::Vector2d::Zero();
  out[0] = -x[0] / n_;
  if (n_ == 2) out[1] = -x[1] / n_;
  return out;
}

BallState BallExact::at(const Eigen::Vector2d& x) const { return {u(x), sigma(x), p(x)}; }

double BallExact::load_times_u() const {
  const double half_n = 0.5 * n_;
  const double sphere = n_ == 1 ? 2.0 : 2.0 * std::numbers::pi;
  const double beta = gamma_fn(half_n) * gamma_fn(s_ + 1.0) / gamma_fn(half_n + s_ + 1.0);
  return K_ * 0.5 * sphere * beta;
}

BallState exact_ball(int n, double s, const Eigen::Vector2d& x) { return BallExact(n, s).at(x); }

}  // namespace fracldg
