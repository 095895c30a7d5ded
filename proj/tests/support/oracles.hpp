#pragma once

#include <array>

#include <Eigen/Core>

namespace fracldg::oracle {

using Vec2 = Eigen::Vector2d;
using Tri = std::array<Vec2, 3>;

struct Result {
  double value = 0.0;
  double error = 0.0;  ///< estimated absolute error
  bool converged = false;
};

/// Gamma in 50-digit binary floating point, rounded to double.
double gamma_hp(double x);

/// ∫_a^b ∫_c^d |x - y|^{-(2s-1)} via the overlap-length representation
/// ∫ |z|^{-beta} |[a,b] ∩ ([c,d] + z)| dz, adaptive Gauss-Kronrod per piece.
Result pair_1d(double a, double b, double c, double d, double s, double tol);

/// ∫_{T1} ∫_{T2} |x - y|^{-2s} via ∫ |z|^{-2s} |T1 ∩ (T2 + z)| dz in polar
/// coordinates. The overlap area is piecewise quadratic along each ray
/// (computed by polygon clipping); the angular integral is adaptive on arcs
/// between the critical directions.
Result pair_2d(const Tri& t1, const Tri& t2, double s, double tol);

/// Area of T1 ∩ (T2 + z).
double overlap_area(const Tri& t1, const Tri& t2, const Vec2& z);

/// Adaptive integral of f over [a, b] with relative tolerance tol.
template <class F>
Result integrate(F&& f, double a, double b, double tol);

}  // namespace fracldg::oracle

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fracldg::oracle {

template <class F>
Result integrate(F&& f, double a, double b, double tol) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 15, tol, &err);
  return {v, err, err <= tol * std::abs(v) + 1e-300};
}

}  // namespace fracldg::oracle
