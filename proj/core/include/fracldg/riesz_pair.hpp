#pragma once

#include "fracldg/quadrature.hpp"

namespace fracldg {

/// Singularity structure of an element pair, from the number of shared
/// vertices. 1D pairs use identical / adjacent / disjoint.
enum class PairClass { identical, shared_edge, shared_vertex, adjacent, disjoint };

const char* to_string(PairClass c);

/// ∫_a^b ∫_c^d |x - y|^{-(2s-1)} dy dx in closed form, without the Riesz
/// normalization. Either interval may be empty (a == b).
double riesz_pair_1d(double a, double b, double c, double d, double s);

PairClass classify_pair_1d(double a, double b, double c, double d);

/// Exactly coincident vertices decide the class; in a conforming mesh this
/// is equivalent to comparing vertex ids.
PairClass classify_pair_2d(const Triangle& t1, const Triangle& t2);

/// Gauss orders. Singular classes use `singular` points per transformed
/// coordinate; disjoint pairs use a k x k collapsed rule per triangle, with
/// k = `near` when the barycenter distance is below
/// near_factor * max(diam T1, diam T2) and k = `far` otherwise.
struct PairQuadrature {
  int singular = 8;
  int far = 3;
  int near = 6;
  double near_factor = 2.0;

  static PairQuadrature uniform(int order) { return {order, order, order, 2.0}; }
  PairQuadrature scaled(int factor) const {
    return {singular * factor, far * factor, near * factor, near_factor};
  }
};

/// ∫_{T1} ∫_{T2} |x - y|^{-2s} dy dx, without the Riesz normalization.
/// Singular pairs are handled by Sauter-Schwab transformations in which the
/// radial coordinate is integrated analytically. The result does not depend
/// on argument order or on the vertex order within each triangle.
/// Throws StructuralError for a degenerate triangle.
double riesz_pair_2d(const Triangle& t1, const Triangle& t2, double s, const PairQuadrature& quad = {});

/// Kernel |x - y|^{-gamma} integrated over a disjoint pair with precomputed
/// physical quadrature points; used by the assembly loop.
double riesz_pair_disjoint(const std::vector<Point>& x, const std::vector<double>& wx,
                           const std::vector<Point>& y, const std::vector<double>& wy, double gamma);

}  // namespace fracldg
