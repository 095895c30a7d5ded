#pragma once

#include <array>
#include <vector>

#include "fracldg/mesh.hpp"

namespace fracldg {

/// Points and weights on a reference cell. Segment rules live on [0, 1]
/// (second coordinate zero); triangle rules on conv{(0,0), (1,0), (0,1)}.
struct QuadRule {
  std::vector<Point> points;
  std::vector<double> weights;

  std::size_t size() const noexcept { return weights.size(); }
};

/// k-point Gauss-Legendre rule on [0, 1], exact up to degree 2k - 1.
/// Supported k: 1..20; the rules are computed once and shared.
const QuadRule& gauss_segment(int k);

/// Collapsed (Duffy) Gauss rule on the reference triangle exact for
/// polynomials of total degree <= `degree`, 0 <= degree <= 20.
const QuadRule& gauss_triangle(int degree);

/// Conical product rule with k x k points on the reference triangle.
QuadRule collapsed_triangle(int k);

using Triangle = std::array<Point, 3>;

/// Maps the rule of `ref` onto the physical triangle; weights are scaled by
/// 2 |T| so that they sum to |T|.
void map_to_triangle(const QuadRule& ref, const Triangle& t, std::vector<Point>& points,
                     std::vector<double>& weights);

}  // namespace fracldg
