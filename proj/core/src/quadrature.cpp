#include "fracldg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fracldg/error.hpp"

namespace fracldg {

namespace {

constexpr int kMaxSegment = 20;
constexpr int kMaxTriangleDegree = 20;

QuadRule build_gauss(int k) {
  QuadRule rule;
  rule.points.resize(static_cast<std::size_t>(k), Point::Zero());
  rule.weights.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    // Newton iteration on P_k from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= k; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = k * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0;
    double p1 = x;
    for (int j = 2; j <= k; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = k * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto idx = static_cast<std::size_t>(k - 1 - i);
    rule.points[idx][0] = 0.5 * (x + 1.0);
    rule.weights[idx] = 0.5 * w;
  }
  return rule;
}

}  // namespace

const QuadRule& gauss_segment(int k) {
  static const std::vector<QuadRule> rules = [] {
    std::vector<QuadRule> r;
    for (int j = 1; j <= kMaxSegment; ++j) r.push_back(build_gauss(j));
    return r;
  }();
  if (k < 1 || k > kMaxSegment) {
    throw ConfigError("gauss_segment: unsupported order " + std::to_string(k) + " (1..20)");
  }
  return rules[static_cast<std::size_t>(k - 1)];
}

QuadRule collapsed_triangle(int k) {
  const QuadRule& g = gauss_segment(k);
  QuadRule rule;
  rule.points.reserve(g.size() * g.size());
  rule.weights.reserve(g.size() * g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double u = g.points[i][0];
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double v = g.points[j][0];
      rule.points.emplace_back(u * (1.0 - v), u * v);
      rule.weights.push_back(g.weights[i] * g.weights[j] * u);
    }
  }
  return rule;
}

const QuadRule& gauss_triangle(int degree) {
  static const std::vector<QuadRule> rules = [] {
    std::vector<QuadRule> r;
    // The u-direction carries the extra Jacobian factor, hence degree + 1.
    for (int d = 0; d <= kMaxTriangleDegree; ++d) r.push_back(collapsed_triangle((d + 2 + 1) / 2));
    return r;
  }();
  if (degree < 0 || degree > kMaxTriangleDegree) {
    throw ConfigError("gauss_triangle: unsupported degree " + std::to_string(degree) + " (0..20)");
  }
  return rules[static_cast<std::size_t>(degree)];
}

void map_to_triangle(const QuadRule& ref, const Triangle& t, std::vector<Point>& points,
                     std::vector<double>& weights) {
  const Point e1 = t[1] - t[0];
  const Point e2 = t[2] - t[0];
  const double jac = std::abs(e1[0] * e2[1] - e1[1] * e2[0]);
  points.resize(ref.size());
  weights.resize(ref.size());
  for (std::size_t q = 0; q < ref.size(); ++q) {
    points[q] = t[0] + ref.points[q][0] * e1 + ref.points[q][1] * e2;
    weights[q] = ref.weights[q] * jac;
  }
}

}  // namespace fracldg
