#include "fracldg/riesz_pair.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Core>

#include "fracldg/error.hpp"

namespace fracldg {

namespace {

bool lex_less(const Point& a, const Point& b) { return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]); }

bool same(const Point& a, const Point& b) { return a[0] == b[0] && a[1] == b[1]; }

bool lex_less(const Triangle& a, const Triangle& b) {
  for (int i = 0; i < 3; ++i) {
    if (lex_less(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)])) return true;
    if (lex_less(b[static_cast<std::size_t>(i)], a[static_cast<std::size_t>(i)])) return false;
  }
  return false;
}

Triangle sorted(Triangle t) {
  std::sort(t.begin(), t.end(), [](const Point& a, const Point& b) { return lex_less(a, b); });
  return t;
}

double cross(const Point& a, const Point& b) { return a[0] * b[1] - a[1] * b[0]; }

double twice_area(const Triangle& t) { return std::abs(cross(t[1] - t[0], t[2] - t[0])); }

double diameter(const Triangle& t) {
  return std::max({(t[0] - t[1]).norm(), (t[1] - t[2]).norm(), (t[2] - t[0]).norm()});
}

double kernel(const Point& z, double gamma) { return std::pow(z.squaredNorm(), -0.5 * gamma); }

// Closed-form primitive of |t|^{-beta} integrated twice.
double F1d(double t, double beta) { return std::pow(std::abs(t), 2.0 - beta) / ((1.0 - beta) * (2.0 - beta)); }

double identical_pair(const Triangle& t, double gamma, int order) {
  const double jac = twice_area(t);
  const Point a = t[1] - t[0];
  const Point b = t[2] - t[1];
  const QuadRule& g = gauss_segment(order);
  double sum = 0.0;
  for (std::size_t q = 0; q < g.size(); ++q) {
    const double x = g.points[q][0];
    sum += g.weights[q] *
           (kernel(x * a + b, gamma) + kernel(a + x * b, gamma) + kernel(-x * a + (1.0 - x) * b, gamma));
  }
  return jac * jac * 2.0 / ((4.0 - gamma) * (3.0 - gamma) * (2.0 - gamma)) * sum;
}

// Both triangles written as (P, Q, R_i) with PQ the common edge.
double shared_edge_pair(const Point& P, const Point& Q, const Point& R1, const Point& R2, double gamma,
                        int order) {
  const Point e = Q - P;
  const Point f1 = R1 - Q;
  const Point f2 = R2 - Q;
  const double jac = std::abs(cross(e, f1)) * std::abs(cross(e, f2));
  const QuadRule& g = gauss_segment(order);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double h2 = g.points[i][0];
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double h3 = g.points[j][0];
      const Point w1 = h2 * e + h3 * f1 - (1.0 - h2) * f2;
      const Point w2 = h2 * h3 * e + f1 - h2 * (1.0 - h3) * f2;
      const Point w3 = -h2 * e + (1.0 - h2) * f1 - h2 * h3 * f2;
      const Point w4 = -h2 * h3 * e + h2 * (1.0 - h3) * f1 - f2;
      const Point w5 = -h2 * h3 * e + (1.0 - h2 * h3) * f1 - h2 * f2;
      const double v = kernel(w1, gamma) +
                       h2 * (kernel(w2, gamma) + kernel(w3, gamma) + kernel(w4, gamma) + kernel(w5, gamma));
      sum += g.weights[i] * g.weights[j] * v;
    }
  }
  return jac / ((4.0 - gamma) * (3.0 - gamma)) * sum;
}

// Both triangles written as (P, V1_i, V2_i) with P the common vertex.
double shared_vertex_pair(const Triangle& t1, const Triangle& t2, double gamma, int order) {
  const Point a1 = t1[1] - t1[0];
  const Point b1 = t1[2] - t1[1];
  const Point a2 = t2[1] - t2[0];
  const Point b2 = t2[2] - t2[1];
  const double jac = std::abs(cross(a1, b1)) * std::abs(cross(a2, b2));
  const QuadRule& g = gauss_segment(order);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double h1 = g.points[i][0];
    const Point d1 = a1 + h1 * b1;
    const Point d2 = a2 + h1 * b2;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double h2 = g.points[j][0];
      double inner = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k) {
        const double h3 = g.points[k][0];
        inner += g.weights[k] * (kernel(d1 - h2 * (a2 + h3 * b2), gamma) + kernel(h2 * (a1 + h3 * b1) - d2, gamma));
      }
      sum += g.weights[i] * g.weights[j] * h2 * inner;
    }
  }
  return jac / (4.0 - gamma) * sum;
}

double disjoint_pair(const Triangle& t1, const Triangle& t2, double gamma, int k) {
  thread_local std::vector<Point> x, y;
  thread_local std::vector<double> wx, wy;
  const QuadRule rule = collapsed_triangle(k);
  map_to_triangle(rule, t1, x, wx);
  map_to_triangle(rule, t2, y, wy);
  return riesz_pair_disjoint(x, wx, y, wy, gamma);
}

}  // namespace

const char* to_string(PairClass c) {
  switch (c) {
    case PairClass::identical: return "identical";
    case PairClass::shared_edge: return "shared_edge";
    case PairClass::shared_vertex: return "shared_vertex";
    case PairClass::adjacent: return "adjacent";
    case PairClass::disjoint: return "disjoint";
  }
  return "unknown";
}

PairClass classify_pair_1d(double a, double b, double c, double d) {
  if (a == c && b == d) return PairClass::identical;
  if (b == c || a == d) return PairClass::adjacent;
  return PairClass::disjoint;
}

double riesz_pair_1d(double a, double b, double c, double d, double s) {
  if (a > b) std::swap(a, b);
  if (c > d) std::swap(c, d);
  if (a == b || c == d) return 0.0;
  // Canonical order so that swapping the arguments gives identical bits.
  if (c < a || (c == a && d < b)) {
    std::swap(a, c);
    std::swap(b, d);
  }
  const double beta = 2.0 * s - 1.0;
  const double gap = std::max(c - b, a - d);
  const double len = std::max(b - a, d - c);
  if (gap >= len) {
    // The second difference of F cancels badly here; the integrand is
    // analytic on the pair, so Gauss converges geometrically.
    const QuadRule& g = gauss_segment(10);
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = a + (b - a) * g.points[i][0];
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double y = c + (d - c) * g.points[j][0];
        sum += g.weights[i] * g.weights[j] * std::pow(std::abs(x - y), -beta);
      }
    }
    return sum * (b - a) * (d - c);
  }
  return F1d(b - c, beta) + F1d(a - d, beta) - F1d(a - c, beta) - F1d(b - d, beta);
}

PairClass classify_pair_2d(const Triangle& t1, const Triangle& t2) {
  int shared = 0;
  for (const Point& p : t1) {
    for (const Point& q : t2) shared += same(p, q) ? 1 : 0;
  }
  switch (shared) {
    case 3: return PairClass::identical;
    case 2: return PairClass::shared_edge;
    case 1: return PairClass::shared_vertex;
    default: return PairClass::disjoint;
  }
}

double riesz_pair_disjoint(const std::vector<Point>& x, const std::vector<double>& wx,
                           const std::vector<Point>& y, const std::vector<double>& wy, double gamma) {
  const auto nx = static_cast<Eigen::Index>(x.size());
  const auto ny = static_cast<Eigen::Index>(y.size());
  thread_local Eigen::ArrayXd r2, wyv;
  r2.resize(ny);
  wyv = Eigen::Map<const Eigen::ArrayXd>(wy.data(), ny);
  Eigen::ArrayXd yx(ny), yy(ny);
  for (Eigen::Index j = 0; j < ny; ++j) {
    yx[j] = y[static_cast<std::size_t>(j)][0];
    yy[j] = y[static_cast<std::size_t>(j)][1];
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < nx; ++i) {
    const Point& p = x[static_cast<std::size_t>(i)];
    r2 = (yx - p[0]).square() + (yy - p[1]).square();
    sum += wx[static_cast<std::size_t>(i)] * (wyv * ((-0.5 * gamma) * r2.log()).exp()).sum();
  }
  return sum;
}

double riesz_pair_2d(const Triangle& t1_in, const Triangle& t2_in, double s, const PairQuadrature& quad) {
  if (!(twice_area(t1_in) > 0.0) || !(twice_area(t2_in) > 0.0)) {
    throw StructuralError("riesz_pair_2d: degenerate triangle");
  }
  const double gamma = 2.0 * s;
  Triangle t1 = sorted(t1_in);
  Triangle t2 = sorted(t2_in);
  if (lex_less(t2, t1)) std::swap(t1, t2);

  switch (classify_pair_2d(t1, t2)) {
    case PairClass::identical:
      return identical_pair(t1, gamma, quad.singular);
    case PairClass::shared_edge: {
      Point common[2];
      int n = 0;
      Point r1 = t1[0], r2 = t2[0];
      for (const Point& p : t1) {
        bool found = false;
        for (const Point& q : t2) found = found || same(p, q);
        if (found) common[n++] = p; else r1 = p;
      }
      for (const Point& q : t2) {
        if (!same(q, common[0]) && !same(q, common[1])) r2 = q;
      }
      return shared_edge_pair(common[0], common[1], r1, r2, gamma, quad.singular);
    }
    case PairClass::shared_vertex: {
      auto rotate_to = [](const Triangle& t, const Point& p) {
        Triangle out{p, p, p};
        int k = 1;
        for (const Point& q : t) {
          if (!same(q, p)) out[static_cast<std::size_t>(k++)] = q;
        }
        return out;
      };
      Point common = t1[0];
      for (const Point& p : t1) {
        for (const Point& q : t2) {
          if (same(p, q)) common = p;
        }
      }
      return shared_vertex_pair(rotate_to(t1, common), rotate_to(t2, common), gamma, quad.singular);
    }
    default: break;
  }
  const Point c1 = (t1[0] + t1[1] + t1[2]) / 3.0;
  const Point c2 = (t2[0] + t2[1] + t2[2]) / 3.0;
  const bool near = (c1 - c2).norm() < quad.near_factor * std::max(diameter(t1), diameter(t2));
  return disjoint_pair(t1, t2, gamma, near ? quad.near : quad.far);
}

}  // namespace fracldg
