#include "polyvib/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace polyvib {

double legendre_poly(int n, double x) {
  if (n == 0) return 1.0;
  if (n == 1) return x;
  double pm = 1.0, pc = x;
  for (int m = 2; m <= n; ++m) {
    const double pn = ((2.0 * m - 1.0) * x * pc - (m - 1.0) * pm) / m;
    pm = pc;
    pc = pn;
  }
  return pc;
}

namespace {

// P_n and P_n' at x, for the Newton iteration below.
void legendre_with_deriv(int n, double x, double& p, double& dp) {
  double pm = 1.0, pc = x;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int m = 2; m <= n; ++m) {
    const double pn = ((2.0 * m - 1.0) * x * pc - (m - 1.0) * pm) / m;
    pm = pc;
    pc = pn;
  }
  p = pc;
  dp = n * (x * pc - pm) / (x * x - 1.0);
}

}  // namespace

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_01: n >= 1 required");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  // Roots of P_n on (-1,1), Newton from the Chebyshev-like initial guess.
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p, dp;
    for (int it = 0; it < 100; ++it) {
      legendre_with_deriv(n, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre_with_deriv(n, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // map [-1,1] -> [0,1]; cos() enumerates roots in descending order
    nodes[n - 1 - i] = 0.5 * (x + 1.0);
    weights[n - 1 - i] = 0.5 * w;
  }
}

EdgeQuadratureRule edge_quadrature(const Vec2& a, const Vec2& b, int order) {
  const int n = std::max(1, (order + 2) / 2);  // 2n-1 >= order
  std::vector<double> t, w;
  gauss_legendre_01(n, t, w);
  EdgeQuadratureRule rule;
  const double len = (b - a).norm();
  if (len <= 0.0) throw std::invalid_argument("edge_quadrature: zero-length edge");
  rule.points.reserve(n);
  rule.params = t;
  rule.weights.reserve(n);
  for (int i = 0; i < n; ++i) {
    rule.points.push_back(a + (b - a) * t[i]);
    rule.weights.push_back(w[i] * len);
  }
  return rule;
}

namespace {

// Tensor Gauss rule collapsed onto the triangle (a,b,c) via the Duffy map
// x = a + u(1-v)(b-a) + v(c-a). Exact for total degree <= order.
void append_triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c, int order,
                          QuadratureRule& out) {
  // degree in u is <= order, in v <= order+1 (extra factor from the Jacobian)
  const int n = std::max(1, (order + 3) / 2);  // 2n-1 >= order+1
  std::vector<double> t, w;
  gauss_legendre_01(n, t, w);
  const double jac2 = (b - a).cross(c - a);  // = 2*signed area
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double u = t[i], v = t[j];
      const Vec2 p = a + (b - a) * (u * (1.0 - v)) + (c - a) * v;
      out.points.push_back(p);
      out.weights.push_back(w[i] * w[j] * (1.0 - v) * jac2);
    }
}

}  // namespace

QuadratureRule cell_quadrature(const Polygon& poly, int order) {
  if (poly.size() < 3) throw std::invalid_argument("cell_quadrature: need >= 3 vertices");
  QuadratureRule rule;
  if (poly.size() == 3) {
    append_triangle_rule(poly[0], poly[1], poly[2], order, rule);
  } else {
    const Vec2 c = polygon_centroid(poly);
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i) {
      const Vec2& p = poly[i];
      const Vec2& q = poly[(i + 1) % m];
      const double a2 = (p - c).cross(q - c);
      if (a2 <= 0.0)
        throw std::runtime_error("cell_quadrature: cell not star-shaped wrt centroid");
      append_triangle_rule(c, p, q, order, rule);
    }
  }
  return rule;
}

double polygon_monomial_integral(const Polygon& poly, int p, int q) {
  // int_P x^p y^q = 1/(p+1) * sum_e int_e x^(p+1) y^q n_x ds, and on a straight
  // edge n_x ds = dy. The 1D integrand has degree p+q+1.
  const int deg = p + q + 1;
  const int n = std::max(1, (deg + 2) / 2);
  std::vector<double> t, w;
  gauss_legendre_01(n, t, w);
  double total = 0.0;
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % m];
    const double dy = b.y - a.y;
    if (dy == 0.0) continue;
    double s = 0.0;
    for (int g = 0; g < n; ++g) {
      const double x = a.x + (b.x - a.x) * t[g];
      const double y = a.y + (b.y - a.y) * t[g];
      s += w[g] * std::pow(x, p + 1) * std::pow(y, q);
    }
    total += s * dy;
  }
  return total / (p + 1);
}

}  // namespace polyvib
