#pragma once

#include <Eigen/Dense>
#include <vector>

#include "polyvib/geometry.hpp"
#include "polyvib/quadrature.hpp"

namespace polyvib {

inline int poly_space_dim(int k) { return (k + 1) * (k + 2) / 2; }

// Scaled monomials m_i(x) = ((x-xc)/h)^a ((y-yc)/h)^b on a cell, ordered by
// total degree and, within a degree, by descending x exponent:
// 1, X, Y, X^2, XY, Y^2, ...
struct CellBasis {
  int degree = 0;
  Vec2 center;
  double h = 1.0;
  std::vector<std::pair<int, int>> exps;

  CellBasis() = default;
  CellBasis(int k, const Vec2& c, double diam) : degree(k), center(c), h(diam) {
    exps.reserve(poly_space_dim(k));
    for (int d = 0; d <= k; ++d)
      for (int j = 0; j <= d; ++j) exps.emplace_back(d - j, j);
  }

  int dim() const { return static_cast<int>(exps.size()); }

  double eval(int i, const Vec2& p) const {
    const double sx = (p.x - center.x) / h;
    const double sy = (p.y - center.y) / h;
    const auto [a, b] = exps[i];
    return ipow(sx, a) * ipow(sy, b);
  }

  Vec2 grad(int i, const Vec2& p) const {
    const double sx = (p.x - center.x) / h;
    const double sy = (p.y - center.y) / h;
    const auto [a, b] = exps[i];
    Vec2 g{0.0, 0.0};
    if (a > 0) g.x = a * ipow(sx, a - 1) * ipow(sy, b) / h;
    if (b > 0) g.y = b * ipow(sx, a) * ipow(sy, b - 1) / h;
    return g;
  }

  static double ipow(double v, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= v;
    return r;
  }
};

// Mass matrix of the first `dim` scaled monomials, by the given cell rule.
Eigen::MatrixXd monomial_mass(const CellBasis& basis, int dim, const QuadratureRule& rule);

// Gram matrix of the gradient fields {grad m_i} for the non-constant scaled
// monomials of a degree-(k+1) basis. SPD on any 2D cell.
Eigen::MatrixXd grad_gram(const CellBasis& basis_kp1, const QuadratureRule& rule);

// L2(e)-orthonormal polynomial basis on an edge: shifted Legendre in the
// parameterization induced by the stored global vertex order of the edge.
struct EdgeBasis {
  double length = 1.0;
  int degree = 0;

  EdgeBasis(double len, int k) : length(len), degree(k) {}

  // value of basis function j at parameter t in [0,1]
  double eval(int j, double t) const {
    return std::sqrt((2.0 * j + 1.0) / length) * legendre_poly(j, 2.0 * t - 1.0);
  }
};

}  // namespace polyvib
