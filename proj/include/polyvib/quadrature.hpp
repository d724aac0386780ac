#pragma once

#include <vector>

#include "polyvib/geometry.hpp"

namespace polyvib {

struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;  // sum to the measure of the integration domain

  std::size_t size() const { return points.size(); }
};

// Rule on a straight edge [a,b]. params are the corresponding coordinates in
// [0,1] along the edge (needed to evaluate edge polynomials).
struct EdgeQuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> params;
  std::vector<double> weights;  // include the arclength factor, sum to |e|

  std::size_t size() const { return points.size(); }
};

// Gauss-Legendre nodes/weights on [0,1], exact for polynomials of degree 2n-1.
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Rule exact for 1D polynomials of degree <= order along the edge.
EdgeQuadratureRule edge_quadrature(const Vec2& a, const Vec2& b, int order);

// Rule on a polygon, exact for bivariate polynomials of total degree <= order.
// Built by fanning triangles from the area centroid (the cell must be
// star-shaped with respect to it) and collapsing a tensor Gauss rule on each.
QuadratureRule cell_quadrature(const Polygon& poly, int order);

// Exact integral of x^p y^q over the polygon via the divergence theorem
// (boundary route, independent of cell_quadrature). Serves as the oracle the
// interior rules are tested against, and for exactness spot checks.
double polygon_monomial_integral(const Polygon& poly, int p, int q);

// Legendre polynomial P_n on [-1,1] by the three-term recurrence.
double legendre_poly(int n, double x);

}  // namespace polyvib
