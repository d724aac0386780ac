#pragma once

#include <vector>

#include "polyvib/mesh.hpp"

namespace polyvib {

// one reference eigenvalue; (n, m) are the separation indices on a rectangle,
// or -1 for tabulated values with no closed form
struct ExactMode {
  double lambda = 0.0;
  int n = -1;
  int m = -1;
};

struct ExactSpectrum {
  std::vector<ExactMode> modes;  // ascending, multiplicity kept
  std::vector<double> lambdas() const;
  std::vector<double> scaled() const;  // lambda / pi^2
};

// first `count` eigenvalues pi^2 ((n/a)^2 + (m/b)^2), n, m >= 0, n + m > 0, of
// the rectangle (0,a) x (0,b) with wall boundary conditions
ExactSpectrum exact_rectangle(double a, double b, int count);

// reference values for the L-shaped domain (-1,1)^2 \ [0,1)x(-1,0], unscaled;
// the third and fourth entries are the exact pi^2 pair
ExactSpectrum lshape_reference();

// eigenfunction of the rectangle mode (n, m):
//   ( (n/a) sin(n pi x / a) cos(m pi y / b),
//     (m/b) cos(n pi x / a) sin(m pi y / b) )
Vec2 rectangle_eigenfunction(int n, int m, double a, double b, double x, double y);

}  // namespace polyvib
