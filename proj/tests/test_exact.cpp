#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "polyvib/exact.hpp"

using namespace polyvib;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("rectangle spectrum matches the brute-force enumeration") {
  const ExactSpectrum s = exact_rectangle(1.0, 1.1, 30);
  REQUIRE(s.modes.size() == 30);

  std::vector<double> brute;
  for (int n = 0; n <= 20; ++n)
    for (int m = 0; m <= 20; ++m) {
      if (n + m == 0) continue;
      brute.push_back(kPi * kPi * (n * n + (m / 1.1) * (m / 1.1)));
    }
  std::sort(brute.begin(), brute.end());
  for (int i = 0; i < 30; ++i) CHECK(s.modes[i].lambda == brute[i]);

  // ascending with multiplicity, and the separation indices reproduce lambda
  for (int i = 1; i < 30; ++i) CHECK(s.modes[i].lambda >= s.modes[i - 1].lambda);
  for (const auto& md : s.modes) {
    CHECK(md.n + md.m > 0);
    CHECK(md.lambda ==
          doctest::Approx(kPi * kPi * (md.n * md.n + (md.m / 1.1) * (md.m / 1.1)))
              .epsilon(1e-15));
  }
}

TEST_CASE("benchmark rectangle scaled values match the six-decimal table") {
  const std::vector<double> table = {0.826446, 1.0,      1.826446, 3.305785,
                                     4.0,      4.305785, 4.826446};
  const std::vector<double> got = exact_rectangle(1.0, 1.1, 7).scaled();
  REQUIRE(got.size() == 7);
  for (int i = 0; i < 7; ++i)
    CHECK(got[i] == doctest::Approx(table[i]).epsilon(5e-7));

  const std::vector<double> unit = exact_rectangle(1.0, 1.0, 3).scaled();
  CHECK(unit[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(unit[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(unit[2] == doctest::Approx(2.0).epsilon(1e-14));

  CHECK(exact_rectangle(2.0, 1.0, 1).scaled()[0] ==
        doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("rectangle count far beyond the default enumeration bound") {
  // forces the index bound to grow: eigenvalue 1000 of the unit square
  const ExactSpectrum s = exact_rectangle(1.0, 1.0, 1000);
  REQUIRE(s.modes.size() == 1000);
  for (int i = 1; i < 1000; ++i) CHECK(s.modes[i].lambda >= s.modes[i - 1].lambda);
  // spot value: lambda/pi^2 at the tail must be an integer expressible as
  // n^2 + m^2 with the stored indices
  const auto& last = s.modes.back();
  CHECK(last.lambda / (kPi * kPi) ==
        doctest::Approx(last.n * last.n + last.m * last.m).epsilon(1e-13));
}

TEST_CASE("lshape reference list is fixed and contains the exact double pair") {
  const ExactSpectrum s = lshape_reference();
  const std::vector<double> table = {1.475622, 3.534031, 9.869604, 9.869604,
                                     11.389479};
  REQUIRE(s.modes.size() == 5);
  for (int i = 0; i < 5; ++i)
    CHECK(s.lambdas()[i] == doctest::Approx(table[i]).epsilon(5e-7));
  CHECK(s.modes[2].lambda == s.modes[3].lambda);
  CHECK(s.modes[2].lambda == kPi * kPi);
}

TEST_CASE("rectangle eigenfunction formula and boundary traces") {
  const double a = 1.0, b = 1.1;
  // (0,1): horizontal component vanishes identically
  for (double y : {0.0, 0.3, 0.8, b}) {
    const Vec2 v = rectangle_eigenfunction(0, 1, a, b, 0.4, y);
    CHECK(v.x == 0.0);
    CHECK(v.y == doctest::Approx((1.0 / b) * std::sin(kPi * y / b)).epsilon(1e-14));
  }
  // normal component vanishes on all four walls for a generic mode
  for (double t : {0.0, 0.25, 0.62, 1.0}) {
    CHECK(std::abs(rectangle_eigenfunction(2, 3, a, b, 0.0, t * b).x) < 1e-14);
    CHECK(std::abs(rectangle_eigenfunction(2, 3, a, b, a, t * b).x) < 1e-14);
    CHECK(std::abs(rectangle_eigenfunction(2, 3, a, b, t * a, 0.0).y) < 1e-14);
    CHECK(std::abs(rectangle_eigenfunction(2, 3, a, b, t * a, b).y) < 1e-14);
  }
}
