#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace polyvib {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::sqrt(x * x + y * y); }
  // z-component of the cross product, used for orientation tests
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

using Polygon = std::vector<Vec2>;

// Signed area by the shoelace formula; positive for CCW orientation.
inline double polygon_signed_area(const Polygon& p) {
  double a = 0.0;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& u = p[i];
    const Vec2& v = p[(i + 1) % n];
    a += u.cross(v);
  }
  return 0.5 * a;
}

inline double polygon_area(const Polygon& p) { return std::abs(polygon_signed_area(p)); }

// Area centroid (not the vertex average).
inline Vec2 polygon_centroid(const Polygon& p) {
  double a = 0.0;
  Vec2 c{0.0, 0.0};
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& u = p[i];
    const Vec2& v = p[(i + 1) % n];
    const double w = u.cross(v);
    a += w;
    c.x += (u.x + v.x) * w;
    c.y += (u.y + v.y) * w;
  }
  if (std::abs(a) < 1e-300) throw std::runtime_error("polygon_centroid: degenerate polygon");
  return {c.x / (3.0 * a), c.y / (3.0 * a)};
}

inline double polygon_diameter(const Polygon& p) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const Vec2 d = p[i] - p[j];
      d2 = std::max(d2, d.dot(d));
    }
  return std::sqrt(d2);
}

// Distance from q to segment [a,b].
inline double point_segment_distance(const Vec2& q, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double den = ab.dot(ab);
  double t = den > 0.0 ? (q - a).dot(ab) / den : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Vec2 proj = a + ab * t;
  return (q - proj).norm();
}

// Radius of the largest disk centered at the area centroid that stays inside
// (distance from centroid to the boundary). A cheap star-shapedness proxy.
inline double polygon_centroid_radius(const Polygon& p) {
  const Vec2 c = polygon_centroid(p);
  double r = std::numeric_limits<double>::max();
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i)
    r = std::min(r, point_segment_distance(c, p[i], p[(i + 1) % n]));
  return r;
}

inline bool point_in_polygon(const Polygon& poly, const Vec2& q) {
  // Crossing-number test; on-boundary points may go either way.
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& pi = poly[i];
    const Vec2& pj = poly[j];
    const bool cross = ((pi.y > q.y) != (pj.y > q.y)) &&
                       (q.x < (pj.x - pi.x) * (q.y - pi.y) / (pj.y - pi.y) + pi.x);
    if (cross) inside = !inside;
  }
  return inside;
}

// Clip a convex-or-star polygon by the half-plane n.(x - p0) <= 0.
// Sutherland-Hodgman step; returns possibly empty polygon.
inline Polygon clip_halfplane(const Polygon& poly, const Vec2& p0, const Vec2& n) {
  Polygon out;
  const std::size_t m = poly.size();
  if (m == 0) return out;
  out.reserve(m + 2);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2& cur = poly[i];
    const Vec2& nxt = poly[(i + 1) % m];
    const double dc = n.dot(cur - p0);
    const double dn = n.dot(nxt - p0);
    if (dc <= 0.0) {
      out.push_back(cur);
      if (dn > 0.0) {
        const double t = dc / (dc - dn);
        out.push_back(cur + (nxt - cur) * t);
      }
    } else if (dn <= 0.0) {
      const double t = dc / (dc - dn);
      out.push_back(cur + (nxt - cur) * t);
    }
  }
  return out;
}

}  // namespace polyvib
