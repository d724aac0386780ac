#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "polyvib/geometry.hpp"

namespace polyvib {

enum class MeshFamily { Triangular, Square, Trapezoidal, Voronoi, Hexagonal };
enum class DomainKind { Rectangle, LShape };

MeshFamily mesh_family_from_string(const std::string& s);
std::string to_string(MeshFamily f);

// Rectangle (0,a) x (0,b), or the L-shape (-1,1)^2 minus the closed quadrant
// [0,1] x [-1,0].
struct Domain {
  DomainKind kind = DomainKind::Rectangle;
  double a = 1.0;
  double b = 1.1;

  static Domain rectangle(double a_, double b_) { return {DomainKind::Rectangle, a_, b_}; }
  static Domain lshape() { return {DomainKind::LShape, 2.0, 2.0}; }

  double area() const { return kind == DomainKind::Rectangle ? a * b : 3.0; }
  bool on_boundary(const Vec2& p, double tol) const;
};

struct Edge {
  int a = -1;  // global vertex ids; orientation a->b fixes tangent/normal
  int b = -1;
  int cell_left = -1;   // cell that traverses a->b (normal is its outward normal)
  int cell_right = -1;  // cell that traverses b->a, -1 on the boundary
  double length = 0.0;
  Vec2 normal;  // unit, = (t_y, -t_x) for unit tangent t along a->b

  bool boundary() const { return cell_right < 0; }
};

struct CellEdgeRef {
  int edge = -1;
  double sign = 1.0;  // +1 if the cell's outward normal equals the stored one
};

struct CellQuality {
  int cell = 0;
  int n_vertices = 0;
  double diameter = 0.0;
  double shortest_edge = 0.0;
  double edge_ratio = 0.0;      // shortest_edge / diameter
  double centroid_radius = 0.0; // inscribed-disk radius at the area centroid
  double radius_ratio = 0.0;    // centroid_radius / diameter
};

struct QualityReport {
  std::vector<CellQuality> cells;
  double min_edge_ratio = 0.0;
  double min_radius_ratio = 0.0;
};

struct MeshGenOptions {
  std::uint64_t seed = 13571113;
  int lloyd_iterations = 3;
  double trapezoid_shift = 0.25;  // fraction of h for the vertical perturbation
  double c_tau = 0.05;            // shape-regularity floor, generation fails below it
};

struct Mesh {
  Domain domain;
  MeshFamily family = MeshFamily::Square;
  int level = 0;
  std::vector<Vec2> vertices;
  std::vector<std::vector<int>> cells;  // CCW vertex loops
  std::vector<Edge> edges;
  std::vector<std::vector<CellEdgeRef>> cell_edges;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_boundary_edges() const;
  int n_interior_edges() const { return n_edges() - n_boundary_edges(); }
  int n_interior_vertices() const;

  Polygon cell_polygon(int c) const;
  double cell_area(int c) const { return polygon_area(cell_polygon(c)); }
  double max_diameter() const;

  // Derive the edge table from the cell loops. Throws if an edge is shared by
  // more than two cells or traversed twice in the same direction.
  void build_edges();

  // Structural and geometric invariants: orientation, manifoldness, partition
  // area, boundary edges on the domain boundary, shape regularity >= c_tau.
  void validate(double c_tau) const;

  QualityReport quality_report() const;

  void save(const std::string& path) const;
};

Mesh generate_mesh(MeshFamily family, int level, const Domain& domain,
                   const MeshGenOptions& opts = {});

// Reads the plain text format written by Mesh::save and validates it.
Mesh load_mesh(const std::string& path, const Domain& domain, double c_tau = 0.05);

}  // namespace polyvib
