#include "polyvib/dofmap.hpp"

#include <stdexcept>

#include "polyvib/basis.hpp"
#include "polyvib/quadrature.hpp"

namespace polyvib {

DofMap::DofMap(const Mesh& mesh, int degree) : mesh_(&mesh), degree_(degree) {
  if (degree < 0) throw std::invalid_argument("dofmap: degree must be >= 0");
  const int per_edge = degree + 1;
  n_full_ = mesh.n_edges() * per_edge + mesh.n_cells() * cell_dofs_per_cell();
  reduced_.assign(n_full_, -1);
  int next = 0;
  for (int e = 0; e < mesh.n_edges(); ++e) {
    if (mesh.edges[e].cell_right < 0) continue;  // wall dof, stays -1
    for (int j = 0; j < per_edge; ++j) reduced_[edge_dof(e, j)] = next++;
  }
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (int q = 0; q < cell_dofs_per_cell(); ++q) reduced_[cell_dof(c, q)] = next++;
  n_reduced_ = next;
}

std::vector<int> DofMap::cell_full_dofs(int cell) const {
  std::vector<int> out;
  const int per_edge = degree_ + 1;
  out.reserve(mesh_->cell_edges[cell].size() * per_edge + cell_dofs_per_cell());
  for (const CellEdgeRef& ref : mesh_->cell_edges[cell])
    for (int j = 0; j < per_edge; ++j) out.push_back(edge_dof(ref.edge, j));
  for (int q = 0; q < cell_dofs_per_cell(); ++q) out.push_back(cell_dof(cell, q));
  return out;
}

std::vector<int> DofMap::cell_reduced_dofs(int cell) const {
  std::vector<int> out = cell_full_dofs(cell);
  for (int& d : out) d = reduced_[d];
  return out;
}

Eigen::VectorXd DofMap::reduce(const Eigen::VectorXd& full) const {
  if (full.size() != n_full_) throw std::invalid_argument("dofmap: bad vector size");
  Eigen::VectorXd out(n_reduced_);
  for (int i = 0; i < n_full_; ++i)
    if (reduced_[i] >= 0) out[reduced_[i]] = full[i];
  return out;
}

Eigen::VectorXd DofMap::expand(const Eigen::VectorXd& red) const {
  if (red.size() != n_reduced_) throw std::invalid_argument("dofmap: bad vector size");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_full_);
  for (int i = 0; i < n_full_; ++i)
    if (reduced_[i] >= 0) out[i] = red[reduced_[i]];
  return out;
}

Eigen::VectorXd interpolate(const DofMap& dm, const VectorField& v, int n_pts,
                            int quad_order) {
  const Mesh& m = dm.mesh();
  const int k = dm.degree();
  Eigen::VectorXd dofs = Eigen::VectorXd::Zero(dm.n_full());

  std::vector<double> gpts, gwts;
  gauss_legendre_01(n_pts, gpts, gwts);
  for (int e = 0; e < m.n_edges(); ++e) {
    const Edge& ed = m.edges[e];
    const Vec2 a = m.vertices[ed.a], b = m.vertices[ed.b];
    EdgeBasis eb{ed.length, k};
    for (int g = 0; g < n_pts; ++g) {
      const double t = gpts[g];
      const Vec2 p{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
      const double vn = v(p.x, p.y).dot(ed.normal);
      const double w = gwts[g] * ed.length;
      for (int j = 0; j <= k; ++j) dofs[dm.edge_dof(e, j)] += w * vn * eb.eval(j, t);
    }
  }

  if (k >= 1) {
    for (int c = 0; c < m.n_cells(); ++c) {
      const Polygon poly = m.cell_polygon(c);
      const double area = m.cell_area(c);
      CellBasis basis{k, polygon_centroid(poly), polygon_diameter(poly)};
      const QuadratureRule rule = cell_quadrature(poly, quad_order);
      const int ncd = dm.cell_dofs_per_cell();
      for (size_t g = 0; g < rule.points.size(); ++g) {
        const Vec2 p = rule.points[g];
        const Vec2 val = v(p.x, p.y);
        for (int q = 0; q < ncd; ++q) {
          const Vec2 gm = basis.grad(q + 1, p);  // skip the constant monomial
          dofs[dm.cell_dof(c, q)] +=
              rule.weights[g] * val.dot(gm) * basis.h / area;
        }
      }
    }
  }
  return dofs;
}

Eigen::VectorXd edge_normal_poly(const DofMap& dm, const Eigen::VectorXd& reduced,
                                 int edge) {
  if (reduced.size() != dm.n_reduced())
    throw std::invalid_argument("dofmap: bad vector size");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dm.degree() + 1);
  for (int j = 0; j <= dm.degree(); ++j) {
    const int r = dm.reduced(dm.edge_dof(edge, j));
    if (r >= 0) c[j] = reduced[r];
  }
  return c;
}

double max_constrained_dof(const DofMap& dm, const Eigen::VectorXd& full) {
  double mx = 0.0;
  for (int i = 0; i < dm.n_full(); ++i)
    if (dm.reduced(i) < 0) mx = std::max(mx, std::abs(full[i]));
  return mx;
}

}  // namespace polyvib
