#include "polyvib/rt0.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace polyvib {

namespace {

void check_triangle(const Mesh& mesh, int cell) {
  if (mesh.cells[cell].size() != 3)
    throw std::invalid_argument("rt0: cell is not a triangle");
}

}  // namespace

Eigen::Matrix3d rt0_local_mass(const Mesh& mesh, int cell) {
  check_triangle(mesh, cell);
  const auto& loop = mesh.cells[cell];
  const auto& refs = mesh.cell_edges[cell];
  const double area = mesh.cell_area(cell);

  Vec2 opp[3], mid[3];
  double scale[3];
  for (int i = 0; i < 3; ++i) {
    const Vec2 a = mesh.vertices[loop[i]];
    const Vec2 b = mesh.vertices[loop[(i + 1) % 3]];
    opp[i] = mesh.vertices[loop[(i + 2) % 3]];
    mid[i] = (a + b) * 0.5;
    scale[i] = refs[i].sign * std::sqrt(mesh.edges[refs[i].edge].length) / (2.0 * area);
  }
  // edge-midpoint rule, exact for the quadratic integrand
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int g = 0; g < 3; ++g) s += (mid[g] - opp[i]).dot(mid[g] - opp[j]);
      m(i, j) = scale[i] * scale[j] * s * area / 3.0;
    }
  return 0.5 * (m + m.transpose());
}

Eigen::Vector3d rt0_local_div(const Mesh& mesh, int cell) {
  check_triangle(mesh, cell);
  const auto& refs = mesh.cell_edges[cell];
  const double area = mesh.cell_area(cell);
  Eigen::Vector3d d;
  for (int i = 0; i < 3; ++i)
    d[i] = refs[i].sign * std::sqrt(mesh.edges[refs[i].edge].length) / area;
  return d;
}

Eigen::SparseMatrix<double> rt0_global_mass(const Mesh& mesh, const DofMap& dm) {
  if (dm.degree() != 0) throw std::invalid_argument("rt0: dofmap order must be 0");
  std::vector<Eigen::Triplet<double>> trips;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Eigen::Matrix3d m = rt0_local_mass(mesh, c);
    const std::vector<int> dofs = dm.cell_reduced_dofs(c);
    for (int i = 0; i < 3; ++i) {
      if (dofs[i] < 0) continue;
      for (int j = 0; j < 3; ++j)
        if (dofs[j] >= 0) trips.emplace_back(dofs[i], dofs[j], m(i, j));
    }
  }
  Eigen::SparseMatrix<double> out(dm.n_reduced(), dm.n_reduced());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

}  // namespace polyvib
