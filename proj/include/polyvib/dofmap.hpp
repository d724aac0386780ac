#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "polyvib/mesh.hpp"

namespace polyvib {

// Degrees of freedom for the H(div)-conforming polygonal space of order k:
//  - per edge, k+1 moments of v.n against the orthonormal Legendre basis of the
//    edge (n and the parameterization follow the *global* edge direction a->b),
//  - per cell, the (k+1)(k+2)/2 - 1 moments (h_E/|E|) int_E v . grad(m) for
//    scaled monomials m of degree 1..k.
// Global numbering is all edge dofs first (edge e owns slots e*(k+1)..+k), then
// cell dofs. The wall condition u.n = 0 removes every boundary-edge dof; the
// reduced numbering skips them.
class DofMap {
 public:
  DofMap(const Mesh& mesh, int degree);

  const Mesh& mesh() const { return *mesh_; }
  int degree() const { return degree_; }
  int edge_dofs_per_edge() const { return degree_ + 1; }
  int cell_dofs_per_cell() const { return (degree_ + 1) * (degree_ + 2) / 2 - 1; }

  int n_full() const { return n_full_; }
  int n_reduced() const { return n_reduced_; }
  int n_constrained() const { return n_full_ - n_reduced_; }

  int edge_dof(int edge, int j) const { return edge * (degree_ + 1) + j; }
  int cell_dof(int cell, int q) const {
    return mesh_->n_edges() * (degree_ + 1) + cell * cell_dofs_per_cell() + q;
  }

  // full index -> reduced index, -1 for a constrained (boundary) dof
  int reduced(int full) const { return reduced_[full]; }

  // full-numbering dofs of one cell, edge dofs in cell-loop order then interior
  std::vector<int> cell_full_dofs(int cell) const;
  // same, mapped through reduced(); constrained entries come out -1
  std::vector<int> cell_reduced_dofs(int cell) const;

  // drop constrained entries of a full vector
  Eigen::VectorXd reduce(const Eigen::VectorXd& full) const;
  // inverse: scatter a reduced vector, zeros on constrained slots
  Eigen::VectorXd expand(const Eigen::VectorXd& red) const;

 private:
  const Mesh* mesh_;
  int degree_;
  int n_full_;
  int n_reduced_;
  std::vector<int> reduced_;
};

using VectorField = std::function<Vec2(double, double)>;

// Canonical interpolation: evaluate all dofs of an analytic field. Edge moments
// use a Gauss rule with n_pts points; cell moments integrate v . grad(m) with a
// rule exact to quad_order. Returns the full-numbering vector.
Eigen::VectorXd interpolate(const DofMap& dm, const VectorField& v, int n_pts = 12,
                            int quad_order = 10);

// largest |dof| among the constrained (boundary) slots of a full vector; a wall
// compatible field interpolates to ~0 there
double max_constrained_dof(const DofMap& dm, const Eigen::VectorXd& full);

// coefficients of v.n on an edge in the orthonormal edge basis, read from a
// reduced vector; the basis is orthonormal so the coefficients are the dof
// values themselves, and an eliminated (wall) edge gives the zero polynomial
Eigen::VectorXd edge_normal_poly(const DofMap& dm, const Eigen::VectorXd& reduced,
                                 int edge);

}  // namespace polyvib
