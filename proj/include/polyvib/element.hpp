#pragma once

#include <Eigen/Dense>

#include "polyvib/basis.hpp"
#include "polyvib/dofmap.hpp"
#include "polyvib/mesh.hpp"

namespace polyvib {

struct StabilizationOptions {
  bool enabled = false;
  double sigma = 0.1;
  // Projected sandwiches the flux form between (I - DOF(grad)*proj) factors so
  // it acts on the projector complement only; Raw adds the flux form as-is.
  enum class Mode { Projected, Raw };
  Mode mode = Mode::Projected;
};

// Per-cell computable operators of the order-k space, in the local dof order of
// DofMap::cell_full_dofs: the k+1 moments of each edge in cell-loop order, then
// the interior gradient moments. Local dofs are the global functionals (edge
// normal and parameterization fixed by the global edge direction); orientation
// enters through the per-edge sign stored in the mesh.
struct ElementOperators {
  int degree = 0;
  int n_loc = 0;
  double area = 0.0;
  CellBasis basis_k;              // scaled monomials spanning P_k
  CellBasis basis_kp1;            // degree k+1 superset, same center and scale
  Eigen::MatrixXd mass_k;         // Gram of basis_k
  Eigen::MatrixXd grad_gram_kp1;  // Gram of {grad m}, nonconstant m in basis_kp1
  Eigen::MatrixXd div_matrix;     // dofs -> coefficients of div v in basis_k
  Eigen::MatrixXd proj_matrix;    // dofs -> coefficients of the projection in
                                  //         {grad m}, nonconstant m in basis_kp1
  Eigen::MatrixXd grad_dofs;      // dof vectors of the gradient basis fields
  Eigen::MatrixXd K;              // (div u, div v), exact
  Eigen::MatrixXd M0;             // (proj u, proj v)
  Eigen::MatrixXd S;              // stabilizer actually added (zero if disabled)

  // projection of the field with the given local dofs, evaluated at a point
  Vec2 eval_projection(const Eigen::VectorXd& local_dofs, const Vec2& p) const;
  // divergence polynomial of the same field at a point
  double eval_div(const Eigen::VectorXd& local_dofs, const Vec2& p) const;
};

ElementOperators build_element(const Mesh& mesh, int cell, int degree,
                               const StabilizationOptions& stab = {});

}  // namespace polyvib
