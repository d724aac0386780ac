#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "polyvib/dofmap.hpp"
#include "polyvib/mesh.hpp"

namespace polyvib {

// Analytic lowest-order Raviart-Thomas operators on triangular cells, written
// in the same dof convention as DofMap at order 0 (zeroth edge moment = flux
// through the edge in the global normal direction, divided by sqrt(|e|)). The
// basis field of local edge i is sign_i * sqrt(|e_i|) * (x - p_i) / (2|T|)
// with p_i the opposite vertex. Everything here is closed-form (the element
// integrals use the midpoint rule, exact for quadratics); no dependency on the
// polygon quadrature module, so it can serve as an independent cross-check.

// 3x3 element L2 mass in local edge order
Eigen::Matrix3d rt0_local_mass(const Mesh& mesh, int cell);

// constant divergence value of each local basis field
Eigen::Vector3d rt0_local_div(const Mesh& mesh, int cell);

// assembled mass on the reduced (interior-edge) dofs of an order-0 DofMap
Eigen::SparseMatrix<double> rt0_global_mass(const Mesh& mesh, const DofMap& dm);

}  // namespace polyvib
