#pragma once

#include <Eigen/Sparse>
#include <string>

#include "polyvib/dofmap.hpp"
#include "polyvib/element.hpp"
#include "polyvib/mesh.hpp"

namespace polyvib {

// The assembled generalized eigenproblem A x = lambda B x on the reduced dofs.
// A is the exact divergence form; B is the projected mass, plus the stabilizer
// when enabled. Both exactly symmetric by symmetric accumulation.
struct GlobalPencil {
  Eigen::SparseMatrix<double> A;
  Eigen::SparseMatrix<double> B;
  int n = 0;
  StabilizationOptions stab;
};

GlobalPencil assemble_pencil(const Mesh& mesh, const DofMap& dm,
                             const StabilizationOptions& stab = {});

// coordinate text export: one "row col value" line per stored entry, 0-based
void write_coordinate_text(const std::string& path,
                           const Eigen::SparseMatrix<double>& m);

}  // namespace polyvib
