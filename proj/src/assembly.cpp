#include "polyvib/assembly.hpp"

#include <cstdio>
#include <stdexcept>
#include <vector>

namespace polyvib {

GlobalPencil assemble_pencil(const Mesh& mesh, const DofMap& dm,
                             const StabilizationOptions& stab) {
  GlobalPencil out;
  out.n = dm.n_reduced();
  out.stab = stab;

  std::vector<Eigen::Triplet<double>> ta, tb;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const ElementOperators op = build_element(mesh, c, dm.degree(), stab);
    const std::vector<int> dofs = dm.cell_reduced_dofs(c);
    if (static_cast<int>(dofs.size()) != op.n_loc)
      throw std::runtime_error("assembly: dof list size mismatch");
    const Eigen::MatrixXd local_b = op.M0 + op.S;
    for (int i = 0; i < op.n_loc; ++i) {
      if (dofs[i] < 0) continue;
      for (int j = 0; j < op.n_loc; ++j) {
        if (dofs[j] < 0) continue;
        if (op.K(i, j) != 0.0) ta.emplace_back(dofs[i], dofs[j], op.K(i, j));
        if (local_b(i, j) != 0.0) tb.emplace_back(dofs[i], dofs[j], local_b(i, j));
      }
    }
  }
  out.A.resize(out.n, out.n);
  out.B.resize(out.n, out.n);
  out.A.setFromTriplets(ta.begin(), ta.end());
  out.B.setFromTriplets(tb.begin(), tb.end());
  out.A.makeCompressed();
  out.B.makeCompressed();
  return out;
}

void write_coordinate_text(const std::string& path,
                           const Eigen::SparseMatrix<double>& m) {
  const std::string tmp = path + ".tmp";
  std::FILE* f = std::fopen(tmp.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + tmp);
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
      std::fprintf(f, "%d %d %.17g\n", static_cast<int>(it.row()),
                   static_cast<int>(it.col()), it.value());
  std::fclose(f);
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp);
}

}  // namespace polyvib
