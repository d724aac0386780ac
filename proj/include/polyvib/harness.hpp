#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "polyvib/assembly.hpp"
#include "polyvib/dofmap.hpp"
#include "polyvib/eigensolve.hpp"
#include "polyvib/exact.hpp"
#include "polyvib/mesh.hpp"

namespace polyvib {

// one experiment: a mesh family swept over refinement levels at fixed order,
// solved and compared against the reference spectrum of the domain
struct RunConfig {
  std::string domain = "rect";  // rect | lshape
  double a = 1.0;               // rectangle sides; ignored for lshape
  double b = 1.1;
  std::string family = "square";  // triangular|square|trapezoidal|voronoi|hexagonal
  std::vector<int> levels = {0, 1, 2, 3};
  int order = 0;
  double sigma_e = 0.1;
  bool stabilized = false;
  std::string stab_mode = "projected";  // projected | raw
  int n_eigs = 7;
  double zero_tol = 1e-8;
  std::uint64_t seed = 20240811;
  std::string outdir;  // empty: no files written

  void set(const std::string& key, const std::string& value);
  void validate() const;
  std::string serialized() const;  // canonical key = value form, parseable back

  MeshFamily mesh_family() const;
  Domain domain_shape() const;
  ExactSpectrum reference(int count) const;
};

// key = value lines, # comments and blank lines ignored
RunConfig load_config(const std::string& path);
// apply "key=value" items on top of a base config
RunConfig apply_overrides(RunConfig base, const std::vector<std::string>& items);

// log2(e_prev / e_cur); NaN when either error is not positive
double rate(double e_prev, double e_cur);

// sorted-order matching diagnostic: true when `lambda`, assigned to
// exact[index], sits closer to some other reference value by more than half
// the gap between the two references; equal references never flag each other
bool mismatch_flag(double lambda, const std::vector<double>& exact, int index);

struct ConvergenceTable {
  std::vector<double> exact;  // matched reference values (unscaled), one per row
  std::vector<int> levels;    // one per column
  Eigen::MatrixXd lambda;     // computed eigenvalues, rows x levels
  Eigen::MatrixXd rel_error;
  Eigen::MatrixXd rate;            // NaN in the first column and where undefined
  std::vector<uint8_t> mismatch;   // row-major flags: computed value sits closer
                                   // to a different reference by > 50% of the gap
  std::vector<int> dofs;           // per level
  std::vector<std::string> status; // pencil status per level

  bool flagged(int row, int col) const {
    return mismatch[static_cast<size_t>(row) * levels.size() + col] != 0;
  }
};

// mesh -> dofs -> assemble -> solve -> match per level; throws with the failing
// stage name on error. Writes config.txt, table.csv, table.md into cfg.outdir
// when set (atomically, temp file then rename).
ConvergenceTable run_experiment(const RunConfig& cfg);

void write_table_csv(const std::string& path, const ConvergenceTable& t);
void write_table_markdown(const std::string& path, const ConvergenceTable& t,
                          const RunConfig& cfg);

// extreme generalized Rayleigh quotients of the plain projected mass form
// against the exact lowest-order Raviart-Thomas mass, on the structured
// triangulations of the unit square (order 0). mu_max stays at 1; mu_min
// decays with refinement, measuring the defect of the computable seminorm.
struct NormGapRow {
  int level = 0;
  int n_grid = 0;  // squares per side
  int dofs = 0;
  double mu_min = 0.0;
  double mu_max = 0.0;
};
std::vector<NormGapRow> norm_gap_study(const std::vector<int>& levels);

// dof vector (full numbering) of the piecewise divergence-free-moment kernel
// field supported on the squares not touching the boundary, normalized so each
// carrying triangle contributes 1/(3 N^2) of squared L2 mass; second member
// flags the carrying cells. Triangular unit-square meshes only.
std::pair<Eigen::VectorXd, std::vector<uint8_t>> gap_witness_field(
    const Mesh& mesh, const DofMap& dm);

// sample the projected eigenfunction `index` on a barycentric sub-grid of each
// cell fan triangle and write cell,x,y,ux,uy,modulus rows
void dump_eigenfunction(const std::string& path, const Mesh& mesh,
                        const DofMap& dm, const EigenResult& r, int index,
                        int subdiv = 3);

}  // namespace polyvib
