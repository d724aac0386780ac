#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "polyvib/assembly.hpp"

namespace polyvib {

// Rank structure of the pencil (A, B). dim_intersection counts directions
// annihilated by both forms; the pencil is regular iff it is zero.
struct KernelReport {
  int dim_ker_A = 0;
  int dim_ker_B = 0;
  int dim_intersection = 0;
  double rank_tol = 0.0;  // relative factor applied to each 1-norm
};

KernelReport kernel_report(const GlobalPencil& pencil, double rank_tol = 1e-10);

struct SolveOptions {
  int n_eigs = 12;          // finite eigenvalues to report
  double zero_tol = 1e-8;   // theta within zero_tol of 1 (or 0) is a zero
                            // (or infinite) mode, not a reported eigenvalue
  double rank_tol = 1e-10;  // relative rank cutoff for the A+B spectrum
  double res_tol = 1e-9;    // certified bound ||Ax-lBx|| <= res_tol(||A||+l||B||)
  int dense_cap = 1500;     // largest n solved by full dense decomposition
  int max_iters = 400;      // Lanczos budget on the iterative path
  std::uint64_t seed = 20240811;
  bool force_dense = false;
  bool force_sparse = false;
};

// Solution of A x = lambda B x through the bounded spectral transform
// B x = theta (A+B) x, lambda = (1-theta)/theta. Zero modes (theta near 1)
// are counted and discarded, infinite modes (theta near 0, ker B) counted.
// Reported eigenvalues are finite, positive, ascending. Vectors are columns,
// b_h-orthonormal; on a deflated (singular) pencil they are a_h-normalized
// instead, flagged by a_normalized.
struct EigenResult {
  Eigen::VectorXd eigenvalues;
  Eigen::VectorXd scaled;  // eigenvalues / pi^2
  Eigen::MatrixXd vectors;
  Eigen::VectorXd residuals;  // ||Ax-lBx|| / ((||A||_1 + l ||B||_1)||x||)
  int n_zero_discarded = 0;
  int n_infinite = 0;
  int dim_intersection = 0;
  bool deflated = false;
  bool a_normalized = false;
  bool sparse_path = false;

  std::string pencil_status() const;  // "regular" or "singular(l)"
};

// Dense path: full eigendecomposition of A+B, deflation of its kernel when
// the pencil is singular, then a symmetric solve in the whitened basis.
// Sparse path (n > dense_cap): LDLT of A+B plus Lanczos with full
// reorthogonalization on (A+B)^{-1} B in the A+B inner product; it requires a
// regular pencil and reports zero modes only as encountered.
EigenResult solve_pencil(const GlobalPencil& pencil, const SolveOptions& opts = {});

// CSV: "index,lambda,lambda_scaled,residual" with pencil_status and the
// normalization convention in leading comment lines.
void write_eigen_csv(const std::string& path, const EigenResult& result);

}  // namespace polyvib
