#include "polyvib/eigensolve.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <vector>

namespace polyvib {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sparse_norm1(const Eigen::SparseMatrix<double>& m) {
  Eigen::VectorXd colsum = Eigen::VectorXd::Zero(m.cols());
  for (int j = 0; j < m.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, j); it; ++it)
      colsum[j] += std::abs(it.value());
  return colsum.size() ? colsum.maxCoeff() : 0.0;
}

int count_below(const Eigen::VectorXd& evals_ascending, double tol) {
  int c = 0;
  while (c < evals_ascending.size() && evals_ascending[c] <= tol) ++c;
  return c;
}

struct Pair {
  double theta;
  int idx;
};

// classify a theta spectrum: indices of finite modes plus zero/infinite counts
void classify(const Eigen::VectorXd& thetas, double zero_tol, int& n_zero,
              int& n_inf, std::vector<Pair>& finite) {
  n_zero = n_inf = 0;
  finite.clear();
  for (int i = 0; i < thetas.size(); ++i) {
    const double t = thetas[i];
    if (t >= 1.0 - zero_tol)
      ++n_zero;
    else if (t <= zero_tol)
      ++n_inf;
    else
      finite.push_back({t, i});
  }
  // ascending lambda = descending theta
  std::sort(finite.begin(), finite.end(),
            [](const Pair& a, const Pair& b) { return a.theta > b.theta; });
}

// backward error per pair: ||Ax - lBx|| / ((||A||_1 + l ||B||_1) ||x||),
// independent of the output normalization convention
void attach_residuals(const GlobalPencil& p, EigenResult& r) {
  const double na = sparse_norm1(p.A), nb = sparse_norm1(p.B);
  r.residuals.resize(r.eigenvalues.size());
  for (int i = 0; i < r.eigenvalues.size(); ++i) {
    const double l = r.eigenvalues[i];
    const Eigen::VectorXd x = r.vectors.col(i);
    r.residuals[i] = (p.A * x - l * (p.B * x)).norm() / ((na + l * nb) * x.norm());
  }
}

EigenResult solve_dense(const GlobalPencil& pencil, const SolveOptions& opts) {
  const int n = pencil.n;
  EigenResult res;

  Eigen::MatrixXd T;  // whitening map onto the complement of ker(A+B)
  Eigen::VectorXd ctheta;
  {
    const Eigen::MatrixXd C = Eigen::MatrixXd(pencil.A) + Eigen::MatrixXd(pencil.B);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esC(C);
    if (esC.info() != Eigen::Success)
      throw std::runtime_error("eigensolve: A+B eigendecomposition failed");
    const double tolC = opts.rank_tol * C.cwiseAbs().colwise().sum().maxCoeff();
    const int l = count_below(esC.eigenvalues(), tolC);
    const int r = n - l;
    if (r == 0) throw std::runtime_error("eigensolve: A+B has no positive rank");
    res.dim_intersection = l;
    res.deflated = l > 0;
    T = esC.eigenvectors().rightCols(r) *
        esC.eigenvalues().tail(r).cwiseSqrt().cwiseInverse().asDiagonal();
  }

  Eigen::MatrixXd M = T.transpose() * (pencil.B * T);
  M = 0.5 * (M + M.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esM(M);
  if (esM.info() != Eigen::Success)
    throw std::runtime_error("eigensolve: deflated solve failed");

  std::vector<Pair> finite;
  classify(esM.eigenvalues(), opts.zero_tol, res.n_zero_discarded,
           res.n_infinite, finite);

  const int n_out = std::min<int>(opts.n_eigs, static_cast<int>(finite.size()));
  res.eigenvalues.resize(n_out);
  res.vectors.resize(n, n_out);
  res.a_normalized = res.deflated;
  for (int i = 0; i < n_out; ++i) {
    const double theta = std::clamp(finite[i].theta, 0.0, 1.0);
    res.eigenvalues[i] = (1.0 - theta) / theta;
    // x'Cx = 1 by whitening, so x'Bx = theta and x'Ax = 1-theta
    const double s = res.a_normalized ? 1.0 - theta : theta;
    res.vectors.col(i) = T * esM.eigenvectors().col(finite[i].idx) / std::sqrt(s);
  }
  return res;
}

EigenResult solve_sparse(const GlobalPencil& pencil, const SolveOptions& opts) {
  const int n = pencil.n;
  Eigen::SparseMatrix<double> C = pencil.A + pencil.B;
  C.makeCompressed();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  ldlt.compute(C);
  if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0.0)
    throw std::runtime_error(
        "eigensolve: A+B factorization failed; the pencil is singular or "
        "numerically indefinite, solve a dense level for diagnostics");

  std::mt19937_64 rng(opts.seed);
  auto uniform = [&rng]() {
    return 2.0 * std::ldexp(static_cast<double>(rng() >> 11), -53) - 1.0;
  };

  // Lanczos on (A+B)^{-1} B, self-adjoint in the A+B inner product. Zero
  // modes of A sit at theta = 1 and converge first; wanted finite modes are
  // the next-largest thetas. Full reorthogonalization, no restarts.
  const int m_max = std::max(2, std::min(n, opts.max_iters));
  std::vector<Eigen::VectorXd> V;
  V.reserve(m_max);
  std::vector<double> alpha, beta;  // beta[j] couples v_j to v_{j+1}

  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform();
  v /= std::sqrt(v.dot(C * v));
  V.push_back(v);

  const double conv_tol = 1e-11;
  const int want = std::max(1, opts.n_eigs);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esT;
  int m = 0;
  bool breakdown = false;

  while (m < m_max) {
    const Eigen::VectorXd& vj = V[m];
    Eigen::VectorXd w = ldlt.solve(pencil.B * vj);
    Eigen::VectorXd cw = C * w;
    alpha.push_back(vj.dot(cw));
    w -= alpha[m] * vj;
    if (m > 0) w -= beta[m - 1] * V[m - 1];
    for (int pass = 0; pass < 2; ++pass) {
      cw = C * w;
      for (int i = 0; i <= m; ++i) w -= V[i].dot(cw) * V[i];
    }
    cw = C * w;
    const double b = std::sqrt(std::max(w.dot(cw), 0.0));
    ++m;
    if (b < 1e-13) {
      breakdown = true;  // invariant subspace exhausted
      break;
    }
    beta.push_back(b);
    V.push_back(w / b);

    if (m >= want + 2 && m % 5 == 0) {
      Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) Tm(i, i) = alpha[i];
      for (int i = 0; i + 1 < m; ++i) Tm(i, i + 1) = Tm(i + 1, i) = beta[i];
      esT.compute(Tm);
      int conv_finite = 0;
      bool top_block_done = true;
      for (int i = m - 1; i >= 0 && conv_finite <= want; --i) {
        const double t = esT.eigenvalues()[i];
        if (t <= opts.zero_tol) break;
        // emerging copies of the theta = 1 kernel cluster pass through high
        // theta with large residuals; physical modes all sit below 0.5, so
        // the zero-mode region never gates the stop test
        if (t >= 0.99) continue;
        const double rb = beta.back() * std::abs(esT.eigenvectors()(m - 1, i));
        if (rb > conv_tol) {
          top_block_done = false;
          break;
        }
        ++conv_finite;
      }
      if (top_block_done && conv_finite > want) break;
    }
  }

  Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) Tm(i, i) = alpha[i];
  for (int i = 0; i + 1 < m; ++i) Tm(i, i + 1) = Tm(i + 1, i) = beta[i];
  esT.compute(Tm);

  EigenResult res;
  res.sparse_path = true;
  const double last_beta = breakdown || beta.empty() ? 0.0 : beta.back();
  std::vector<Pair> finite;
  for (int i = m - 1; i >= 0; --i) {
    const double t = esT.eigenvalues()[i];
    const double rb = last_beta * std::abs(esT.eigenvectors()(m - 1, i));
    if (rb > conv_tol) continue;  // unconverged Ritz value
    if (t >= 1.0 - opts.zero_tol)
      ++res.n_zero_discarded;
    else if (t > opts.zero_tol)
      finite.push_back({t, i});
  }
  std::sort(finite.begin(), finite.end(),
            [](const Pair& a, const Pair& b) { return a.theta > b.theta; });
  if (static_cast<int>(finite.size()) < opts.n_eigs)
    throw std::runtime_error(
        "eigensolve: Lanczos converged " + std::to_string(finite.size()) +
        " of " + std::to_string(opts.n_eigs) +
        " requested eigenvalues; raise max_iters");

  const int n_out = std::min<int>(opts.n_eigs, static_cast<int>(finite.size()));
  res.eigenvalues.resize(n_out);
  res.vectors.resize(n, n_out);
  for (int i = 0; i < n_out; ++i) {
    const double theta = finite[i].theta;
    res.eigenvalues[i] = (1.0 - theta) / theta;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < m; ++j) x += esT.eigenvectors()(j, finite[i].idx) * V[j];
    const double nb = x.dot(pencil.B * x);
    if (nb <= 0.0)
      throw std::runtime_error("eigensolve: nonpositive b_h norm of Ritz vector");
    res.vectors.col(i) = x / std::sqrt(nb);
  }
  return res;
}

}  // namespace

KernelReport kernel_report(const GlobalPencil& pencil, double rank_tol) {
  KernelReport rep;
  rep.rank_tol = rank_tol;
  const Eigen::MatrixXd A = Eigen::MatrixXd(pencil.A);
  const Eigen::MatrixXd B = Eigen::MatrixXd(pencil.B);
  const Eigen::MatrixXd C = A + B;
  auto dim_ker = [rank_tol](const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    const double tol = rank_tol * M.cwiseAbs().colwise().sum().maxCoeff();
    int c = 0;
    for (int i = 0; i < M.rows(); ++i)
      if (std::abs(es.eigenvalues()[i]) <= tol) ++c;
    return c;
  };
  rep.dim_ker_A = dim_ker(A);
  rep.dim_ker_B = dim_ker(B);
  rep.dim_intersection = dim_ker(C);
  return rep;
}

std::string EigenResult::pencil_status() const {
  if (dim_intersection == 0) return "regular";
  return "singular(" + std::to_string(dim_intersection) + ")";
}

EigenResult solve_pencil(const GlobalPencil& pencil, const SolveOptions& opts) {
  if (pencil.n <= 0) throw std::invalid_argument("eigensolve: empty pencil");
  if (opts.force_dense && opts.force_sparse)
    throw std::invalid_argument("eigensolve: conflicting path overrides");
  const bool dense =
      opts.force_dense || (!opts.force_sparse && pencil.n <= opts.dense_cap);
  EigenResult res = dense ? solve_dense(pencil, opts) : solve_sparse(pencil, opts);
  res.scaled = res.eigenvalues / (kPi * kPi);
  attach_residuals(pencil, res);
  for (int i = 0; i < res.residuals.size(); ++i)
    if (!(res.residuals[i] <= opts.res_tol))
      throw std::runtime_error(
          "eigensolve: residual " + std::to_string(res.residuals[i]) +
          " exceeds tolerance for eigenvalue " +
          std::to_string(res.eigenvalues[i]));
  return res;
}

void write_eigen_csv(const std::string& path, const EigenResult& result) {
  const std::string tmp = path + ".tmp";
  std::FILE* f = std::fopen(tmp.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + tmp);
  std::fprintf(f, "# pencil_status: %s\n", result.pencil_status().c_str());
  std::fprintf(f, "# normalization: %s\n", result.a_normalized ? "a_h" : "b_h");
  std::fprintf(f, "index,lambda,lambda_scaled,residual\n");
  for (int i = 0; i < result.eigenvalues.size(); ++i)
    std::fprintf(f, "%d,%.17g,%.17g,%.3e\n", i, result.eigenvalues[i],
                 result.scaled[i], result.residuals[i]);
  if (std::fclose(f) != 0 || std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot finalize " + path);
}

}  // namespace polyvib
