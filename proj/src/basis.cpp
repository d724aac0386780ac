#include "polyvib/basis.hpp"

namespace polyvib {

Eigen::MatrixXd monomial_mass(const CellBasis& basis, int dim, const QuadratureRule& rule) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd vals(dim);
  for (std::size_t g = 0; g < rule.size(); ++g) {
    for (int i = 0; i < dim; ++i) vals[i] = basis.eval(i, rule.points[g]);
    m.noalias() += rule.weights[g] * vals * vals.transpose();
  }
  return m;
}

Eigen::MatrixXd grad_gram(const CellBasis& basis_kp1, const QuadratureRule& rule) {
  const int n = basis_kp1.dim() - 1;  // constant dropped
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd gx(n, 2);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    for (int i = 0; i < n; ++i) {
      const Vec2 gi = basis_kp1.grad(i + 1, rule.points[q]);
      gx(i, 0) = gi.x;
      gx(i, 1) = gi.y;
    }
    g.noalias() += rule.weights[q] * gx * gx.transpose();
  }
  return g;
}

}  // namespace polyvib
