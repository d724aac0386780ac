#include "polyvib/element.hpp"

#include <stdexcept>

#include "polyvib/quadrature.hpp"

namespace polyvib {

Vec2 ElementOperators::eval_projection(const Eigen::VectorXd& local_dofs,
                                       const Vec2& p) const {
  const Eigen::VectorXd c = proj_matrix * local_dofs;
  Vec2 out{0.0, 0.0};
  for (int a = 0; a < c.size(); ++a) {
    const Vec2 g = basis_kp1.grad(a + 1, p);
    out.x += c[a] * g.x;
    out.y += c[a] * g.y;
  }
  return out;
}

double ElementOperators::eval_div(const Eigen::VectorXd& local_dofs,
                                  const Vec2& p) const {
  const Eigen::VectorXd c = div_matrix * local_dofs;
  double out = 0.0;
  for (int q = 0; q < c.size(); ++q) out += c[q] * basis_k.eval(q, p);
  return out;
}

// The local construction runs in extended precision: the scaled-monomial mass
// and Gram matrices reach condition numbers ~1e4..1e5 by degree 3, and plain
// double arithmetic leaves ~1e-10 noise in the projector identity, visible in
// the most accurate eigenvalue runs. Extended precision pushes the floor to
// ~1e-13 at the cost of a constant factor in assembly time.
namespace {

using LD = long double;
using MatLD = Eigen::Matrix<LD, Eigen::Dynamic, Eigen::Dynamic>;
using VecLD = Eigen::Matrix<LD, Eigen::Dynamic, 1>;

LD ipow_ld(LD v, int e) {
  LD r = 1.0L;
  for (int i = 0; i < e; ++i) r *= v;
  return r;
}

struct LocalBasis {
  Vec2 center;
  LD h;
  const std::vector<std::pair<int, int>>* exps;

  LD eval(int i, double px, double py) const {
    const LD sx = (static_cast<LD>(px) - center.x) / h;
    const LD sy = (static_cast<LD>(py) - center.y) / h;
    const auto [a, b] = (*exps)[i];
    return ipow_ld(sx, a) * ipow_ld(sy, b);
  }
  void grad(int i, double px, double py, LD& gx, LD& gy) const {
    const LD sx = (static_cast<LD>(px) - center.x) / h;
    const LD sy = (static_cast<LD>(py) - center.y) / h;
    const auto [a, b] = (*exps)[i];
    gx = a > 0 ? a * ipow_ld(sx, a - 1) * ipow_ld(sy, b) / h : 0.0L;
    gy = b > 0 ? b * ipow_ld(sx, a) * ipow_ld(sy, b - 1) / h : 0.0L;
  }
};

LD legendre_ld(int n, LD x) {
  if (n == 0) return 1.0L;
  LD p0 = 1.0L, p1 = x;
  for (int m = 1; m < n; ++m) {
    const LD p2 = ((2 * m + 1) * x * p1 - m * p0) / (m + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

MatLD spd_solve(const MatLD& m, const MatLD& rhs, const char* what) {
  const VecLD s = m.diagonal().cwiseSqrt().cwiseInverse();
  const MatLD ms = s.asDiagonal() * m * s.asDiagonal();
  Eigen::LLT<MatLD> fac(ms);
  if (fac.info() != Eigen::Success)
    throw std::runtime_error(std::string("element: ") + what +
                             " factorization failed");
  return s.asDiagonal() * fac.solve((s.asDiagonal() * rhs).eval()).eval();
}

}  // namespace

ElementOperators build_element(const Mesh& mesh, int cell, int degree,
                               const StabilizationOptions& stab) {
  if (degree < 0) throw std::invalid_argument("element: degree must be >= 0");
  if (stab.enabled && stab.sigma < 0.0)
    throw std::invalid_argument("element: negative stabilization parameter");

  const int k = degree;
  const Polygon poly = mesh.cell_polygon(cell);
  const double area_d = polygon_area(poly);
  const Vec2 center = polygon_centroid(poly);
  const double h_d = polygon_diameter(poly);
  const auto& refs = mesh.cell_edges[cell];
  const int ne = static_cast<int>(refs.size());

  const int nk = poly_space_dim(k);          // dim P_k
  const int ng = poly_space_dim(k + 1) - 1;  // gradient basis fields
  const int n_int = nk - 1;
  const int n_loc = ne * (k + 1) + n_int;

  ElementOperators op;
  op.degree = k;
  op.n_loc = n_loc;
  op.area = area_d;
  op.basis_k = CellBasis(k, center, h_d);
  op.basis_kp1 = CellBasis(k + 1, center, h_d);

  const LD area = area_d;
  const LD h = h_d;
  LocalBasis lb{center, h, &op.basis_kp1.exps};

  // cell rule covers products of two basis monomials and of two gradients
  const QuadratureRule cell_rule = cell_quadrature(poly, 2 * k + 4);
  const int npts = static_cast<int>(cell_rule.points.size());
  MatLD vals(ng + 1, npts), gradx(ng + 1, npts), grady(ng + 1, npts);
  for (int g = 0; g < npts; ++g) {
    const Vec2 p = cell_rule.points[g];
    for (int m = 0; m <= ng; ++m) {
      vals(m, g) = lb.eval(m, p.x, p.y);
      lb.grad(m, p.x, p.y, gradx(m, g), grady(m, g));
    }
  }
  MatLD mass_full = MatLD::Zero(ng + 1, ng + 1);
  MatLD gram = MatLD::Zero(ng, ng);
  for (int g = 0; g < npts; ++g) {
    const LD w = cell_rule.weights[g];
    for (int i = 0; i <= ng; ++i)
      for (int j = i; j <= ng; ++j) mass_full(i, j) += w * vals(i, g) * vals(j, g);
    for (int i = 1; i <= ng; ++i)
      for (int j = i; j <= ng; ++j)
        gram(i - 1, j - 1) +=
            w * (gradx(i, g) * gradx(j, g) + grady(i, g) * grady(j, g));
  }
  mass_full = mass_full.selfadjointView<Eigen::Upper>();
  gram = gram.selfadjointView<Eigen::Upper>();

  // edge moment blocks int_e L_j m dS in the global parameterization of each
  // edge, plus the edge dofs of the gradient basis fields (global normal)
  std::vector<double> gpts, gwts;
  gauss_legendre_01(k + 2, gpts, gwts);
  std::vector<MatLD> edge_mom(ne);   // (ng+1) x (k+1)
  std::vector<MatLD> edge_grad(ne);  // (k+1) x ng
  for (int i = 0; i < ne; ++i) {
    const Edge& e = mesh.edges[refs[i].edge];
    const Vec2 a = mesh.vertices[e.a], b = mesh.vertices[e.b];
    const LD len = e.length;
    const LD inv_sqrt_len = 1.0L / std::sqrt(static_cast<LD>(len));
    MatLD mom = MatLD::Zero(ng + 1, k + 1);
    MatLD gd = MatLD::Zero(k + 1, ng);
    for (std::size_t g = 0; g < gpts.size(); ++g) {
      const double t = gpts[g];
      const double px = a.x + t * (b.x - a.x);
      const double py = a.y + t * (b.y - a.y);
      const LD w = static_cast<LD>(gwts[g]) * len;
      for (int j = 0; j <= k; ++j) {
        const LD lj = std::sqrt(static_cast<LD>(2 * j + 1)) * inv_sqrt_len *
                      legendre_ld(j, 2.0L * t - 1.0L);
        for (int m = 0; m <= ng; ++m) mom(m, j) += w * lj * lb.eval(m, px, py);
        for (int al = 0; al < ng; ++al) {
          LD gx, gy;
          lb.grad(al + 1, px, py, gx, gy);
          gd(j, al) += w * lj * (gx * e.normal.x + gy * e.normal.y);
        }
      }
    }
    edge_mom[i] = std::move(mom);
    edge_grad[i] = std::move(gd);
  }

  // divergence reconstruction: (div v, m)_E = -(v, grad m)_E + (v.n, m)_dE;
  // the volume term is (area/h) times an interior dof for nonconstant m
  MatLD div_rhs = MatLD::Zero(nk, n_loc);
  for (int i = 0; i < ne; ++i)
    div_rhs.block(0, i * (k + 1), nk, k + 1) =
        static_cast<LD>(refs[i].sign) * edge_mom[i].topRows(nk);
  for (int q = 1; q < nk; ++q) div_rhs(q, ne * (k + 1) + q - 1) -= area / h;
  const MatLD div_ld =
      spd_solve(mass_full.topLeftCorner(nk, nk), div_rhs, "P_k mass");

  // projection onto gradient fields: G c = (v, grad m)_E with the right side
  // rewritten as -(div v, m)_E + (v.n, m)_dE, both dof-computable
  MatLD proj_rhs = MatLD::Zero(ng, n_loc);
  for (int i = 0; i < ne; ++i)
    proj_rhs.block(0, i * (k + 1), ng, k + 1) +=
        static_cast<LD>(refs[i].sign) * edge_mom[i].bottomRows(ng);
  proj_rhs.noalias() -= mass_full.block(1, 0, ng, nk) * div_ld;
  const MatLD proj_ld = spd_solve(gram, proj_rhs, "gradient Gram");

  // dof vectors of the gradient fields; interior moments are Gram rows scaled
  // by h/area, exactly as the interior dof definition prescribes
  MatLD grad_dofs_ld = MatLD::Zero(n_loc, ng);
  for (int i = 0; i < ne; ++i)
    grad_dofs_ld.block(i * (k + 1), 0, k + 1, ng) = edge_grad[i];
  for (int q = 1; q < nk; ++q)
    grad_dofs_ld.row(ne * (k + 1) + q - 1) = (h / area) * gram.row(q - 1);

  MatLD K = div_ld.transpose() * mass_full.topLeftCorner(nk, nk) * div_ld;
  K = (0.5L * (K + K.transpose())).eval();
  MatLD M0 = proj_ld.transpose() * gram * proj_ld;
  M0 = (0.5L * (M0 + M0.transpose())).eval();

  MatLD S = MatLD::Zero(n_loc, n_loc);
  if (stab.enabled && stab.sigma > 0.0) {
    // flux form: sigma * sum_e (int_e u.n)(int_e v.n); the zeroth edge moment
    // carries the flux over sqrt(|e|), and the orientation signs cancel
    MatLD raw = MatLD::Zero(n_loc, n_loc);
    for (int i = 0; i < ne; ++i)
      raw(i * (k + 1), i * (k + 1)) =
          static_cast<LD>(stab.sigma) * mesh.edges[refs[i].edge].length;
    if (stab.mode == StabilizationOptions::Mode::Raw) {
      S = std::move(raw);
    } else {
      const MatLD complement =
          MatLD::Identity(n_loc, n_loc) - grad_dofs_ld * proj_ld;
      S = complement.transpose() * raw * complement;
      S = (0.5L * (S + S.transpose())).eval();
    }
  }

  op.mass_k = mass_full.topLeftCorner(nk, nk).cast<double>();
  op.grad_gram_kp1 = gram.cast<double>();
  op.div_matrix = div_ld.cast<double>();
  op.proj_matrix = proj_ld.cast<double>();
  op.grad_dofs = grad_dofs_ld.cast<double>();
  op.K = K.cast<double>();
  op.M0 = M0.cast<double>();
  op.S = S.cast<double>();
  return op;
}

}  // namespace polyvib
