#include "symplopt/hessian.hpp"

namespace symplopt {

HessianOperator::HessianOperator(Metric metric, SymplecticPoint x, const CostFunction& f)
    : metric_(std::move(metric)), x_(std::move(x)), cost_(f) {
  ambient_gradient_ = cost_.gradient(x_.matrix());
  gradient_ = metric_.riemannian_gradient_matrix(x_, ambient_gradient_);
  gradient_norm_ = metric_.norm(x_, gradient_);
  if (metric_.kind() == Metric::Kind::kCanonicalLike) {
    xtg_ = x_.matrix().transpose() * ambient_gradient_;
    Matrix jt_xtg = apply_j_t(xtg_);  // J_{2k}^T X^T G
    skew_jxg_ = skew_part(jt_xtg);
    sym_jxg_ = sym_part(jt_xtg);
    ptg_ = x_.apply_px_t(ambient_gradient_);
  } else {
    omega_ = metric_.omega_for(x_, metric_.minv_apply(x_, ambient_gradient_));
  }
}

Matrix HessianOperator::apply(const Matrix& z) const {
  if (metric_.kind() == Metric::Kind::kCanonicalLike) return apply_canonical(z);
  return apply_weighted(z);
}

Matrix HessianOperator::apply_weighted(const Matrix& z) const {
  // M^{-1}(hess[Z] - J Z Omega) followed by removal of the J X Theta piece.
  Matrix w = metric_.minv_apply(
      x_, cost_.hessian_apply(x_.matrix(), z) - apply_j(z) * omega_);
  Matrix rhs = x_.jx().transpose() * w;  // X^T J^T W
  Matrix theta = metric_.solve_lyapunov(x_, rhs - rhs.transpose());
  return w - metric_.minv_apply(x_, x_.jx() * theta);
}

Matrix HessianOperator::apply_canonical(const Matrix& z) const {
  const Matrix& xm = x_.matrix();
  const Matrix& g = ambient_gradient_;
  const double rho = metric_.rho();
  const Matrix xjk = right_j(xm);  // X J_{2k}

  Matrix inner = metric_.minv_apply(x_, cost_.hessian_apply(xm, z));
  inner.noalias() -= rho * right_j(z) * skew_jxg_;

  // 2 sym(rho X Z^T - 2 skew(X J Z^T) J^T P_X^T) G, assembled as Q G + Q^T G
  // without forming 2n x 2n intermediates. skew(X J Z^T) V is expanded as
  // (X J (Z^T V) - Z (J^T X^T V)) / 2.
  {
    Matrix jt_ptg = apply_j_t(ptg_);  // J^T P_X^T G
    Matrix qg = rho * xm * (z.transpose() * g) -
                (xjk * (z.transpose() * jt_ptg) - z * (xjk.transpose() * jt_ptg));
    Matrix skew_g = 0.5 * (xjk * (z.transpose() * g) - z * (xjk.transpose() * g));
    Matrix qtg = rho * z * xtg_ + 2.0 * x_.apply_px(apply_j(skew_g));
    inner += qg + qtg;
  }

  inner.noalias() +=
      rho * xm *
      sym_part((xm.transpose() * apply_j(z)) * right_j(g.transpose() * xm) -
               z.transpose() * g);

  Matrix out = project_canonical(x_, inner);

  // Oblique-projected group: P_X applied to the P_X^T-weighted terms.
  Matrix w = apply_j(z * sym_jxg_ + (1.0 / rho) * ptg_ * (z.transpose() * x_.jx()));
  w = x_.apply_px_t(w);
  w.noalias() -= right_j(x_.jx()) * sym_part(z.transpose() * ptg_);
  w.noalias() -= z * skew_part(apply_j(xm.transpose() * apply_j(ptg_)) + rho * apply_j(sym_jxg_));
  w.noalias() -= ptg_ * skew_part(x_.xtx_solve(xm.transpose() * z));
  out += x_.apply_px(w);
  return out;
}

Matrix HessianOperator::apply_group_canonical(const Matrix& z) const {
  if (x_.k() != x_.n())
    throw InvariantError("apply_group_canonical: square case k = n only");
  const Matrix& xm = x_.matrix();
  const Matrix& g = ambient_gradient_;
  const double rho = metric_.rho();

  Matrix inner = rho * xm * (xm.transpose() * cost_.hessian_apply(xm, z));
  inner.noalias() -= rho * right_j(z) * skew_jxg_;
  inner.noalias() += rho * (xm * (z.transpose() * g) + z * (xm.transpose() * g));
  inner.noalias() +=
      rho * xm *
      sym_part((xm.transpose() * apply_j(z)) * right_j(g.transpose() * xm) -
               z.transpose() * g);
  return project_canonical(x_, inner);
}

Matrix HessianOperator::apply_euclidean_reference(const Matrix& z) const {
  const Matrix& xm = x_.matrix();
  LyapunovSolver lyap(xm.transpose() * xm);

  Matrix rhs0 = xm.transpose() * apply_j_t(ambient_gradient_);
  Matrix omega = lyap.solve(rhs0 - rhs0.transpose());
  omega = (0.5 * (omega - omega.transpose())).eval();

  Matrix hz = cost_.hessian_apply(xm, z);
  Matrix rhs1 = xm.transpose() * apply_j_t(hz) - xm.transpose() * (z * omega);
  Matrix theta = lyap.solve(rhs1 - rhs1.transpose());
  theta = (0.5 * (theta - theta.transpose())).eval();

  return hz - apply_j(z) * omega - apply_j(xm) * theta;
}

double HessianOperator::quadratic_form(const Matrix& z, const Matrix& u) const {
  return metric_.inner(x_, u, apply(z));
}

Matrix dproj_canonical(const SymplecticPoint& x, const Matrix& z, const Matrix& y) {
  Matrix sz = skew_part(z.transpose() * apply_j_t(y));
  Matrix sx = skew_part(x.matrix().transpose() * apply_j_t(y));
  return -right_j(x.matrix()) * sz - right_j(z) * sx;
}

Matrix dmetric_canonical_apply(const SymplecticPoint& x, const Matrix& z, double rho,
                               const Matrix& u) {
  const Matrix& xm = x.matrix();
  // Q U with Q = (1/rho) J X Z^T J^T - Pi_X^perp Z (X^TX)^{-1} X^T.
  Matrix qu = x.jx() * (z.transpose() * apply_j_t(u)) / rho -
              x.apply_pi_perp(z * x.xtx_solve(xm.transpose() * u));
  // Q^T U with Q^T = (1/rho) J Z X^T J^T - X (X^TX)^{-1} Z^T Pi_X^perp.
  Matrix qtu = apply_j(z * (xm.transpose() * apply_j_t(u))) / rho -
               xm * x.xtx_solve(z.transpose() * x.apply_pi_perp(u));
  return qu + qtu;
}

Matrix chi_canonical(const SymplecticPoint& x, const Matrix& z, const Matrix& u, double rho) {
  const Matrix& xm = x.matrix();
  // sym(U Z^T) V expanded as (U (Z^T V) + Z (U^T V)) / 2.
  Matrix s_jx = 0.5 * (u * (z.transpose() * x.jx()) + z * (u.transpose() * x.jx()));
  Matrix s_x = 0.5 * (u * (z.transpose() * xm) + z * (u.transpose() * xm));
  return (2.0 / rho) * apply_j_t(s_jx) -
         2.0 * x.apply_pi_perp(x.xtx_solve(s_x.transpose()).transpose());
}

Matrix kmap_canonical(const SymplecticPoint& x, const Matrix& z, const Matrix& u, double rho) {
  const Matrix& xm = x.matrix();
  Matrix t = xm * skew_part(z.transpose() * apply_j_t(u));
  t.noalias() += z * (u.transpose() * x.jx()) + u * (z.transpose() * x.jx());
  Matrix out = apply_j(t) / rho;
  out.noalias() -= x.apply_pi_perp(u) * skew_part(x.xtx_solve(xm.transpose() * z));
  out.noalias() -= x.apply_pi_perp(z) * skew_part(x.xtx_solve(xm.transpose() * u));
  out.noalias() -= xm * x.xtx_solve(sym_part(z.transpose() * x.apply_pi_perp(u)));
  return out;
}

WeightedProjectionDerivative dproj_weighted(const Metric& metric, const SymplecticPoint& x,
                                            const Matrix& z, const Matrix& y) {
  if (metric.kind() == Metric::Kind::kCanonicalLike)
    throw InvariantError("dproj_weighted: constant-weight metrics only");
  Matrix omega = metric.omega_for(x, y);
  Matrix coupling = sym_part(x.jx().transpose() * metric.minv_apply(x, apply_j(z)));
  Matrix rhs = 2.0 * skew_part(z.transpose() * apply_j_t(y) + 2.0 * omega.transpose() * coupling);
  Matrix xi = metric.solve_lyapunov(x, rhs);
  xi = (0.5 * (xi - xi.transpose())).eval();
  Matrix value = -metric.minv_apply(x, apply_j(z * omega + x.matrix() * xi));
  return {std::move(value), std::move(omega), std::move(xi)};
}

}  // namespace symplopt
