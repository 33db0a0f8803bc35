#include "symplopt/newton.hpp"

#include <Eigen/LU>
#include <cmath>
#include <map>
#include <mutex>

namespace symplopt {

namespace {

const Matrix& cached_duplication(Index k) {
  static std::mutex mutex;
  static std::map<Index, Matrix> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, duplication_matrix(k)).first;
  return it->second;
}

}  // namespace

SaddleSystem build_saddle_system(const Metric& metric, const SymplecticPoint& x,
                                 const CostFunction& f) {
  if (metric.kind() == Metric::Kind::kCanonicalLike)
    throw InvariantError("build_saddle_system: no direct path for the canonical-like metric");
  const Matrix* h = f.constant_hessian();
  if (h == nullptr)
    throw DirectSolveError("build_saddle_system: cost exposes no constant ambient Hessian");

  const Index k = x.k();
  Matrix ambient_gradient = f.gradient(x.matrix());
  Matrix omega0 = metric.omega_for(x, metric.minv_apply(x, ambient_gradient));

  const Matrix& d = cached_duplication(k);
  Matrix jn = poisson_matrix(x.n());
  SaddleSystem system;
  system.a = kron(Matrix::Identity(2 * k, 2 * k), *h) - kron(omega0.transpose(), jn);
  system.b = -2.0 * kron(Matrix::Identity(2 * k, 2 * k), x.jx()) * d;
  system.g = vec(-ambient_gradient);
  return system;
}

DirectNewtonSolution solve_newton_direct_detailed(const Metric& metric,
                                                  const SymplecticPoint& x,
                                                  const CostFunction& f) {
  const Index n = x.n(), k = x.k();
  const Matrix& xm = x.matrix();

  NewtonSolveReport report;
  report.method = NewtonSolveReport::Method::kDirect;

  SaddleSystem system = build_saddle_system(metric, x, f);
  const Matrix& a = system.a;
  const Matrix& b = system.b;
  const Vector& g = system.g;

  Eigen::PartialPivLU<Matrix> lu(a);
  if (lu.rcond() < 1e-14)
    throw DirectSolveError("solve_newton_direct: coefficient block is numerically singular");
  Vector ainv_g = lu.solve(g);
  Matrix ainv_b = lu.solve(b);
  report.coefficient_solves = 1 + static_cast<int>(b.cols());

  Matrix schur = b.transpose() * ainv_b;
  Eigen::PartialPivLU<Matrix> schur_lu(schur);
  if (schur_lu.rcond() < 1e-14)
    throw DirectSolveError("solve_newton_direct: Schur complement is numerically singular");
  Vector omega_vec = schur_lu.solve(b.transpose() * ainv_g);
  Vector z = ainv_g - ainv_b * omega_vec;

  Matrix zmat = unvec(z, 2 * n, 2 * k);
  const double tangency = dfx(xm, zmat).norm();
  if (tangency > 1e-8 * (1.0 + zmat.norm()))
    throw DirectSolveError("solve_newton_direct: recovered direction is not tangent");

  HessianOperator hess(metric, x, f);
  Matrix residual = hess.apply(zmat) + hess.gradient();
  report.residual_norm = metric.norm(x, residual);
  report.forcing_target = 1e-8 * hess.gradient_norm();
  if (report.residual_norm > report.forcing_target)
    throw DirectSolveError("solve_newton_direct: Newton residual " +
                           std::to_string(report.residual_norm) + " exceeds " +
                           std::to_string(report.forcing_target));

  return {TangentVector::unchecked(x, std::move(zmat)), unveck(omega_vec, 2 * k),
          std::move(report)};
}

TangentVector solve_newton_direct(const Metric& metric, const SymplecticPoint& x,
                                  const CostFunction& f, NewtonSolveReport* report) {
  DirectNewtonSolution solution = solve_newton_direct_detailed(metric, x, f);
  if (report) *report = solution.report;
  return std::move(solution.z);
}

std::pair<TangentVector, NewtonSolveReport> solve_newton_krylov(const HessianOperator& hess,
                                                                const KrylovOptions& options) {
  const Metric& metric = hess.metric();
  const SymplecticPoint& x = hess.point();
  const Index n = x.n(), k = x.k();
  const int cap = options.max_inner > 0 ? options.max_inner : static_cast<int>(n * k);

  NewtonSolveReport report;
  report.method = NewtonSolveReport::Method::kKrylov;

  const Matrix b = -hess.gradient();
  const double grad_norm = hess.gradient_norm();
  report.forcing_target =
      std::min(options.eta, std::pow(grad_norm, options.mu)) * grad_norm;

  Matrix zsol = Matrix::Zero(b.rows(), b.cols());
  if (grad_norm == 0.0) {
    report.residual_norm = 0.0;
    return {TangentVector::unchecked(x, std::move(zsol)), report};
  }

  auto operator_apply = [&](const Matrix& v) {
    return metric.project_tangent_matrix(x, hess.apply(v));
  };

  int total_iterations = 0;
  double true_residual = grad_norm;
  for (int restart = 0; restart < 3 && total_iterations < cap; ++restart) {
    Matrix r = b - (restart == 0 ? Matrix(Matrix::Zero(b.rows(), b.cols()))
                                 : Matrix(operator_apply(zsol)));
    double beta1 = metric.norm(x, r);
    if (beta1 <= report.forcing_target) {
      true_residual = beta1;
      break;
    }

    Matrix v_prev = Matrix::Zero(b.rows(), b.cols());
    Matrix v = r / beta1;
    Matrix w = Matrix::Zero(b.rows(), b.cols());
    Matrix w_prev = Matrix::Zero(b.rows(), b.cols());
    double beta = beta1;
    double c_prev = 1.0, c = 1.0, s_prev = 0.0, s = 0.0;
    double eta_res = beta1;
    bool breakdown = false;

    while (total_iterations < cap) {
      Matrix p = operator_apply(v);
      const double alpha = metric.inner(x, v, p);
      p -= alpha * v + beta * v_prev;
      const double beta_next = metric.norm(x, p);

      const double delta = c * alpha - c_prev * s * beta;
      const double rho1 = std::hypot(delta, beta_next);
      const double rho2 = s * alpha + c_prev * c * beta;
      const double rho3 = s_prev * beta;
      if (rho1 < 1e-300) {
        breakdown = true;
        break;
      }
      c_prev = c;
      s_prev = s;
      c = delta / rho1;
      s = beta_next / rho1;

      Matrix w_next = (v - rho3 * w_prev - rho2 * w) / rho1;
      zsol += (c * eta_res) * w_next;
      eta_res = -s * eta_res;
      ++total_iterations;

      w_prev = w;
      w = w_next;
      v_prev = v;
      if (beta_next <= 1e-14 * beta1) {
        breakdown = true;  // Krylov space exhausted; iterate is exact there
        break;
      }
      v = p / beta_next;
      beta = beta_next;
      if (std::abs(eta_res) <= 0.9 * report.forcing_target) break;
    }

    true_residual = metric.norm(x, operator_apply(zsol) - b);
    if (true_residual <= report.forcing_target || breakdown) break;
  }

  report.iterations = total_iterations;
  report.residual_norm = true_residual;
  report.status = true_residual <= report.forcing_target
                      ? NewtonSolveReport::Status::kConverged
                      : NewtonSolveReport::Status::kCapReached;
  return {TangentVector::unchecked(x, std::move(zsol)), report};
}

std::pair<TangentVector, NewtonSolveReport> solve_newton_krylov(const Metric& metric,
                                                                const SymplecticPoint& x,
                                                                const CostFunction& f,
                                                                const KrylovOptions& options) {
  HessianOperator hess(metric, x, f);
  return solve_newton_krylov(hess, options);
}

}  // namespace symplopt
