#include "symplopt/oracles.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>
#include <limits>

namespace symplopt::oracles {

namespace {

double default_step(const SymplecticPoint& x, const Matrix& z) {
  const double cbrt_eps = std::cbrt(std::numeric_limits<double>::epsilon());
  return cbrt_eps * (1.0 + x.matrix().norm()) / (1.0 + z.norm());
}

}  // namespace

SymplecticPoint moderate_random_point(ManifoldDims dims, std::uint64_t seed) {
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    SymplecticPoint x = random_point(dims, seed + 7919 * attempt);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(x.xtx());
    if (eig.eigenvalues().minCoeff() >= 1e-2 && eig.eigenvalues().maxCoeff() <= 1e2)
      return x;
  }
  throw InvariantError("moderate_random_point: no acceptable draw found");
}

Matrix explicit_weight_matrix(const Metric& metric, const SymplecticPoint& x) {
  const Index m = 2 * x.n();
  switch (metric.kind()) {
    case Metric::Kind::kEuclidean:
      return Matrix::Identity(m, m);
    case Metric::Kind::kWeightedEuclidean:
      return metric.weight();
    case Metric::Kind::kCanonicalLike: {
      const Matrix& jx = x.jx();
      Matrix xtx_inv = x.xtx_solve(Matrix::Identity(2 * x.k(), 2 * x.k()));
      return jx * jx.transpose() / metric.rho() + Matrix::Identity(m, m) -
             x.matrix() * xtx_inv * x.matrix().transpose();
    }
  }
  return Matrix::Identity(m, m);
}

Matrix tangent_basis(const SymplecticPoint& x) {
  const Index n = x.n(), k = x.k();
  const Index dim = 4 * n * k - k * (2 * k - 1);
  const Matrix xjk = right_j(x.matrix());
  const Matrix jxperp = apply_j(x.xperp());

  Matrix raw(4 * n * k, dim);
  Index col = 0;
  for (Index j = 0; j < 2 * k; ++j)
    for (Index i = 0; i <= j; ++i) {
      Matrix w = Matrix::Zero(2 * k, 2 * k);
      w(i, j) = 1.0;
      w(j, i) = 1.0;
      raw.col(col++) = vec(xjk * w);
    }
  for (Index b = 0; b < 2 * k; ++b)
    for (Index a = 0; a < 2 * n - 2 * k; ++a) {
      Matrix t = Matrix::Zero(2 * n, 2 * k);
      t.col(b) = jxperp.col(a);
      raw.col(col++) = vec(t);
    }

  Eigen::HouseholderQR<Matrix> qr(raw);
  return qr.householderQ() * Matrix::Identity(4 * n * k, dim);
}

Matrix fd_point_derivative(const SymplecticPoint& x, const Matrix& z,
                           const std::function<Matrix(const SymplecticPoint&)>& f,
                           double step) {
  // Fourth-order central stencil: the larger admissible step keeps the
  // difference quotient clear of cancellation even at condition numbers in
  // the hundreds.
  const double t = step > 0 ? step : 20.0 * default_step(x, z);
  Matrix f1 = f(retract(RetractionKind::kSr, x, t * z));
  Matrix f2 = f(retract(RetractionKind::kSr, x, -t * z));
  Matrix f3 = f(retract(RetractionKind::kSr, x, 2.0 * t * z));
  Matrix f4 = f(retract(RetractionKind::kSr, x, -2.0 * t * z));
  return (8.0 * (f1 - f2) - (f3 - f4)) / (12.0 * t);
}

Matrix fd_projection_derivative(const Metric& metric, const SymplecticPoint& x,
                                const Matrix& z, const Matrix& y) {
  return fd_point_derivative(
      x, z, [&](const SymplecticPoint& p) { return metric.project_tangent_matrix(p, y); });
}

Matrix fd_weight_derivative(const Metric& metric, const SymplecticPoint& x,
                            const Matrix& z, const Matrix& u) {
  return fd_point_derivative(x, z, [&](const SymplecticPoint& p) -> Matrix {
    return explicit_weight_matrix(metric, p) * u;
  });
}

Matrix fd_chi(const Metric& metric, const SymplecticPoint& x, const Matrix& z,
              const Matrix& u) {
  const Index rows = x.matrix().rows(), cols = x.matrix().cols();
  if (metric.kind() != Metric::Kind::kCanonicalLike)
    return Matrix::Zero(rows, cols);  // constant weight: D_V M = 0
  Matrix basis = tangent_basis(x);
  Matrix chi = Matrix::Zero(rows, cols);
  for (Index i = 0; i < basis.cols(); ++i) {
    Matrix v = unvec(basis.col(i), rows, cols);
    Matrix dvm_u = fd_weight_derivative(metric, x, v, u);
    const double coefficient = (z.array() * dvm_u.array()).sum();
    chi += coefficient * v;
  }
  return chi;
}

Matrix fd_kmap(const Metric& metric, const SymplecticPoint& x, const Matrix& z,
               const Matrix& u) {
  if (metric.kind() != Metric::Kind::kCanonicalLike)
    return Matrix::Zero(x.matrix().rows(), x.matrix().cols());
  return 0.5 * (fd_weight_derivative(metric, x, z, u) +
                fd_weight_derivative(metric, x, u, z) - fd_chi(metric, x, z, u));
}

Matrix fd_hessian_framework(const Metric& metric, const SymplecticPoint& x,
                            const Matrix& z, const CostFunction& cost) {
  Matrix ambient_gradient = cost.gradient(x.matrix());
  Matrix y0 = metric.minv_apply(x, ambient_gradient);
  Matrix grad = metric.project_tangent_matrix(x, y0);

  Matrix assembled = metric.minv_apply(x, cost.hessian_apply(x.matrix(), z));
  assembled += fd_point_derivative(x, z, [&](const SymplecticPoint& p) {
    return metric.project_tangent_matrix(p, y0);
  });
  if (metric.kind() == Metric::Kind::kCanonicalLike) {
    assembled -= metric.minv_apply(x, fd_weight_derivative(metric, x, z, y0));
    assembled += metric.minv_apply(x, fd_kmap(metric, x, z, grad));
  }
  return metric.project_tangent_matrix(x, assembled);
}

double fd_second_difference(const CostFunction& cost, const SymplecticPoint& x,
                            const Matrix& z, RetractionKind kind, double step) {
  const double t =
      step > 0 ? step
               : std::pow(std::numeric_limits<double>::epsilon(), 0.25) *
                     (1.0 + x.matrix().norm()) / (1.0 + z.norm());
  const double f0 = cost.value(x.matrix());
  const double fp = cost.value(retract(kind, x, t * z).matrix());
  const double fm = cost.value(retract(kind, x, -t * z).matrix());
  return (fp - 2.0 * f0 + fm) / (t * t);
}

Matrix kron_lyapunov_solve(const Matrix& c, const Matrix& rhs) {
  const Index m = c.rows();
  Matrix system = kron(Matrix::Identity(m, m), c) + kron(c.transpose(), Matrix::Identity(m, m));
  Vector solution = system.partialPivLu().solve(vec(rhs));
  return unvec(solution, m, m);
}

double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw DimensionError("fit_loglog_slope: need at least two samples");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double DerivativePair::relative_error() const {
  const double scale = std::max(1e-300, finite_difference.norm());
  return (closed_form - finite_difference).norm() / scale;
}

DerivativeOracleBundle derivative_oracles(const SymplecticPoint& x, const Matrix& z,
                                          const Matrix& u, const Matrix& y, double rho,
                                          const Metric& weighted) {
  DerivativeOracleBundle bundle;
  Metric canonical = Metric::canonical_like(rho);

  bundle.projection_canonical = {dproj_canonical(x, z, y),
                                 fd_projection_derivative(canonical, x, z, y)};
  bundle.weight_canonical = {dmetric_canonical_apply(x, z, rho, u),
                             fd_weight_derivative(canonical, x, z, u)};
  // The duality <X(Z,U), V> = <Z, D_V M(U)> over tangent V pins only the
  // tangent component of the index-raising map; the closed forms carry an
  // extra piece along J X Omega that the Hessian's projection annihilates.
  // The comparable quantity is therefore the tangent part of each side.
  Matrix basis = tangent_basis(x);
  auto tangent_part = [&](const Matrix& w) -> Matrix {
    return unvec(basis * (basis.transpose() * vec(w)), w.rows(), w.cols());
  };
  bundle.chi = {tangent_part(chi_canonical(x, z, u, rho)),
                fd_chi(canonical, x, z, u)};
  bundle.kmap = {tangent_part(kmap_canonical(x, z, u, rho)),
                 tangent_part(fd_kmap(canonical, x, z, u))};
  bundle.projection_weighted = {dproj_weighted(weighted, x, z, y).value,
                                fd_projection_derivative(weighted, x, z, y)};
  return bundle;
}

}  // namespace symplopt::oracles
