#pragma once

#include "symplopt/dense.hpp"

namespace symplopt {

/// A smooth objective given through its ambient ingredients: the value,
/// the ambient gradient and the ambient Hessian action. When the ambient
/// Hessian is a fixed matrix M (so that the action is Z -> M Z), the cost
/// exposes it; that matrix doubles as the preconditioning metric weight.
class CostFunction {
 public:
  virtual ~CostFunction() = default;

  virtual double value(const Matrix& x) const = 0;
  virtual Matrix gradient(const Matrix& x) const = 0;
  virtual Matrix hessian_apply(const Matrix& x, const Matrix& z) const = 0;

  /// Constant ambient Hessian matrix, or nullptr when the Hessian varies.
  virtual const Matrix* constant_hessian() const { return nullptr; }
};

}  // namespace symplopt
