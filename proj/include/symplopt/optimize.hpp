#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "symplopt/newton.hpp"
#include "symplopt/retraction.hpp"

namespace symplopt {

/// Non-monotone line-search parameters (reference-value decay alpha,
/// sufficient-decrease beta, backtracking factor delta, initial/bounding
/// step sizes).
struct LineSearchParams {
  double alpha = 0.85;
  double beta = 1e-4;
  double delta = 0.5;
  double gamma0 = 1e-3;
  double gamma_min = 1e-15;
  double gamma_max = 1e+5;
};

struct NewtonParams {
  double eta = 1e-3;
  double mu = 0.5;
  int max_inner = -1;      // -1: n*k cap
  double damping_delta = 0.2;
};

struct OptimizerConfig {
  Metric metric = Metric::euclidean();
  RetractionKind retraction = RetractionKind::kSr;
  double tol = 1e-8;
  double theta = 1e-3;  // hybrid switching threshold; requires tol < theta
  int mxit = 1000;
  bool relative_stop = true;  // ||grad|| <= tol * ||grad(X0)|| vs absolute
  LineSearchParams line_search;
  NewtonParams newton;
};

enum class RunStatus {
  kConverged,
  kMaxIterations,
  kStagnated,
  kSwitchFailed,  // hybrid phase 1 exhausted its budget above theta
  kError
};
const char* run_status_name(RunStatus status);

enum class NewtonVariant { kExact, kInexact };

struct IterationRecord {
  int phase = 1;  // 1 = gradient descent, 2 = Newton
  int j = 0;
  double f = 0;
  double grad_norm = 0;
  double grad_norm_rel = 0;  // starts at 1 by definition of the relative stop
  double step = 0;
  double feasibility = 0;
  int inner_iterations = 0;
  std::int64_t wall_ns = 0;
};

struct RunReport {
  std::vector<IterationRecord> history;
  RunStatus status = RunStatus::kError;
  Matrix x_star;
  double f_star = 0;
  double grad_norm = 0;
  double grad_norm_rel = 0;
  double feasibility = 0;
  int phase1_iterations = 0;
  int phase2_iterations = 0;
  double phase1_seconds = 0;
  double phase2_seconds = 0;
  int resymplecticized = 0;
  int gradient_fallbacks = 0;   // Newton directions replaced by -grad
  int direct_solve_fallbacks = 0;  // direct solves that fell back to Krylov
  int armijo_violations = 0;    // accepted steps violating the Armijo bound
  int monotone_violations = 0;  // damped Newton steps that increased f
  std::string message;
};

/// Gradient descent with the non-monotone (decaying reference value) Armijo
/// search and an alternating two-formula quotient step guess from the
/// previous move, clipped to [gamma_min, gamma_max]. Stops when
/// ||grad f(X_j)|| <= tol ||grad f(X_0)|| (or absolute tol) or at mxit.
RunReport rgd(const OptimizerConfig& config, const CostFunction& f,
              const SymplecticPoint& x0);

/// Newton iteration with damping: the direct saddle-point direction (exact)
/// or the Krylov direction (inexact), unit step first, then monotone
/// backtracking with factor damping_delta. Non-descent directions fall back
/// to the negative gradient; failed direct solves fall back to Krylov.
RunReport newton(const OptimizerConfig& config, const CostFunction& f,
                 const SymplecticPoint& x0, NewtonVariant variant);

/// Two-phase method: gradient descent until the relative gradient norm
/// drops below theta, then the Newton phase down to tol. If phase 1
/// exhausts mxit above theta the run reports kSwitchFailed (callers decide
/// whether to enlarge theta or the budget; there is no auto-retry).
RunReport hybrid(const OptimizerConfig& config, const CostFunction& f,
                 const SymplecticPoint& x0, NewtonVariant second_phase);

}  // namespace symplopt
