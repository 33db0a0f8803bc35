#include "symplopt/optimize.hpp"

#include <chrono>
#include <cmath>

namespace symplopt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::int64_t ns_since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
}

void validate(const OptimizerConfig& config) {
  const LineSearchParams& ls = config.line_search;
  if (!(config.tol > 0) || !(config.mxit > 0)) throw ConfigError("tol and mxit must be positive");
  if (!(ls.beta > 0 && ls.beta < 1)) throw ConfigError("beta must lie in (0,1)");
  if (!(ls.delta > 0 && ls.delta < 1)) throw ConfigError("delta must lie in (0,1)");
  if (!(ls.alpha >= 0 && ls.alpha <= 1)) throw ConfigError("alpha must lie in [0,1]");
  if (!(ls.gamma_min <= ls.gamma0 && ls.gamma0 <= ls.gamma_max))
    throw ConfigError("need gamma_min <= gamma0 <= gamma_max");
}

struct PhaseOutcome {
  SymplecticPoint x;
  RunStatus status;
  int iterations = 0;
  double seconds = 0;
};

// Gradient-descent phase down to stop_norm (an absolute threshold on the
// metric gradient norm). Appends to report.history with the given phase tag.
PhaseOutcome rgd_phase(const OptimizerConfig& config, const CostFunction& f,
                       SymplecticPoint x, double stop_norm, double ref_norm,
                       int phase, int j_offset, RunReport& report) {
  const LineSearchParams& ls = config.line_search;
  const Metric& metric = config.metric;
  const auto phase_start = Clock::now();

  double fx = f.value(x.matrix());
  Matrix grad = metric.riemannian_gradient_matrix(x, f.gradient(x.matrix()));
  double grad_norm = metric.norm(x, grad);
  if (report.history.empty())
    report.history.push_back({phase, 0, fx, grad_norm, grad_norm / ref_norm, 0.0,
                              x.feasibility(), 0, 0});

  double reference = fx;   // non-monotone reference value c_j
  double weight = 1.0;     // its accumulated weight q_j
  double gamma = ls.gamma0;
  Matrix prev_x, prev_grad;
  bool have_prev = false;
  RetractionStats retraction_stats;

  int j = 0;
  RunStatus status = RunStatus::kMaxIterations;
  while (j < config.mxit) {
    if (grad_norm <= stop_norm) {
      status = RunStatus::kConverged;
      break;
    }
    const auto iter_start = Clock::now();
    ++j;

    double trial = gamma;
    if (have_prev) {
      // Alternating quotient guess from the last move, with the metric
      // weight applied at the current point.
      Matrix s = x.matrix() - prev_x;
      Matrix v = grad - prev_grad;
      Matrix ms = metric.m_apply(x, s);
      const double ss = (s.array() * ms.array()).sum();
      const double sv = (v.array() * ms.array()).sum();
      const double vv = (v.array() * metric.m_apply(x, v).array()).sum();
      double guess = (j % 2 == 0) ? (std::abs(sv) > 0 ? ss / std::abs(sv) : ls.gamma0)
                                  : (vv > 0 ? std::abs(sv) / vv : ls.gamma0);
      if (!std::isfinite(guess) || guess <= 0) guess = ls.gamma0;
      trial = std::clamp(guess, ls.gamma_min, ls.gamma_max);
    }

    const double slope = -grad_norm * grad_norm;  // g(grad, -grad)
    bool accepted = false;
    SymplecticPoint next = x;
    double f_next = fx;
    while (trial >= ls.gamma_min) {
      try {
        next = retract(config.retraction, x, (-trial) * grad, &retraction_stats);
        f_next = f.value(next.matrix());
        if (std::isfinite(f_next) && f_next <= reference + ls.beta * trial * slope) {
          accepted = true;
          break;
        }
      } catch (const RetractionDomainError&) {
        // shrink and retry
      }
      trial *= ls.delta;
    }
    if (!accepted) {
      status = RunStatus::kStagnated;
      --j;
      break;
    }
    if (f_next > reference + ls.beta * trial * slope + 1e-12 * (1.0 + std::abs(reference)))
      ++report.armijo_violations;

    prev_x = x.matrix();
    prev_grad = grad;
    have_prev = true;

    x = next;
    fx = f_next;
    grad = metric.riemannian_gradient_matrix(x, f.gradient(x.matrix()));
    grad_norm = metric.norm(x, grad);
    gamma = trial;

    const double new_weight = ls.alpha * weight + 1.0;
    reference = (ls.alpha * weight * reference + fx) / new_weight;
    weight = new_weight;

    report.history.push_back({phase, j_offset + j, fx, grad_norm, grad_norm / ref_norm,
                              trial, x.feasibility(), 0, ns_since(iter_start)});
  }
  if (status == RunStatus::kMaxIterations && grad_norm <= stop_norm)
    status = RunStatus::kConverged;

  report.resymplecticized += retraction_stats.resymplecticized;
  return {std::move(x), status, j, seconds_since(phase_start)};
}

PhaseOutcome newton_phase(const OptimizerConfig& config, const CostFunction& f,
                          SymplecticPoint x, double stop_norm, double ref_norm,
                          NewtonVariant variant, int j_offset, RunReport& report) {
  const Metric& metric = config.metric;
  const auto phase_start = Clock::now();
  RetractionStats retraction_stats;

  double fx = f.value(x.matrix());
  if (report.history.empty()) {
    Matrix grad0 = metric.riemannian_gradient_matrix(x, f.gradient(x.matrix()));
    const double gn0 = metric.norm(x, grad0);
    report.history.push_back({2, 0, fx, gn0, gn0 / ref_norm, 0.0, x.feasibility(), 0, 0});
  }

  int j = 0;
  RunStatus status = RunStatus::kMaxIterations;
  while (j < config.mxit) {
    HessianOperator hess(metric, x, f);
    const double grad_norm = hess.gradient_norm();
    if (grad_norm <= stop_norm) {
      status = RunStatus::kConverged;
      break;
    }
    const auto iter_start = Clock::now();
    ++j;

    KrylovOptions krylov{config.newton.eta, config.newton.mu, config.newton.max_inner};
    Matrix direction;
    int inner = 0;
    if (variant == NewtonVariant::kExact &&
        metric.kind() == Metric::Kind::kCanonicalLike) {
      // No direct saddle-point path for this metric; a tightly forced
      // Krylov solve stands in for the exact direction.
      KrylovOptions tight{1e-12, config.newton.mu, config.newton.max_inner};
      auto [z, solve_report] = solve_newton_krylov(hess, tight);
      direction = z.matrix();
      inner = solve_report.iterations;
    } else if (variant == NewtonVariant::kExact) {
      try {
        NewtonSolveReport solve_report;
        direction = solve_newton_direct(metric, x, f, &solve_report).matrix();
      } catch (const DirectSolveError&) {
        ++report.direct_solve_fallbacks;
        auto [z, solve_report] = solve_newton_krylov(hess, krylov);
        direction = z.matrix();
        inner = solve_report.iterations;
      }
    } else {
      auto [z, solve_report] = solve_newton_krylov(hess, krylov);
      direction = z.matrix();
      inner = solve_report.iterations;
    }

    const Matrix& grad = hess.gradient();
    double slope = metric.inner(x, grad, direction);
    const double dir_norm = metric.norm(x, direction);
    if (!(slope <= -1e-12 * dir_norm * grad_norm) || !direction.allFinite()) {
      direction = -grad;
      slope = -grad_norm * grad_norm;
      ++report.gradient_fallbacks;
    }

    // Unit step first, then monotone backtracking.
    const double beta = config.line_search.beta;
    const double shrink = config.newton.damping_delta;
    double t = 1.0;
    bool accepted = false;
    SymplecticPoint next = x;
    double f_next = fx;
    bool retried_with_gradient = false;
    while (true) {
      while (t >= config.line_search.gamma_min) {
        try {
          next = retract(config.retraction, x, t * direction, &retraction_stats);
          f_next = f.value(next.matrix());
          if (std::isfinite(f_next) && f_next <= fx + beta * t * slope) {
            accepted = true;
            break;
          }
        } catch (const RetractionDomainError&) {
        }
        t *= shrink;
      }
      if (accepted || retried_with_gradient) break;
      // One retry along the negative gradient before giving up.
      direction = -grad;
      slope = -grad_norm * grad_norm;
      t = 1.0;
      retried_with_gradient = true;
      ++report.gradient_fallbacks;
    }
    if (!accepted) {
      status = RunStatus::kStagnated;
      --j;
      break;
    }
    if (f_next > fx + 1e-12 * (1.0 + std::abs(fx))) ++report.monotone_violations;

    x = next;
    fx = f_next;
    Matrix grad_new = metric.riemannian_gradient_matrix(x, f.gradient(x.matrix()));
    const double gn = metric.norm(x, grad_new);
    report.history.push_back({2, j_offset + j, fx, gn, gn / ref_norm, t,
                              x.feasibility(), inner, ns_since(iter_start)});
    if (gn <= stop_norm) {
      status = RunStatus::kConverged;
      break;
    }
  }
  if (status == RunStatus::kMaxIterations) {
    Matrix grad_final = metric.riemannian_gradient_matrix(x, f.gradient(x.matrix()));
    if (metric.norm(x, grad_final) <= stop_norm) status = RunStatus::kConverged;
  }

  report.resymplecticized += retraction_stats.resymplecticized;
  return {std::move(x), status, j, seconds_since(phase_start)};
}

void finalize(const OptimizerConfig& config, const CostFunction& f, RunReport& report,
              const SymplecticPoint& x, double ref_norm) {
  report.x_star = x.matrix();
  report.f_star = f.value(x.matrix());
  Matrix grad = config.metric.riemannian_gradient_matrix(x, f.gradient(x.matrix()));
  report.grad_norm = config.metric.norm(x, grad);
  report.grad_norm_rel = report.grad_norm / ref_norm;
  report.feasibility = x.feasibility();
}

double reference_norm(const OptimizerConfig& config, const CostFunction& f,
                      const SymplecticPoint& x0) {
  Matrix grad = config.metric.riemannian_gradient_matrix(x0, f.gradient(x0.matrix()));
  double norm = config.metric.norm(x0, grad);
  return norm > 0 ? norm : 1.0;
}

}  // namespace

const char* run_status_name(RunStatus status) {
  switch (status) {
    case RunStatus::kConverged: return "converged";
    case RunStatus::kMaxIterations: return "max_iterations";
    case RunStatus::kStagnated: return "stagnated";
    case RunStatus::kSwitchFailed: return "switch_failed";
    case RunStatus::kError: return "error";
  }
  return "unknown";
}

RunReport rgd(const OptimizerConfig& config, const CostFunction& f,
              const SymplecticPoint& x0) {
  validate(config);
  RunReport report;
  const double ref = config.relative_stop ? reference_norm(config, f, x0) : 1.0;
  PhaseOutcome outcome = rgd_phase(config, f, x0, config.tol * ref, ref, 1, 0, report);
  report.status = outcome.status;
  report.phase1_iterations = outcome.iterations;
  report.phase1_seconds = outcome.seconds;
  finalize(config, f, report, outcome.x, ref);
  return report;
}

RunReport newton(const OptimizerConfig& config, const CostFunction& f,
                 const SymplecticPoint& x0, NewtonVariant variant) {
  validate(config);
  RunReport report;
  const double ref = config.relative_stop ? reference_norm(config, f, x0) : 1.0;
  PhaseOutcome outcome =
      newton_phase(config, f, x0, config.tol * ref, ref, variant, 0, report);
  report.status = outcome.status;
  report.phase2_iterations = outcome.iterations;
  report.phase2_seconds = outcome.seconds;
  finalize(config, f, report, outcome.x, ref);
  return report;
}

RunReport hybrid(const OptimizerConfig& config, const CostFunction& f,
                 const SymplecticPoint& x0, NewtonVariant second_phase) {
  validate(config);
  if (!(config.tol < config.theta))
    throw ConfigError("hybrid: requires tol < theta");
  RunReport report;
  const double ref = reference_norm(config, f, x0);

  PhaseOutcome phase1 =
      rgd_phase(config, f, x0, config.theta * ref, ref, 1, 0, report);
  report.phase1_iterations = phase1.iterations;
  report.phase1_seconds = phase1.seconds;
  if (phase1.status != RunStatus::kConverged) {
    report.status =
        phase1.status == RunStatus::kMaxIterations ? RunStatus::kSwitchFailed : phase1.status;
    report.message = "phase 1 did not reach the switching threshold";
    finalize(config, f, report, phase1.x, ref);
    return report;
  }

  PhaseOutcome phase2 = newton_phase(config, f, phase1.x, config.tol * ref, ref,
                                     second_phase, phase1.iterations, report);
  report.status = phase2.status;
  report.phase2_iterations = phase2.iterations;
  report.phase2_seconds = phase2.seconds;
  finalize(config, f, report, phase2.x, ref);
  return report;
}

}  // namespace symplopt
