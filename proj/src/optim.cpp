#include "netlogit/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netlogit/error.hpp"

namespace netlogit {

void SolverConfig::validate() const {
  if (!(tau > 0.0 && tau < 1.0)) throw Error(ErrorKind::InvalidArgument, "tau must lie in (0,1)");
  if (!(delta_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "delta_tol must be positive");
  if (!(t0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "t0 must be positive");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw Error(ErrorKind::InvalidArgument, "lambda must be >= 0");
  if (fixed_beta && !std::isfinite(*fixed_beta)) throw Error(ErrorKind::InvalidArgument, "fixed beta must be finite");
}

double soft_threshold(double v, double kappa) {
  if (v > kappa) return v - kappa;
  if (v < -kappa) return v + kappa;
  return 0.0;
}

Vector soft_threshold(const Vector& v, double kappa) {
  if (!(kappa >= 0.0)) throw Error(ErrorKind::InvalidArgument, "threshold must be nonnegative");
  return v.unaryExpr([kappa](double x) { return soft_threshold(x, kappa); });
}

double penalized_objective(const PseudoLikelihoodProblem& problem, const Vector& gamma, const SolverConfig& config) {
  double penalty = gamma.tail(gamma.size() - 1).lpNorm<1>();
  if (config.beta_treatment() == BetaTreatment::Penalized) penalty += std::abs(gamma[0]);
  return problem.loss(gamma) + config.lambda * penalty;
}

namespace {

Vector prox_from_gradient(const Vector& gamma, const Vector& grad, double t, const SolverConfig& config) {
  if (!grad.allFinite()) throw Error(ErrorKind::NonFinite, "gradient has non-finite entries");
  const double kappa = t * config.lambda;
  Vector out = gamma - t * grad;
  for (Eigen::Index j = 1; j < out.size(); ++j) out[j] = soft_threshold(out[j], kappa);
  switch (config.beta_treatment()) {
    case BetaTreatment::Free: break;
    case BetaTreatment::Penalized: out[0] = soft_threshold(out[0], kappa); break;
    case BetaTreatment::Fixed: out[0] = *config.fixed_beta; break;
  }
  return out;
}

// Rounding in L near a stationary point can make the exact inequality fail
// for steps that are numerically zero; allow a few ulps of slack.
bool sufficient_decrease(double loss_at, double loss_next, const Vector& grad, const Vector& g_map, double t) {
  const double bound = loss_at - t * grad.dot(g_map) + 0.5 * t * g_map.squaredNorm();
  const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(loss_at));
  return loss_next <= bound + slack;
}

}  // namespace

Vector prox_step(const PseudoLikelihoodProblem& problem, const Vector& gamma, double t, const SolverConfig& config) {
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "step size must be positive");
  return prox_from_gradient(gamma, problem.gradient(gamma), t, config);
}

bool line_search_ok(const PseudoLikelihoodProblem& problem, const Vector& gamma, double t, const SolverConfig& config) {
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "step size must be positive");
  Vector grad;
  const double loss_at = problem.loss_and_gradient(gamma, grad);
  const Vector next = prox_from_gradient(gamma, grad, t, config);
  const Vector g_map = (gamma - next) / t;
  const double loss_next = problem.loss(gamma - t * g_map);
  if (!std::isfinite(loss_next)) throw Error(ErrorKind::NonFinite, "loss at trial point is not finite");
  return sufficient_decrease(loss_at, loss_next, grad, g_map, t);
}

FitResult fit(const PseudoLikelihoodProblem& problem, const SolverConfig& config, const std::optional<Vector>& init) {
  config.validate();
  Vector gamma = Vector::Zero(static_cast<Eigen::Index>(problem.dim()));
  if (init) {
    if (init->size() != gamma.size()) throw Error(ErrorKind::DimensionMismatch, "warm start has wrong length");
    gamma = *init;
  }
  if (config.fixed_beta) gamma[0] = *config.fixed_beta;

  FitResult result;
  double t = config.t0;
  Vector grad;
  double loss_at = problem.loss_and_gradient(gamma, grad);

  while (result.n_iters < config.max_iters) {
    ++result.n_iters;
    const Vector next = prox_from_gradient(gamma, grad, t, config);
    const Vector g_map = (gamma - next) / t;
    const double loss_next = problem.loss(next);
    if (!std::isfinite(loss_next)) throw Error(ErrorKind::NonFinite, "loss at trial point is not finite");

    if (!sufficient_decrease(loss_at, loss_next, grad, g_map, t)) {
      t *= config.tau;
      ++result.n_backtracks;
      continue;
    }

    const double moved = (next - gamma).lpNorm<1>();
    gamma = next;
    loss_at = problem.loss_and_gradient(gamma, grad);
    result.objective_trace.push_back(penalized_objective(problem, gamma, config));
    if (moved <= config.delta_tol) {
      result.converged = true;
      break;
    }
  }

  result.gamma_hat = ModelParams::from_gamma(gamma);
  result.final_step = t;
  result.kkt = problem.kkt_residuals(gamma, config.lambda, config.beta_treatment());
  return result;
}

std::optional<double> beta_only_minimizer(const PseudoLikelihoodProblem& problem) {
  Vector gamma = Vector::Zero(static_cast<Eigen::Index>(problem.dim()));
  auto slope = [&](double beta) {
    gamma[0] = beta;
    return problem.gradient(gamma)[0];
  };
  const double s0 = slope(0.0);
  if (s0 == 0.0) return 0.0;
  // L(beta, 0) is convex in beta, so the derivative is nondecreasing.
  const double dir = s0 < 0.0 ? 1.0 : -1.0;
  double inner = 0.0;
  double outer = dir;
  while (slope(outer) * dir < 0.0) {
    inner = outer;
    outer *= 2.0;
    if (std::abs(outer) > 1e6) return std::nullopt;
  }
  double lo = std::min(inner, outer);
  double hi = std::max(inner, outer);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double full_shrinkage_lambda(const PseudoLikelihoodProblem& problem, std::optional<double> fixed_beta) {
  const double beta0 = fixed_beta ? *fixed_beta : beta_only_minimizer(problem).value_or(0.0);
  Vector gamma = Vector::Zero(static_cast<Eigen::Index>(problem.dim()));
  gamma[0] = beta0;
  const Vector g = problem.gradient(gamma);
  return g.size() > 1 ? g.tail(g.size() - 1).lpNorm<Eigen::Infinity>() : 0.0;
}

}  // namespace netlogit
