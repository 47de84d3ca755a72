#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "netlogit/pseudo.hpp"
#include "netlogit/types.hpp"

namespace netlogit {

struct SolverConfig {
  double lambda = 0.0;
  /// Backtracking shrink factor.
  double tau = 0.8;
  /// Stop once an accepted step moves gamma by at most this much in l1.
  double delta_tol = 1e-3;
  double t0 = 1.0;
  std::size_t max_iters = 100000;
  bool penalize_beta = false;
  /// When set, beta is frozen at this value and only theta is fitted.
  std::optional<double> fixed_beta;

  BetaTreatment beta_treatment() const noexcept {
    if (fixed_beta) return BetaTreatment::Fixed;
    return penalize_beta ? BetaTreatment::Penalized : BetaTreatment::Free;
  }

  /// Throws InvalidArgument unless 0 < tau < 1, delta_tol > 0, t0 > 0, lambda >= 0.
  void validate() const;
};

struct FitResult {
  ModelParams gamma_hat;
  /// Loop iterations, accepted and rejected.
  std::size_t n_iters = 0;
  std::size_t n_backtracks = 0;
  double final_step = 0.0;
  /// Penalized objective after each accepted step.
  std::vector<double> objective_trace;
  KktResiduals kkt;
  bool converged = false;
};

/// sign(v_j) max(|v_j| - kappa, 0), componentwise.
Vector soft_threshold(const Vector& v, double kappa);
double soft_threshold(double v, double kappa);

/// L(gamma) + lambda ||theta||_1 (+ lambda |beta| when beta is penalized).
double penalized_objective(const PseudoLikelihoodProblem& problem, const Vector& gamma, const SolverConfig& config);

/// prox_t(gamma - t grad L(gamma)); soft-thresholds theta by t*lambda, and beta
/// too when it is penalized. A fixed beta is left at its configured value.
Vector prox_step(const PseudoLikelihoodProblem& problem, const Vector& gamma, double t, const SolverConfig& config);

/// Sufficient-decrease test on the gradient map G_t(gamma) = (gamma - prox)/t:
///   L(gamma - t G) <= L(gamma) - t grad^T G + (t/2) ||G||^2.
bool line_search_ok(const PseudoLikelihoodProblem& problem, const Vector& gamma, double t, const SolverConfig& config);

/// Proximal gradient descent with backtracking, from gamma = 0 (or `init`).
/// The step size only ever shrinks. Hitting max_iters returns converged=false.
FitResult fit(const PseudoLikelihoodProblem& problem, const SolverConfig& config,
              const std::optional<Vector>& init = std::nullopt);

/// argmin_beta L(beta, 0) by safeguarded Newton. Returns nullopt when the
/// one-dimensional problem has no finite minimizer within |beta| <= 1e6.
std::optional<double> beta_only_minimizer(const PseudoLikelihoodProblem& problem);

/// ||grad_theta L(beta0, 0)||_inf at the beta-only minimizer (beta0 = 0 when
/// beta is fixed at 0 or no finite minimizer exists). Any lambda at or above
/// this value yields theta_hat = 0.
double full_shrinkage_lambda(const PseudoLikelihoodProblem& problem, std::optional<double> fixed_beta = std::nullopt);

}  // namespace netlogit
