#pragma once

#include <cstddef>
#include <optional>

#include "netlogit/graphs.hpp"
#include "netlogit/types.hpp"

namespace netlogit {

inline constexpr std::size_t kMaxHessianDim = 5000;

struct GradHess {
  /// Ordered (d/dbeta, d/dtheta_1, ..., d/dtheta_d).
  Vector grad;
  std::optional<Matrix> hess;
};

struct KktResiduals {
  double beta_resid = 0.0;
  double theta_max_resid = 0.0;
};

/// How the beta coordinate enters the penalized problem.
enum class BetaTreatment {
  Free,       ///< unpenalized, optimized (default)
  Penalized,  ///< l1-penalized like theta
  Fixed,      ///< held constant; no stationarity condition
};

/// Negative log-pseudo-likelihood for one observed spin configuration:
///
///   L(beta, theta) = -(1/N) sum_i { X_i h_i - log cosh h_i } + log 2,
///   h_i = theta^T Z_i + beta m_i(X).
///
/// Local fields m_i(X) are computed once at construction; nothing that
/// depends on gamma is cached, so all evaluation methods are const and safe
/// to call concurrently. Parameters are passed packed as gamma = (beta, theta).
class PseudoLikelihoodProblem {
 public:
  PseudoLikelihoodProblem(InteractionMatrix a, CovariateMatrix z, SpinConfiguration x);

  std::size_t n() const noexcept { return x_.size(); }
  std::size_t d() const noexcept { return z_.d(); }
  std::size_t dim() const noexcept { return z_.d() + 1; }

  const InteractionMatrix& interactions() const noexcept { return a_; }
  const CovariateMatrix& covariates() const noexcept { return z_; }
  const SpinConfiguration& spins() const noexcept { return x_; }
  const Vector& local_fields() const noexcept { return m_; }

  /// Recomputes the cached local fields from A and X.
  void refresh();

  double loss(const Vector& gamma) const;
  double loss(const ModelParams& params) const { return loss(params.gamma()); }

  Vector gradient(const Vector& gamma) const;

  /// Loss and gradient from a single pass over the nodes.
  double loss_and_gradient(const Vector& gamma, Vector& grad) const;

  /// Gradient plus (1/N) sum_i sech^2(h_i) U_i U_i^T with U_i = (m_i, Z_i).
  GradHess hessian(const Vector& gamma) const;

  /// Largest eigenvalue of (1/N) sum_i U_i U_i^T; a Lipschitz constant for
  /// the gradient in the l2 norm.
  double lipschitz_bound() const;

  /// Smallest eigenvalue of the same unweighted Gram matrix.
  double g_matrix_min_eig() const;

  /// Subgradient optimality violations of L + lambda ||theta||_1 at gamma.
  KktResiduals kkt_residuals(const Vector& gamma, double lambda,
                             BetaTreatment beta = BetaTreatment::Free) const;

 private:
  Vector fields(const Vector& gamma) const;
  Matrix gram() const;
  void check_gamma(const Vector& gamma) const;

  InteractionMatrix a_;
  CovariateMatrix z_;
  SpinConfiguration x_;
  Vector xv_;
  Vector m_;
};

}  // namespace netlogit
