#include "netlogit/pseudo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netlogit/error.hpp"
#include "netlogit/stable_math.hpp"

namespace netlogit {

namespace {

// X - tanh(h) without cancellation when X and h share a sign.
double residual(double x, double h) {
  if (x * h > 0.0) {
    const double e = std::exp(-2.0 * std::abs(h));
    return x * 2.0 * e / (1.0 + e);
  }
  return x - std::tanh(h);
}

// -log P(X_i | rest) = -X h + log cosh h + log 2.
double neg_log_conditional(double x, double h) {
  return -x * h + std::abs(h) + std::log1p(std::exp(-2.0 * std::abs(h)));
}

}  // namespace

PseudoLikelihoodProblem::PseudoLikelihoodProblem(InteractionMatrix a, CovariateMatrix z, SpinConfiguration x)
    : a_(std::move(a)), z_(std::move(z)), x_(std::move(x)) {
  if (a_.n() != x_.size() || z_.n() != x_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "A is " + std::to_string(a_.n()) + ", Z has " +
                                                  std::to_string(z_.n()) + " rows, X has " +
                                                  std::to_string(x_.size()) + " spins");
  }
  if (x_.size() == 0) throw Error(ErrorKind::InvalidArgument, "empty problem");
  refresh();
}

void PseudoLikelihoodProblem::refresh() {
  xv_ = x_.as_vector();
  m_ = a_.multiply(xv_);
}

void PseudoLikelihoodProblem::check_gamma(const Vector& gamma) const {
  if (static_cast<std::size_t>(gamma.size()) != dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "gamma has length " + std::to_string(gamma.size()) + ", expected " + std::to_string(dim()));
  }
  if (!gamma.allFinite()) throw Error(ErrorKind::NonFinite, "gamma has non-finite entries");
}

Vector PseudoLikelihoodProblem::fields(const Vector& gamma) const {
  check_gamma(gamma);
  Vector h = z_.values() * gamma.tail(gamma.size() - 1);
  h += gamma[0] * m_;
  return h;
}

double PseudoLikelihoodProblem::loss(const Vector& gamma) const {
  const Vector h = fields(gamma);
  double total = 0.0;
  for (Eigen::Index i = 0; i < h.size(); ++i) total += neg_log_conditional(xv_[i], h[i]);
  return total / static_cast<double>(n());
}

double PseudoLikelihoodProblem::loss_and_gradient(const Vector& gamma, Vector& grad) const {
  const Vector h = fields(gamma);
  const double inv_n = 1.0 / static_cast<double>(n());
  Vector r(h.size());
  double total = 0.0;
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    total += neg_log_conditional(xv_[i], h[i]);
    r[i] = residual(xv_[i], h[i]);
  }
  grad.resize(static_cast<Eigen::Index>(dim()));
  grad[0] = -m_.dot(r) * inv_n;
  grad.tail(grad.size() - 1).noalias() = -(z_.values().transpose() * r) * inv_n;
  return total * inv_n;
}

Vector PseudoLikelihoodProblem::gradient(const Vector& gamma) const {
  Vector g;
  loss_and_gradient(gamma, g);
  return g;
}

GradHess PseudoLikelihoodProblem::hessian(const Vector& gamma) const {
  if (dim() > kMaxHessianDim + 1) throw Error(ErrorKind::TooLarge, "Hessian limited to d <= 5000");
  GradHess out;
  out.grad = gradient(gamma);
  const Vector h = fields(gamma);
  const auto rows = static_cast<Eigen::Index>(n());
  const auto cols = static_cast<Eigen::Index>(dim());
  Matrix weighted(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double s = std::sqrt(stable::sech2(h[i]));
    weighted(i, 0) = s * m_[i];
    weighted.row(i).tail(cols - 1) = s * z_.values().row(i);
  }
  Matrix hess = Matrix::Zero(cols, cols);
  hess.selfadjointView<Eigen::Lower>().rankUpdate(weighted.transpose(), 1.0 / static_cast<double>(rows));
  out.hess = hess.selfadjointView<Eigen::Lower>();
  return out;
}

Matrix PseudoLikelihoodProblem::gram() const {
  if (dim() > kMaxHessianDim + 1) throw Error(ErrorKind::TooLarge, "Gram matrix limited to d <= 5000");
  const auto rows = static_cast<Eigen::Index>(n());
  const auto cols = static_cast<Eigen::Index>(dim());
  Matrix u(rows, cols);
  u.col(0) = m_;
  u.rightCols(cols - 1) = z_.values();
  return (u.transpose() * u) / static_cast<double>(rows);
}

double PseudoLikelihoodProblem::lipschitz_bound() const {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram(), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

double PseudoLikelihoodProblem::g_matrix_min_eig() const {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram(), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

KktResiduals PseudoLikelihoodProblem::kkt_residuals(const Vector& gamma, double lambda, BetaTreatment beta) const {
  const Vector g = gradient(gamma);
  auto violation = [lambda](double coef, double grad) {
    if (coef != 0.0) return std::abs(grad + lambda * (coef > 0.0 ? 1.0 : -1.0));
    return std::max(0.0, std::abs(grad) - lambda);
  };
  KktResiduals out;
  switch (beta) {
    case BetaTreatment::Free: out.beta_resid = std::abs(g[0]); break;
    case BetaTreatment::Penalized: out.beta_resid = violation(gamma[0], g[0]); break;
    case BetaTreatment::Fixed: out.beta_resid = 0.0; break;
  }
  for (Eigen::Index j = 1; j < g.size(); ++j) out.theta_max_resid = std::max(out.theta_max_resid, violation(gamma[j], g[j]));
  return out;
}

}  // namespace netlogit
