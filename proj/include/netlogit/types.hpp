#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace netlogit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Outcome vector X in {-1,+1}^N.
class SpinConfiguration {
 public:
  SpinConfiguration() = default;
  /// All spins set to `value` (must be -1 or +1).
  SpinConfiguration(std::size_t n, int value);
  explicit SpinConfiguration(std::vector<std::int8_t> spins);

  static SpinConfiguration all_plus(std::size_t n) { return {n, +1}; }

  std::size_t size() const noexcept { return spins_.size(); }
  int operator[](std::size_t i) const noexcept { return spins_[i]; }
  void set(std::size_t i, int value);
  void flip(std::size_t i) noexcept { spins_[i] = static_cast<std::int8_t>(-spins_[i]); }

  std::span<const std::int8_t> spins() const noexcept { return spins_; }
  Vector as_vector() const;

  friend bool operator==(const SpinConfiguration&, const SpinConfiguration&) = default;

 private:
  std::vector<std::int8_t> spins_;
};

/// Dense N x d design matrix; row i holds the covariates Z_i of node i.
class CovariateMatrix {
 public:
  CovariateMatrix() = default;
  explicit CovariateMatrix(Matrix values);

  std::size_t n() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t d() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  const Matrix& values() const noexcept { return values_; }

 private:
  Matrix values_;
};

/// gamma = (beta, theta): peer-effect strength plus regression coefficients.
struct ModelParams {
  double beta = 0.0;
  Vector theta;

  std::size_t d() const noexcept { return static_cast<std::size_t>(theta.size()); }

  /// Packed (beta, theta_1, ..., theta_d).
  Vector gamma() const;
  static ModelParams from_gamma(const Vector& gamma);
};

}  // namespace netlogit
