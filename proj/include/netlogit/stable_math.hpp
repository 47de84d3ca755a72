#pragma once

#include <cmath>

namespace netlogit::stable {

/// log cosh(h) without overflow: |h| + log1p(exp(-2|h|)) - log 2.
inline double logcosh(double h) noexcept {
  const double a = std::abs(h);
  return a + std::log1p(std::exp(-2.0 * a)) - M_LN2;
}

/// sech^2(h) = (2 e^{-|h|} / (1 + e^{-2|h|}))^2.
inline double sech2(double h) noexcept {
  const double e = std::exp(-std::abs(h));
  const double s = 2.0 * e / (1.0 + e * e);
  return s * s;
}

/// P(spin = +1) for local field h, i.e. e^h / (e^h + e^{-h}).
inline double prob_plus(double h) noexcept {
  if (h >= 0.0) return 1.0 / (1.0 + std::exp(-2.0 * h));
  const double e = std::exp(2.0 * h);
  return e / (1.0 + e);
}

}  // namespace netlogit::stable
