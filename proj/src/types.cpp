#include "netlogit/types.hpp"

#include <cmath>
#include <string>

#include "netlogit/error.hpp"

namespace netlogit {

namespace {
void check_spin(int value) {
  if (value != 1 && value != -1) {
    throw Error(ErrorKind::InvalidArgument, "spin must be -1 or +1, got " + std::to_string(value));
  }
}
}  // namespace

SpinConfiguration::SpinConfiguration(std::size_t n, int value) {
  check_spin(value);
  spins_.assign(n, static_cast<std::int8_t>(value));
}

SpinConfiguration::SpinConfiguration(std::vector<std::int8_t> spins) : spins_(std::move(spins)) {
  for (auto s : spins_) check_spin(s);
}

void SpinConfiguration::set(std::size_t i, int value) {
  check_spin(value);
  if (i >= spins_.size()) throw Error(ErrorKind::IndexOutOfRange, "spin index " + std::to_string(i));
  spins_[i] = static_cast<std::int8_t>(value);
}

Vector SpinConfiguration::as_vector() const {
  Vector v(static_cast<Eigen::Index>(spins_.size()));
  for (std::size_t i = 0; i < spins_.size(); ++i) v[static_cast<Eigen::Index>(i)] = spins_[i];
  return v;
}

CovariateMatrix::CovariateMatrix(Matrix values) : values_(std::move(values)) {
  if (!values_.allFinite()) throw Error(ErrorKind::NonFinite, "covariate matrix has non-finite entries");
}

Vector ModelParams::gamma() const {
  Vector g(theta.size() + 1);
  g[0] = beta;
  g.tail(theta.size()) = theta;
  return g;
}

ModelParams ModelParams::from_gamma(const Vector& gamma) {
  if (gamma.size() < 1) throw Error(ErrorKind::DimensionMismatch, "gamma must have length >= 1");
  return ModelParams{gamma[0], gamma.tail(gamma.size() - 1)};
}

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::ZeroMatrix: return "ZeroMatrix";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NoConvergedFit: return "NoConvergedFit";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace netlogit
