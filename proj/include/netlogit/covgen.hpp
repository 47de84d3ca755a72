#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <variant>

#include "netlogit/types.hpp"

namespace netlogit {

/// Rows i.i.d. N(0, Sigma) with Sigma_jk = rho^{|j-k|}.
struct GaussianAR {
  double rho = 0.2;
};
struct GaussianIdentity {};
struct CovariatesFromFile {
  std::filesystem::path path;
};

struct CovariateSpec {
  std::size_t d = 0;
  std::variant<GaussianAR, GaussianIdentity, CovariatesFromFile> kind = GaussianAR{};
};

/// Magnitudes uniform on [lo, hi] with a fair random sign.
struct UniformShell {
  double lo = 0.5;
  double hi = 1.0;
};
struct ExplicitTheta {
  Vector values;
};

struct ThetaSpec {
  std::size_t d = 0;
  std::size_t s = 0;
  std::variant<UniformShell, ExplicitTheta> signal = UniformShell{};
};

/// AR(1) recursion per row: Z_1 = xi_1, Z_j = rho Z_{j-1} + sqrt(1 - rho^2) xi_j.
CovariateMatrix gen_covariates(const CovariateSpec& spec, std::size_t n, std::uint64_t seed);

/// Nonzero signal on the first s coordinates, exact zeros elsewhere.
Vector gen_theta(const ThetaSpec& spec, std::uint64_t seed);

CovariateMatrix read_covariates_csv(std::istream& in);
CovariateMatrix read_covariates_csv(const std::filesystem::path& path);
void write_covariates_csv(std::ostream& out, const CovariateMatrix& z);

}  // namespace netlogit
