#include "netlogit/covgen.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "netlogit/error.hpp"
#include "netlogit/format.hpp"
#include "netlogit/rng.hpp"

namespace netlogit {

CovariateMatrix gen_covariates(const CovariateSpec& spec, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "need at least one row");
  if (const auto* file = std::get_if<CovariatesFromFile>(&spec.kind)) {
    auto z = read_covariates_csv(file->path);
    if (z.n() != n || z.d() != spec.d) {
      throw Error(ErrorKind::DimensionMismatch, "covariate file is " + std::to_string(z.n()) + "x" +
                                                    std::to_string(z.d()) + ", expected " + std::to_string(n) +
                                                    "x" + std::to_string(spec.d));
    }
    return z;
  }
  double rho = 0.0;
  if (const auto* ar = std::get_if<GaussianAR>(&spec.kind)) {
    rho = ar->rho;
    if (!(std::abs(rho) < 1.0)) throw Error(ErrorKind::InvalidArgument, "AR coefficient must satisfy |rho| < 1");
  }
  const double innovation = std::sqrt(1.0 - rho * rho);
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(spec.d);
  Matrix z(rows, cols);
  Rng rng(seed);
  for (Eigen::Index i = 0; i < rows; ++i) {
    double prev = 0.0;
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double xi = rng.normal();
      prev = j == 0 ? xi : rho * prev + innovation * xi;
      z(i, j) = prev;
    }
  }
  return CovariateMatrix(std::move(z));
}

Vector gen_theta(const ThetaSpec& spec, std::uint64_t seed) {
  if (spec.s > spec.d) throw Error(ErrorKind::InvalidArgument, "sparsity s exceeds dimension d");
  Vector theta = Vector::Zero(static_cast<Eigen::Index>(spec.d));
  if (const auto* shell = std::get_if<UniformShell>(&spec.signal)) {
    if (!(shell->lo > 0.0 && shell->lo <= shell->hi)) {
      throw Error(ErrorKind::InvalidArgument, "signal shell needs 0 < lo <= hi");
    }
    Rng rng(seed);
    for (std::size_t j = 0; j < spec.s; ++j) {
      const int sign = rng.sign();
      theta[static_cast<Eigen::Index>(j)] = sign * rng.uniform(shell->lo, shell->hi);
    }
  } else {
    const auto& values = std::get<ExplicitTheta>(spec.signal).values;
    if (static_cast<std::size_t>(values.size()) != spec.s) {
      throw Error(ErrorKind::DimensionMismatch, "explicit signal must have length s");
    }
    theta.head(values.size()) = values;
  }
  return theta;
}

CovariateMatrix read_covariates_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw Error(ErrorKind::Parse, "covariate CSV line " + std::to_string(lineno) + ": bad value '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::Parse, "covariate CSV line " + std::to_string(lineno) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto d = rows.empty() ? Eigen::Index{0} : static_cast<Eigen::Index>(rows.front().size());
  Matrix z(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) z(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return CovariateMatrix(std::move(z));
}

CovariateMatrix read_covariates_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_covariates_csv(in);
}

void write_covariates_csv(std::ostream& out, const CovariateMatrix& z) {
  const Matrix& v = z.values();
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(v(i, j));
    }
    out << '\n';
  }
}

}  // namespace netlogit
