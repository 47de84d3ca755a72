#pragma once

#include <string>

#include "netlogit/error.hpp"
#include "netlogit/rng.hpp"
#include "netlogit/stable_math.hpp"

namespace netlogit {

namespace detail {

// Shared chain driver. `theta_z` holds the precomputed theta^T Z_i.
template <class AfterUpdate>
void run_gibbs(double beta, const InteractionMatrix& a, const Vector& theta_z, const GibbsOptions& options,
               SpinConfiguration& x, AfterUpdate&& after_update) {
  const std::size_t n = x.size();
  if (n == 0) return;
  Rng rng(options.seed);
  for (std::size_t s = 0; s < options.n_iters; ++s) {
    const std::size_t i = options.scan == Scan::Random ? static_cast<std::size_t>(rng.below(n)) : s % n;
    double m = 0.0;
    for (const auto& e : a.row(i)) m += e.value * x[e.col];
    const double p = stable::prob_plus(theta_z[static_cast<Eigen::Index>(i)] + beta * m);
    const int spin = rng.uniform() < p ? 1 : -1;
    if (x[i] != spin) x.flip(i);
    after_update(s + 1, x);
  }
}

inline Vector checked_theta_z(const ModelParams& params, const InteractionMatrix& a, const CovariateMatrix& z,
                              const SpinConfiguration& x) {
  if (a.n() != x.size() || z.n() != x.size() || z.d() != params.d()) {
    throw Error(ErrorKind::DimensionMismatch,
                "N=" + std::to_string(x.size()) + " A=" + std::to_string(a.n()) + " Z=" + std::to_string(z.n()) +
                    "x" + std::to_string(z.d()) + " theta=" + std::to_string(params.d()));
  }
  return z.values() * params.theta;
}

}  // namespace detail

template <class Visitor>
void gibbs_trace(const ModelParams& params, const InteractionMatrix& a, const CovariateMatrix& z,
                 const GibbsOptions& options, SpinConfiguration init, std::size_t thin, Visitor&& visit) {
  if (thin == 0) throw Error(ErrorKind::InvalidArgument, "thin must be >= 1");
  const Vector theta_z = detail::checked_theta_z(params, a, z, init);
  detail::run_gibbs(params.beta, a, theta_z, options, init, [&](std::size_t step, const SpinConfiguration& x) {
    if (step % thin == 0) visit(x);
  });
}

}  // namespace netlogit
