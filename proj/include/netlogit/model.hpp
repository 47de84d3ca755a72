#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "netlogit/graphs.hpp"
#include "netlogit/types.hpp"

namespace netlogit {

/// m_i(X) = sum_j a_ij X_j over the sparse row of A.
double local_field(const InteractionMatrix& a, const SpinConfiguration& x, std::size_t i);

/// h_i = theta^T Z_i + beta m_i(X).
double external_plus_peer_field(const ModelParams& params, const InteractionMatrix& a,
                                const CovariateMatrix& z, const SpinConfiguration& x, std::size_t i);

/// P(X_i = +1 | X_{-i}, Z).
double conditional_prob_plus(const ModelParams& params, const InteractionMatrix& a, const CovariateMatrix& z,
                             const SpinConfiguration& x, std::size_t i);

/// P(X_i = -1 | X_{-i}, Z); evaluated from -h so the pair sums to one.
double conditional_prob_minus(const ModelParams& params, const InteractionMatrix& a, const CovariateMatrix& z,
                              const SpinConfiguration& x, std::size_t i);

enum class Scan { Random, Systematic };

struct GibbsOptions {
  /// Raw single-site updates, not sweeps.
  std::size_t n_iters = 30000;
  Scan scan = Scan::Random;
  std::uint64_t seed = 0;
};

/// Runs the single-site Gibbs chain from `init` and returns the final state.
SpinConfiguration gibbs_sample(const ModelParams& params, const InteractionMatrix& a, const CovariateMatrix& z,
                               const GibbsOptions& options, SpinConfiguration init);

/// Same as above, starting from all spins +1.
SpinConfiguration gibbs_sample(const ModelParams& params, const InteractionMatrix& a, const CovariateMatrix& z,
                               const GibbsOptions& options);

/// Calls `visit(state)` after every `thin` updates of a single chain. Used by
/// the stationarity tests; the chain itself is identical to gibbs_sample.
template <class Visitor>
void gibbs_trace(const ModelParams& params, const InteractionMatrix& a, const CovariateMatrix& z,
                 const GibbsOptions& options, SpinConfiguration init, std::size_t thin, Visitor&& visit);

inline constexpr std::size_t kMaxEnumerationSize = 20;

/// Joint law over {-1,+1}^N by enumeration, indexed by state_index().
class ExactDistribution {
 public:
  std::size_t n() const noexcept { return n_; }
  std::size_t n_states() const noexcept { return probs_.size(); }
  double probability(std::size_t state) const { return probs_.at(state); }
  const std::vector<double>& probabilities() const noexcept { return probs_; }

  /// Bit i of the index is 1 when X_i = +1.
  static std::size_t state_index(const SpinConfiguration& x);
  static SpinConfiguration state(std::size_t index, std::size_t n);

 private:
  friend ExactDistribution exact_distribution(const ModelParams&, const InteractionMatrix&, const CovariateMatrix&);
  std::size_t n_ = 0;
  std::vector<double> probs_;
};

/// Enumerates exp(beta sum_{i<j} a_ij X_i X_j + sum_i X_i theta^T Z_i) over
/// all 2^N states and normalizes. This is the law whose site conditionals are
/// the ones above and which the Gibbs sampler targets. Throws TooLarge for N > 20.
ExactDistribution exact_distribution(const ModelParams& params, const InteractionMatrix& a, const CovariateMatrix& z);

/// Max over sampled (state, site) pairs of |pi(x) k(x->x') - pi(x') k(x'->x)|
/// for the random-scan kernel, x' being x with the site flipped. N <= 12.
double detailed_balance_check(const ModelParams& params, const InteractionMatrix& a, const CovariateMatrix& z,
                              std::size_t n_pairs, std::uint64_t seed);

/// One configuration per line as comma-separated +-1 integers.
void write_spins_csv(std::ostream& out, const SpinConfiguration& x);
std::vector<SpinConfiguration> read_spins_csv(std::istream& in);

}  // namespace netlogit

#include "netlogit/detail/gibbs_impl.hpp"
