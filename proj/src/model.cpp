#include "netlogit/model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "netlogit/error.hpp"
#include "netlogit/rng.hpp"
#include "netlogit/stable_math.hpp"

namespace netlogit {

double local_field(const InteractionMatrix& a, const SpinConfiguration& x, std::size_t i) {
  if (a.n() != x.size()) throw Error(ErrorKind::DimensionMismatch, "A and X sizes differ");
  if (i >= x.size()) throw Error(ErrorKind::IndexOutOfRange, "vertex " + std::to_string(i));
  double m = 0.0;
  for (const auto& e : a.row(i)) m += e.value * x[e.col];
  return m;
}

double external_plus_peer_field(const ModelParams& params, const InteractionMatrix& a, const CovariateMatrix& z,
                                const SpinConfiguration& x, std::size_t i) {
  if (z.n() != x.size() || z.d() != params.d()) {
    throw Error(ErrorKind::DimensionMismatch, "covariates do not match spins or theta");
  }
  const double m = local_field(a, x, i);
  return z.values().row(static_cast<Eigen::Index>(i)).dot(params.theta) + params.beta * m;
}

double conditional_prob_plus(const ModelParams& params, const InteractionMatrix& a, const CovariateMatrix& z,
                             const SpinConfiguration& x, std::size_t i) {
  return stable::prob_plus(external_plus_peer_field(params, a, z, x, i));
}

double conditional_prob_minus(const ModelParams& params, const InteractionMatrix& a, const CovariateMatrix& z,
                              const SpinConfiguration& x, std::size_t i) {
  return stable::prob_plus(-external_plus_peer_field(params, a, z, x, i));
}

SpinConfiguration gibbs_sample(const ModelParams& params, const InteractionMatrix& a, const CovariateMatrix& z,
                               const GibbsOptions& options, SpinConfiguration init) {
  const Vector theta_z = detail::checked_theta_z(params, a, z, init);
  detail::run_gibbs(params.beta, a, theta_z, options, init, [](std::size_t, const SpinConfiguration&) {});
  return init;
}

SpinConfiguration gibbs_sample(const ModelParams& params, const InteractionMatrix& a, const CovariateMatrix& z,
                               const GibbsOptions& options) {
  return gibbs_sample(params, a, z, options, SpinConfiguration::all_plus(a.n()));
}

// ---------------------------------------------------------------------------
// Enumeration

std::size_t ExactDistribution::state_index(const SpinConfiguration& x) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0) idx |= std::size_t{1} << i;
  }
  return idx;
}

SpinConfiguration ExactDistribution::state(std::size_t index, std::size_t n) {
  SpinConfiguration x(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if ((index >> i) & 1U) x.set(i, 1);
  }
  return x;
}

ExactDistribution exact_distribution(const ModelParams& params, const InteractionMatrix& a,
                                     const CovariateMatrix& z) {
  const std::size_t n = a.n();
  if (n > kMaxEnumerationSize) {
    throw Error(ErrorKind::TooLarge, "enumeration limited to N <= 20, got " + std::to_string(n));
  }
  if (z.n() != n || z.d() != params.d()) throw Error(ErrorKind::DimensionMismatch, "Z does not match A or theta");
  const Vector theta_z = z.values() * params.theta;

  const std::size_t n_states = std::size_t{1} << n;
  std::vector<double> log_mass(n_states);
  for (std::size_t s = 0; s < n_states; ++s) {
    double quad = 0.0;
    double linear = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = ((s >> i) & 1U) ? 1.0 : -1.0;
      linear += xi * theta_z[static_cast<Eigen::Index>(i)];
      for (const auto& e : a.row(i)) {
        const double xj = ((s >> e.col) & 1U) ? 1.0 : -1.0;
        quad += e.value * xi * xj;
      }
    }
    // Each edge appears twice in the ordered sum; halving it makes the site
    // conditionals exactly 1 / (1 + exp(-2 h)) with h = theta^T Z_i + beta m_i.
    log_mass[s] = 0.5 * params.beta * quad + linear;
  }
  const double top = *std::max_element(log_mass.begin(), log_mass.end());
  ExactDistribution out;
  out.n_ = n;
  out.probs_.resize(n_states);
  double total = 0.0;
  for (std::size_t s = 0; s < n_states; ++s) {
    out.probs_[s] = std::exp(log_mass[s] - top);
    total += out.probs_[s];
  }
  for (auto& p : out.probs_) p /= total;
  return out;
}

double detailed_balance_check(const ModelParams& params, const InteractionMatrix& a, const CovariateMatrix& z,
                              std::size_t n_pairs, std::uint64_t seed) {
  const std::size_t n = a.n();
  if (n > 12) throw Error(ErrorKind::TooLarge, "detailed balance check limited to N <= 12");
  if (n == 0) return 0.0;
  const auto pi = exact_distribution(params, a, z);
  const double pick = 1.0 / static_cast<double>(n);
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t k = 0; k < n_pairs; ++k) {
    const auto s = static_cast<std::size_t>(rng.below(pi.n_states()));
    const auto i = static_cast<std::size_t>(rng.below(n));
    const SpinConfiguration x = ExactDistribution::state(s, n);
    SpinConfiguration y = x;
    y.flip(i);
    // Kernel probability of moving to the flipped spin value at site i.
    auto move_prob = [&](const SpinConfiguration& from) {
      return from[i] > 0 ? conditional_prob_minus(params, a, z, from, i)
                         : conditional_prob_plus(params, a, z, from, i);
    };
    const double forward = pi.probability(s) * pick * move_prob(x);
    const double backward = pi.probability(ExactDistribution::state_index(y)) * pick * move_prob(y);
    worst = std::max(worst, std::abs(forward - backward));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// CSV

void write_spins_csv(std::ostream& out, const SpinConfiguration& x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i > 0) out << ',';
    out << x[i];
  }
  out << '\n';
}

std::vector<SpinConfiguration> read_spins_csv(std::istream& in) {
  std::vector<SpinConfiguration> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::int8_t> spins;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto first = cell.find_first_not_of(" \t\r");
      const auto last = cell.find_last_not_of(" \t\r");
      const std::string tok = first == std::string::npos ? "" : cell.substr(first, last - first + 1);
      if (tok == "1" || tok == "+1") {
        spins.push_back(1);
      } else if (tok == "-1") {
        spins.push_back(-1);
      } else {
        throw Error(ErrorKind::Parse, "spin CSV line " + std::to_string(lineno) + ": bad value '" + tok + "'");
      }
    }
    if (!rows.empty() && spins.size() != rows.front().size()) {
      throw Error(ErrorKind::Parse, "spin CSV line " + std::to_string(lineno) + ": ragged row");
    }
    rows.emplace_back(std::move(spins));
  }
  return rows;
}

}  // namespace netlogit
