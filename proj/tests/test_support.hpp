#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "netlogit/error.hpp"
#include "netlogit/graphs.hpp"
#include "netlogit/pseudo.hpp"
#include "netlogit/rng.hpp"
#include "netlogit/types.hpp"

namespace netlogit::testing {

inline Graph triangle() { return Graph(3, {{0, 1}, {0, 2}, {1, 2}}); }

inline Graph star(std::size_t leaves) {
  std::vector<Edge> edges;
  for (std::size_t v = 1; v <= leaves; ++v) edges.push_back({0, static_cast<Vertex>(v)});
  return Graph(leaves + 1, std::move(edges));
}

/// G(n, p) conditioned on having at least one edge.
inline Graph nonempty_er(std::size_t n, double p, std::uint64_t seed) {
  for (std::uint64_t k = 0;; ++k) {
    Graph g = generate_graph(ErdosRenyi{n, p}, hash64({seed, k}));
    if (g.n_edges() > 0) return g;
  }
}

inline Matrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal();
  return m;
}

inline Vector uniform_vector(std::size_t n, double lo, double hi, Rng& rng) {
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

inline SpinConfiguration random_spins(std::size_t n, Rng& rng) {
  std::vector<std::int8_t> s(n);
  for (auto& x : s) x = static_cast<std::int8_t>(rng.sign());
  return SpinConfiguration(std::move(s));
}

/// Scaled ER(p) graph, Gaussian covariates, uniformly random spins.
inline PseudoLikelihoodProblem random_problem(std::size_t n, std::size_t d, double p, std::uint64_t seed) {
  Rng rng(seed);
  InteractionMatrix a = scale_adjacency(nonempty_er(n, p, seed));
  CovariateMatrix z(gaussian_matrix(n, d, rng));
  return PseudoLikelihoodProblem(std::move(a), std::move(z), random_spins(n, rng));
}

/// Runs `fn` and returns the kind of the netlogit::Error it throws.
template <class Fn>
std::optional<ErrorKind> error_kind(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace netlogit::testing
