#include "netlogit/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "netlogit/error.hpp"
#include "netlogit/rng.hpp"

namespace netlogit {

Graph::Graph(std::size_t n_vertices, std::vector<Edge> edges) : n_(n_vertices), edges_(std::move(edges)) {
  for (auto& e : edges_) {
    if (e.u == e.v) throw Error(ErrorKind::InvalidArgument, "self-loop at vertex " + std::to_string(e.u));
    if (e.u >= n_ || e.v >= n_) {
      throw Error(ErrorKind::IndexOutOfRange,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") outside [0," +
                      std::to_string(n_) + ")");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end());
  if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end()) {
    throw Error(ErrorKind::InvalidArgument,
                "duplicate edge (" + std::to_string(dup->u) + "," + std::to_string(dup->v) + ")");
  }
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> deg(n_, 0);
  for (const auto& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

std::size_t Graph::max_degree() const {
  const auto deg = degrees();
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

// ---------------------------------------------------------------------------
// InteractionMatrix

InteractionMatrix InteractionMatrix::from_graph(const Graph& g, double weight) {
  const std::size_t n = g.n_vertices();
  InteractionMatrix a;
  a.row_ptr_.assign(n + 1, 0);
  for (const auto& e : g.edges()) {
    ++a.row_ptr_[e.u + 1];
    ++a.row_ptr_[e.v + 1];
  }
  std::partial_sum(a.row_ptr_.begin(), a.row_ptr_.end(), a.row_ptr_.begin());
  a.entries_.resize(a.row_ptr_[n]);
  std::vector<std::size_t> cursor(a.row_ptr_.begin(), a.row_ptr_.end() - 1);
  for (const auto& e : g.edges()) a.entries_[cursor[e.v]++] = {e.u, weight};
  for (const auto& e : g.edges()) a.entries_[cursor[e.u]++] = {e.v, weight};
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(a.entries_.begin() + static_cast<std::ptrdiff_t>(a.row_ptr_[i]),
              a.entries_.begin() + static_cast<std::ptrdiff_t>(a.row_ptr_[i + 1]),
              [](const Entry& x, const Entry& y) { return x.col < y.col; });
  }
  return a;
}

double InteractionMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= n() || j >= n()) throw Error(ErrorKind::IndexOutOfRange, "matrix index");
  const auto r = row(i);
  auto it = std::lower_bound(r.begin(), r.end(), j, [](const Entry& e, std::size_t c) { return e.col < c; });
  return (it != r.end() && it->col == j) ? it->value : 0.0;
}

Vector InteractionMatrix::multiply(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != n()) {
    throw Error(ErrorKind::DimensionMismatch, "matrix-vector product");
  }
  Vector y(x.size());
  for (std::size_t i = 0; i < n(); ++i) {
    double acc = 0.0;
    for (const auto& e : row(i)) acc += e.value * x[e.col];
    y[static_cast<Eigen::Index>(i)] = acc;
  }
  return y;
}

double InteractionMatrix::total_sum() const {
  double s = 0.0;
  for (const auto& e : entries_) s += e.value;
  return s;
}

double InteractionMatrix::inf_norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < n(); ++i) {
    double s = 0.0;
    for (const auto& e : row(i)) s += std::abs(e.value);
    best = std::max(best, s);
  }
  return best;
}

double InteractionMatrix::frobenius_sq() const {
  double s = 0.0;
  for (const auto& e : entries_) s += e.value * e.value;
  return s;
}

InteractionMatrix InteractionMatrix::scaled(double factor) const {
  InteractionMatrix out = *this;
  for (auto& e : out.entries_) e.value *= factor;
  return out;
}

Matrix InteractionMatrix::to_dense() const {
  const auto dim = static_cast<Eigen::Index>(n());
  Matrix m = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < n(); ++i) {
    for (const auto& e : row(i)) m(static_cast<Eigen::Index>(i), e.col) = e.value;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Ensembles

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " probability outside [0,1]");
  }
}

struct Validator {
  void operator()(const ErdosRenyi& s) const {
    if (s.n == 0) throw Error(ErrorKind::InvalidArgument, "ErdosRenyi needs n >= 1");
    check_probability(s.p, "ErdosRenyi");
  }

  void operator()(const StochasticBlock& s) const {
    if (s.n == 0) throw Error(ErrorKind::InvalidArgument, "SBM needs n >= 1");
    const std::size_t k = s.proportions.size();
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "SBM needs at least one block");
    double total = 0.0;
    for (double lam : s.proportions) {
      if (!(lam >= 0.0)) throw Error(ErrorKind::InvalidArgument, "SBM proportions must be nonnegative");
      total += lam;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw Error(ErrorKind::InvalidArgument, "SBM proportions must sum to 1");
    }
    if (s.base.size() != k) throw Error(ErrorKind::DimensionMismatch, "SBM base matrix must be K x K");
    for (std::size_t i = 0; i < k; ++i) {
      if (s.base[i].size() != k) throw Error(ErrorKind::DimensionMismatch, "SBM base matrix must be K x K");
      for (std::size_t j = 0; j < k; ++j) {
        const double b = s.base[i][j];
        if (!(b >= 0.0)) throw Error(ErrorKind::InvalidArgument, "SBM base entries must be nonnegative");
        if (b > static_cast<double>(s.n)) {
          throw Error(ErrorKind::InvalidArgument, "SBM base entry exceeds n, edge probability > 1");
        }
        if (s.base[i][j] != s.base[j][i]) throw Error(ErrorKind::InvalidArgument, "SBM base matrix must be symmetric");
      }
    }
  }

  void operator()(const Inhomogeneous& s) const {
    const auto n = static_cast<Eigen::Index>(s.n);
    if (s.n == 0 || s.probabilities.rows() != n || s.probabilities.cols() != n) {
      throw Error(ErrorKind::DimensionMismatch, "inhomogeneous probability matrix must be n x n");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        check_probability(s.probabilities(i, j), "inhomogeneous");
        if (s.probabilities(i, j) != s.probabilities(j, i)) {
          throw Error(ErrorKind::InvalidArgument, "inhomogeneous probability matrix must be symmetric");
        }
      }
    }
  }

  void operator()(const FixedEdgeList&) const {}
};

}  // namespace

void validate(const GraphEnsembleSpec& spec) { std::visit(Validator{}, spec); }

std::size_t ensemble_size(const GraphEnsembleSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FixedEdgeList>) {
          return read_edge_list(s.path).n_vertices();
        } else {
          return s.n;
        }
      },
      spec);
}

std::vector<std::size_t> sbm_blocks(const StochasticBlock& spec) {
  Validator{}(spec);
  const std::size_t k = spec.proportions.size();
  std::vector<std::size_t> upper(k);
  double cum = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    cum += spec.proportions[j];
    const double bound = static_cast<double>(spec.n) * cum;
    upper[j] = (j + 1 == k) ? spec.n : std::min(spec.n, static_cast<std::size_t>(std::floor(bound + 1e-9)));
  }
  std::vector<std::size_t> block(spec.n);
  std::size_t lo = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t hi = std::max(lo, upper[j]);
    if (hi == lo && spec.proportions[j] > 0.0) {
      throw Error(ErrorKind::InvalidArgument,
                  "SBM block " + std::to_string(j) + " is empty but has positive proportion");
    }
    for (std::size_t v = lo; v < hi; ++v) block[v] = j;
    lo = hi;
  }
  return block;
}

namespace {

template <class ProbFn>
Graph sample_pairs(std::size_t n, std::uint64_t seed, ProbFn prob) {
  Rng rng(seed);
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const double p = prob(u, v);
      if (p > 0.0 && rng.uniform() < p) edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
    }
  }
  return Graph(n, std::move(edges));
}

}  // namespace

Graph generate_graph(const GraphEnsembleSpec& spec, std::uint64_t seed) {
  validate(spec);
  return std::visit(
      [seed](const auto& s) -> Graph {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ErdosRenyi>) {
          return sample_pairs(s.n, seed, [p = s.p](std::size_t, std::size_t) { return p; });
        } else if constexpr (std::is_same_v<T, StochasticBlock>) {
          const auto block = sbm_blocks(s);
          const double inv_n = 1.0 / static_cast<double>(s.n);
          return sample_pairs(s.n, seed, [&](std::size_t u, std::size_t v) {
            return std::min(1.0, s.base[block[u]][block[v]] * inv_n);
          });
        } else if constexpr (std::is_same_v<T, Inhomogeneous>) {
          return sample_pairs(s.n, seed, [&](std::size_t u, std::size_t v) {
            return s.probabilities(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
          });
        } else {
          return read_edge_list(s.path);
        }
      },
      spec);
}

InteractionMatrix scale_adjacency(const Graph& g) {
  if (g.n_edges() == 0) throw Error(ErrorKind::EmptyGraph, "cannot scale a graph with no edges");
  const double w = static_cast<double>(g.n_vertices()) / (2.0 * static_cast<double>(g.n_edges()));
  return InteractionMatrix::from_graph(g, w);
}

std::pair<InteractionMatrix, double> normalize_inf(const InteractionMatrix& a) {
  const double norm = a.inf_norm();
  if (norm == 0.0) throw Error(ErrorKind::ZeroMatrix, "cannot normalize a zero matrix");
  return {a.scaled(1.0 / norm), norm};
}

// ---------------------------------------------------------------------------
// Diagnostics

AssumptionDiagnostics diagnostics(const InteractionMatrix& a, const Graph& g, const CovariateMatrix* z,
                                  std::size_t mc_reps, std::uint64_t seed) {
  const std::size_t n = a.n();
  if (g.n_vertices() != n) throw Error(ErrorKind::DimensionMismatch, "graph and matrix sizes differ");
  if (z != nullptr && z->n() != n) throw Error(ErrorKind::DimensionMismatch, "covariate rows differ from N");
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "empty network");

  AssumptionDiagnostics out;
  const double dn = static_cast<double>(n);
  out.a_inf_norm = a.inf_norm();
  out.a_frob_sq_over_n = a.frobenius_sq() / dn;
  const auto deg = g.degrees();
  out.d_max = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  out.avg_degree = 2.0 * static_cast<double>(g.n_edges()) / dn;
  out.nonisolated_fraction =
      static_cast<double>(std::count_if(deg.begin(), deg.end(), [](std::size_t k) { return k > 0; })) / dn;

  if (z != nullptr && z->d() > 0) {
    const Matrix& zv = z->values();
    const Matrix gram = (zv.transpose() * zv) / dn;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    out.z_gram_min_eig = std::max(0.0, eig.eigenvalues().minCoeff());

    if (mc_reps > 0) {
      Rng rng(seed);
      Vector eps(zv.rows());
      double total = 0.0;
      for (std::size_t r = 0; r < mc_reps; ++r) {
        for (Eigen::Index i = 0; i < eps.size(); ++i) eps[i] = rng.sign();
        total += (zv.transpose() * eps).cwiseAbs().maxCoeff() / dn;
      }
      out.rademacher_estimate = total / static_cast<double>(mc_reps);
    }
  }
  return out;
}

std::string to_json(const AssumptionDiagnostics& diag) {
  nlohmann::ordered_json j;
  j["a_inf_norm"] = diag.a_inf_norm;
  j["a_frob_sq_over_n"] = diag.a_frob_sq_over_n;
  j["d_max"] = diag.d_max;
  j["avg_degree"] = diag.avg_degree;
  j["nonisolated_fraction"] = diag.nonisolated_fraction;
  j["z_gram_min_eig"] = diag.z_gram_min_eig ? nlohmann::ordered_json(*diag.z_gram_min_eig) : nullptr;
  j["rademacher_estimate"] =
      diag.rademacher_estimate ? nlohmann::ordered_json(*diag.rademacher_estimate) : nullptr;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Edge-list I/O

Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> n;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    auto fail = [&](const std::string& why) {
      throw Error(ErrorKind::Parse, "edge list line " + std::to_string(lineno) + ": " + why);
    };
    if (!n) {
      std::string tag;
      long long count = -1;
      if (!(ss >> tag >> count) || tag != "n" || count < 0) fail("expected header 'n <N>'");
      n = static_cast<std::size_t>(count);
    } else {
      long long u = -1;
      long long v = -1;
      if (!(ss >> u >> v) || u < 0 || v < 0) fail("expected 'u v' with nonnegative integers");
      edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
    }
    std::string rest;
    if (ss >> rest) fail("trailing content '" + rest + "'");
  }
  if (!n) throw Error(ErrorKind::Parse, "edge list has no 'n <N>' header");
  return Graph(*n, std::move(edges));
}

Graph read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "n " << g.n_vertices() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void write_edge_list(const std::filesystem::path& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_edge_list(out, g);
}

}  // namespace netlogit
