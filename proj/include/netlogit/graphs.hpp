#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "netlogit/types.hpp"

namespace netlogit {

using Vertex = std::uint32_t;

/// Undirected edge stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph held as a sorted, duplicate-free edge list.
class Graph {
 public:
  Graph() = default;

  /// Normalizes each pair to (min, max) and sorts. Throws on self-loops,
  /// duplicates, or out-of-range indices.
  Graph(std::size_t n_vertices, std::vector<Edge> edges);

  std::size_t n_vertices() const noexcept { return n_; }
  std::size_t n_edges() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::vector<std::size_t> degrees() const;
  std::size_t max_degree() const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
};

/// Sparse symmetric N x N matrix with zero diagonal, in CSR form with both
/// (i,j) and (j,i) stored explicitly. Immutable once built.
class InteractionMatrix {
 public:
  struct Entry {
    Vertex col;
    double value;
  };

  InteractionMatrix() = default;

  /// Every edge (u,v) contributes `weight` at (u,v) and (v,u).
  static InteractionMatrix from_graph(const Graph& g, double weight);

  std::size_t n() const noexcept { return row_ptr_.empty() ? 0 : row_ptr_.size() - 1; }
  std::size_t nnz() const noexcept { return entries_.size(); }

  std::span<const Entry> row(std::size_t i) const noexcept {
    return {entries_.data() + row_ptr_[i], entries_.data() + row_ptr_[i + 1]};
  }

  /// a_ij, zero when absent.
  double at(std::size_t i, std::size_t j) const;

  /// y = A x.
  Vector multiply(const Vector& x) const;

  double total_sum() const;
  /// Maximum absolute row sum.
  double inf_norm() const;
  double frobenius_sq() const;

  InteractionMatrix scaled(double factor) const;
  Matrix to_dense() const;

 private:
  std::vector<std::size_t> row_ptr_;
  std::vector<Entry> entries_;
};

struct ErdosRenyi {
  std::size_t n = 0;
  double p = 0.0;
};

/// Contiguous-block SBM; edge probability between blocks j,k is base[j][k]/n.
struct StochasticBlock {
  std::size_t n = 0;
  std::vector<double> proportions;
  std::vector<std::vector<double>> base;
};

/// Arbitrary symmetric edge-probability matrix.
struct Inhomogeneous {
  std::size_t n = 0;
  Matrix probabilities;
};

struct FixedEdgeList {
  std::filesystem::path path;
};

using GraphEnsembleSpec = std::variant<ErdosRenyi, StochasticBlock, Inhomogeneous, FixedEdgeList>;

/// Throws InvalidArgument if the spec violates its invariants.
void validate(const GraphEnsembleSpec& spec);

/// Number of vertices the spec produces (reads the header for FixedEdgeList).
std::size_t ensemble_size(const GraphEnsembleSpec& spec);

/// Block index of each vertex for an SBM spec. Block j covers the 1-based
/// vertices (n * c_{j-1}, n * c_j] where c is the cumulative proportion; the
/// last block absorbs rounding.
std::vector<std::size_t> sbm_blocks(const StochasticBlock& spec);

Graph generate_graph(const GraphEnsembleSpec& spec, std::uint64_t seed);

/// A = N / (2|E|) times the 0/1 adjacency matrix.
InteractionMatrix scale_adjacency(const Graph& g);

/// Returns (A / ||A||_inf, ||A||_inf).
std::pair<InteractionMatrix, double> normalize_inf(const InteractionMatrix& a);

struct AssumptionDiagnostics {
  double a_inf_norm = 0.0;
  double a_frob_sq_over_n = 0.0;
  std::size_t d_max = 0;
  double avg_degree = 0.0;
  double nonisolated_fraction = 0.0;
  std::optional<double> z_gram_min_eig;
  std::optional<double> rademacher_estimate;
};

inline constexpr std::size_t kDefaultRademacherReps = 200;

AssumptionDiagnostics diagnostics(const InteractionMatrix& a, const Graph& g,
                                  const CovariateMatrix* z = nullptr,
                                  std::size_t mc_reps = kDefaultRademacherReps,
                                  std::uint64_t seed = 0);

/// Flat JSON object; optional fields are null when absent.
std::string to_json(const AssumptionDiagnostics& diag);

// Edge-list text format: '#' comment lines, a mandatory "n <N>" header, then
// one "u v" pair per line.
Graph read_edge_list(std::istream& in);
Graph read_edge_list(const std::filesystem::path& path);
void write_edge_list(std::ostream& out, const Graph& g);
void write_edge_list(const std::filesystem::path& path, const Graph& g);

}  // namespace netlogit
