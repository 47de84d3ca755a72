#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "netlogit/covgen.hpp"
#include "netlogit/graphs.hpp"
#include "netlogit/tune.hpp"

namespace netlogit {

// Ensemble families whose parameters scale with the network size, so one
// config can cover a whole list of N values.

/// G(N, mean_degree / N).
struct ErdosRenyiTemplate {
  double mean_degree = 5.0;
};
/// Contiguous-block SBM with edge probability base[j][k] / N.
struct SbmTemplate {
  std::vector<double> proportions;
  std::vector<std::vector<double>> base;
};
/// Fixed graph from an edge-list file; N must match the file header.
struct EdgeListTemplate {
  std::filesystem::path path;
};

using EnsembleTemplate = std::variant<ErdosRenyiTemplate, SbmTemplate, EdgeListTemplate>;

GraphEnsembleSpec instantiate(const EnsembleTemplate& ensemble, std::size_t n);

struct GeometricGrid {
  double lo = 0.001;
  double hi = 0.1;
  std::size_t count = 100;
};
struct ExplicitGrid {
  std::vector<double> values;
};
/// lambda = delta sqrt(log(d+1)/N) per delta.
struct TheoryGrid {
  std::vector<double> deltas;
};

using GridSpec = std::variant<GeometricGrid, ExplicitGrid, TheoryGrid>;

LambdaGrid instantiate(const GridSpec& grid, std::size_t n, std::size_t d);

enum class Comparison { Pmpl, Logistic, Both };

enum class Method { Pmpl, Logistic };

std::string_view to_string(Method method) noexcept;

struct ExperimentConfig {
  EnsembleTemplate ensemble = ErdosRenyiTemplate{5.0};
  std::vector<std::size_t> n_list{200, 400, 600, 800, 1000, 1200};
  std::size_t d = 100;
  std::size_t s = 5;
  double beta_true = 0.3;
  /// Covariate law; its `d` is overridden by the experiment's d.
  CovariateSpec covariate{0, GaussianAR{0.2}};
  std::variant<UniformShell, ExplicitTheta> signal = UniformShell{0.5, 1.0};
  std::size_t gibbs_iters = 30000;
  GridSpec grid = GeometricGrid{};
  std::size_t reps = 20;
  std::uint64_t base_seed = 1;
  Comparison comparison = Comparison::Both;
  double tau = 0.8;
  double delta_tol = 1e-3;
  std::size_t max_iters = 100000;
  BicScaling bic = BicScaling::PerNode;
  /// Path experiments only: prepend the full-shrinkage lambda to the grid
  /// when it exceeds the grid maximum.
  bool extend_to_full_shrinkage = false;

  /// Throws InvalidArgument on non-positive counts or unsorted n_list.
  void validate() const;
};

/// Estimation-error protocol at full scale (200 reps). `sbm` selects the
/// two-block SBM with within 10/N and between 5/N instead of G(N, 5/N).
ExperimentConfig full_error_preset(bool sbm = false);
/// Same protocol with 20 reps.
ExperimentConfig desk_error_preset(bool sbm = false);
/// Solution-path protocol: N=1200, d=200, s=5 (or d=600, s=10 when `wide`).
ExperimentConfig full_path_preset(bool sbm = false, bool wide = false);

ExperimentConfig parse_experiment_config(std::string_view json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
std::string to_json(const ExperimentConfig& config);

/// seed(scenario, rep) = hash64(base_seed, scenario, rep).
std::uint64_t task_seed(std::uint64_t base_seed, std::size_t scenario, std::size_t rep);

/// One synthetic data set: graph, scaled interactions, covariates, truth, sample.
struct Instance {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  Graph graph;
  ModelParams truth;
  PseudoLikelihoodProblem problem;
};

/// Graph (retrying empty draws up to 10 times), covariates, theta, and a
/// Gibbs sample from all-plus, each on its own stream derived from `seed`.
Instance make_instance(const ExperimentConfig& config, std::size_t n, std::uint64_t seed);

struct ScenarioPath {
  std::size_t scenario = 0;
  std::size_t n = 0;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  ModelParams truth;
  double full_shrinkage_lambda = 0.0;
  PathResult path;
};

/// One PMPL solution path per (n, rep), ordered by scenario then rep.
std::vector<ScenarioPath> run_solution_path_experiment(const ExperimentConfig& config, std::size_t threads = 1);

struct ErrorRow {
  Method method = Method::Pmpl;
  std::size_t n = 0;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  /// Errors of the full gamma; the logistic comparator contributes beta = 0.
  double l1_error = 0.0;
  double l2_error = 0.0;
  double theta_l1_error = 0.0;
  double theta_l2_error = 0.0;
  bool support_recovered = false;
  std::size_t df = 0;
  double lambda_hat = 0.0;
  double runtime_sec = 0.0;
};

struct ErrorAggregate {
  Method method = Method::Pmpl;
  std::size_t n = 0;
  std::size_t count = 0;
  double mean_l1 = 0.0;
  double sd_l1 = 0.0;
  double mean_l2 = 0.0;
  double sd_l2 = 0.0;
};

struct ErrorTable {
  /// Sorted by (method, n, rep).
  std::vector<ErrorRow> rows;
  std::vector<ErrorAggregate> aggregates;
};

/// Mean and sample standard deviation per (method, n), recomputed from rows.
std::vector<ErrorAggregate> aggregate(const std::vector<ErrorRow>& rows);

ErrorTable run_error_experiment(const ExperimentConfig& config, std::size_t threads = 1);

/// OLS slope of log(mean l2 error) against log N. Needs >= 3 distinct N.
double rate_slope(const ErrorTable& table, Method method);

/// Deterministic outputs; wall-clock timings go to write_timing_csv.
void write_error_csv(std::ostream& out, const ErrorTable& table);
void write_aggregate_csv(std::ostream& out, const ErrorTable& table);
void write_timing_csv(std::ostream& out, const ErrorTable& table);

/// Config echo, library version, and the derived per-task seeds.
std::string run_manifest_json(const ExperimentConfig& config, std::string_view kind);

}  // namespace netlogit
