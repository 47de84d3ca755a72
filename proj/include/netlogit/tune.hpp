#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "netlogit/optim.hpp"
#include "netlogit/pseudo.hpp"

namespace netlogit {

/// Strictly decreasing positive penalty values.
class LambdaGrid {
 public:
  /// `count` values spaced evenly in log from hi down to lo.
  static LambdaGrid geometric(double lo, double hi, std::size_t count);
  /// Must already be strictly decreasing and positive.
  static LambdaGrid explicit_values(std::vector<double> values);
  /// lambda = delta * sqrt(log(d + 1) / n) for each delta, largest first.
  static LambdaGrid theory_scaled(std::vector<double> deltas, std::size_t n, std::size_t d);

  /// The default experiment grid: 100 geometric points on [0.001, 0.1].
  static LambdaGrid standard() { return geometric(0.001, 0.1, 100); }

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_.at(i); }

 private:
  explicit LambdaGrid(std::vector<double> values);
  std::vector<double> values_;
};

enum class BicScaling {
  /// L_N + df log N, with L_N the per-node average loss.
  PerNode,
  /// 2 N L_N + df log N.
  Classical,
};

/// Number of theta coordinates that are not exactly zero.
std::size_t degrees_of_freedom(const ModelParams& params);

double bic(const PseudoLikelihoodProblem& problem, const ModelParams& gamma_hat, std::size_t n,
           BicScaling scaling = BicScaling::PerNode);

struct PathPoint {
  double lambda = 0.0;
  ModelParams gamma_hat;
  std::size_t df = 0;
  double bic = 0.0;
  double loss = 0.0;
  KktResiduals kkt;
  bool converged = false;
  std::size_t n_iters = 0;
};

struct PathResult {
  std::vector<PathPoint> points;
  /// argmin-BIC position among converged points; empty if none converged.
  std::optional<std::size_t> selected_index;
};

struct PathOptions {
  bool warm_start = true;
  BicScaling scaling = BicScaling::PerNode;
  /// Used only when warm_start is false; grid points are independent then.
  std::size_t threads = 1;
  /// Starting point for the first warm-started fit (gamma = 0 when empty).
  std::optional<Vector> init;
};

/// Fits each grid value from largest to smallest. `base.lambda` is ignored.
PathResult solution_path(const PseudoLikelihoodProblem& problem, const LambdaGrid& grid, const SolverConfig& base,
                         const PathOptions& options = {});

struct Selection {
  std::size_t index = 0;
  double lambda_hat = 0.0;
  ModelParams gamma_tilde;
};

/// Converged point with the smallest BIC; ties go to the larger lambda.
/// Throws NoConvergedFit when nothing converged.
Selection select(const PathResult& path);

/// Columns: lambda, log_lambda, df, bic, loss, beta_hat, theta_hat_1..d, converged.
void write_path_csv(std::ostream& out, const PathResult& path);

}  // namespace netlogit
