#include "netlogit/tune.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "netlogit/error.hpp"
#include "netlogit/format.hpp"
#include "netlogit/parallel.hpp"

namespace netlogit {

LambdaGrid::LambdaGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorKind::InvalidArgument, "lambda grid is empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
      throw Error(ErrorKind::InvalidArgument, "lambda values must be positive and finite");
    }
    if (i > 0 && !(values_[i] < values_[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "lambda grid must be strictly decreasing");
    }
  }
}

LambdaGrid LambdaGrid::geometric(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0 || (count > 1 && !(hi > lo))) {
    throw Error(ErrorKind::InvalidArgument, "geometric grid needs 0 < lo < hi and count >= 1");
  }
  std::vector<double> values(count);
  if (count == 1) {
    values[0] = hi;
  } else {
    const double log_hi = std::log(hi);
    const double step = (std::log(lo) - log_hi) / static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) values[k] = std::exp(log_hi + step * static_cast<double>(k));
    values.front() = hi;
    values.back() = lo;
  }
  return LambdaGrid(std::move(values));
}

LambdaGrid LambdaGrid::explicit_values(std::vector<double> values) { return LambdaGrid(std::move(values)); }

LambdaGrid LambdaGrid::theory_scaled(std::vector<double> deltas, std::size_t n, std::size_t d) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "n must be positive");
  std::sort(deltas.begin(), deltas.end(), std::greater<>());
  const double scale = std::sqrt(std::log(static_cast<double>(d) + 1.0) / static_cast<double>(n));
  for (auto& v : deltas) v *= scale;
  return LambdaGrid(std::move(deltas));
}

std::size_t degrees_of_freedom(const ModelParams& params) {
  return static_cast<std::size_t>((params.theta.array() != 0.0).count());
}

double bic(const PseudoLikelihoodProblem& problem, const ModelParams& gamma_hat, std::size_t n, BicScaling scaling) {
  const double loss = problem.loss(gamma_hat);
  const double penalty = static_cast<double>(degrees_of_freedom(gamma_hat)) * std::log(static_cast<double>(n));
  return scaling == BicScaling::PerNode ? loss + penalty : 2.0 * static_cast<double>(n) * loss + penalty;
}

namespace {

PathPoint make_point(const PseudoLikelihoodProblem& problem, double lambda, const FitResult& fit,
                     BicScaling scaling) {
  PathPoint p;
  p.lambda = lambda;
  p.gamma_hat = fit.gamma_hat;
  p.df = degrees_of_freedom(fit.gamma_hat);
  p.loss = problem.loss(fit.gamma_hat);
  p.bic = bic(problem, fit.gamma_hat, problem.n(), scaling);
  p.kkt = fit.kkt;
  p.converged = fit.converged;
  p.n_iters = fit.n_iters;
  return p;
}

}  // namespace

PathResult solution_path(const PseudoLikelihoodProblem& problem, const LambdaGrid& grid, const SolverConfig& base,
                         const PathOptions& options) {
  PathResult path;
  path.points.resize(grid.size());
  auto config_for = [&](double lambda) {
    SolverConfig c = base;
    c.lambda = lambda;
    return c;
  };
  if (options.warm_start) {
    std::optional<Vector> start = options.init;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const FitResult r = fit(problem, config_for(grid[k]), start);
      path.points[k] = make_point(problem, grid[k], r, options.scaling);
      start = r.gamma_hat.gamma();
    }
  } else {
    parallel_for(grid.size(), options.threads, [&](std::size_t k) {
      path.points[k] = make_point(problem, grid[k], fit(problem, config_for(grid[k])), options.scaling);
    });
  }
  try {
    path.selected_index = select(path).index;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoConvergedFit) throw;
  }
  return path;
}

Selection select(const PathResult& path) {
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < path.points.size(); ++k) {
    const auto& p = path.points[k];
    if (!p.converged) continue;
    const bool better = !best || p.bic < path.points[*best].bic ||
                        (p.bic == path.points[*best].bic && p.lambda > path.points[*best].lambda);
    if (better) best = k;
  }
  if (!best) throw Error(ErrorKind::NoConvergedFit, "no converged fit on the path");
  const auto& p = path.points[*best];
  return Selection{*best, p.lambda, p.gamma_hat};
}

void write_path_csv(std::ostream& out, const PathResult& path) {
  const std::size_t d = path.points.empty() ? 0 : path.points.front().gamma_hat.d();
  out << "lambda,log_lambda,df,bic,loss,beta_hat";
  for (std::size_t j = 1; j <= d; ++j) out << ",theta_hat_" << j;
  out << ",converged\n";
  for (const auto& p : path.points) {
    out << format_double(p.lambda) << ',' << format_double(std::log(p.lambda)) << ',' << p.df << ','
        << format_double(p.bic) << ',' << format_double(p.loss) << ',' << format_double(p.gamma_hat.beta);
    for (Eigen::Index j = 0; j < p.gamma_hat.theta.size(); ++j) out << ',' << format_double(p.gamma_hat.theta[j]);
    out << ',' << (p.converged ? 1 : 0) << '\n';
  }
}

}  // namespace netlogit
