#include <doctest.h>

#include <cmath>
#include <sstream>

#include "netlogit/experiments.hpp"
#include "netlogit/tune.hpp"
#include "test_support.hpp"

using namespace netlogit;
using netlogit::testing::error_kind;
using netlogit::testing::random_problem;

namespace {

PathPoint point(double lambda, double bic_value, bool converged = true) {
  PathPoint p;
  p.lambda = lambda;
  p.bic = bic_value;
  p.converged = converged;
  p.gamma_hat.theta = Vector::Constant(1, lambda);
  return p;
}

}  // namespace

TEST_CASE("geometric grid") {
  const auto g = LambdaGrid::standard();
  REQUIRE(g.size() == 100);
  CHECK(g[0] == 0.1);
  CHECK(g[99] == 0.001);
  for (std::size_t k = 1; k < g.size(); ++k) {
    CHECK(g[k] < g[k - 1]);
    CHECK(g[k] / g[k - 1] == doctest::Approx(std::pow(0.01, 1.0 / 99.0)).epsilon(1e-12));
  }
  CHECK(LambdaGrid::geometric(0.5, 0.5, 1)[0] == 0.5);
  CHECK(error_kind([] { LambdaGrid::geometric(0.0, 1.0, 5); }) == ErrorKind::InvalidArgument);
  CHECK(error_kind([] { LambdaGrid::geometric(0.5, 0.5, 3); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("explicit and theory-scaled grids") {
  CHECK(error_kind([] { LambdaGrid::explicit_values({0.1, 0.2}); }) == ErrorKind::InvalidArgument);
  CHECK(error_kind([] { LambdaGrid::explicit_values({0.1, 0.1}); }) == ErrorKind::InvalidArgument);
  CHECK(error_kind([] { LambdaGrid::explicit_values({}); }) == ErrorKind::InvalidArgument);
  CHECK(error_kind([] { LambdaGrid::explicit_values({0.1, -0.1}); }) == ErrorKind::InvalidArgument);

  const auto t = LambdaGrid::theory_scaled({0.5, 2.0, 1.0}, 400, 99);
  const double unit = std::sqrt(std::log(100.0) / 400.0);
  REQUIRE(t.size() == 3);
  CHECK(t[0] == doctest::Approx(2.0 * unit));
  CHECK(t[2] == doctest::Approx(0.5 * unit));
}

TEST_CASE("degrees of freedom count exact nonzeros of theta only") {
  ModelParams p{0.7, Vector::Zero(5)};
  CHECK(degrees_of_freedom(p) == 0);
  p.theta[1] = 1e-300;
  p.theta[4] = -2.0;
  CHECK(degrees_of_freedom(p) == 2);
}

TEST_CASE("BIC formulas") {
  const auto pb = random_problem(50, 3, 0.2, 1);
  ModelParams zero{0.0, Vector::Zero(3)};
  CHECK(bic(pb, zero, 50) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(bic(pb, zero, 50, BicScaling::Classical) == doctest::Approx(100.0 * std::log(2.0)).epsilon(1e-14));

  ModelParams two{0.1, Vector::Zero(3)};
  two.theta[0] = 0.3;
  two.theta[2] = -0.2;
  const double loss = pb.loss(two);
  CHECK(bic(pb, two, 50) == doctest::Approx(loss + 2.0 * std::log(50.0)).epsilon(1e-15));
  CHECK(bic(pb, two, 50, BicScaling::Classical) ==
        doctest::Approx(100.0 * loss + 2.0 * std::log(50.0)).epsilon(1e-15));
}

TEST_CASE("selection rules") {
  PathResult path;
  path.points = {point(0.3, 5.0), point(0.2, 1.0), point(0.1, 1.0), point(0.05, 0.5, false)};
  const auto sel = select(path);
  CHECK(sel.index == 1);
  CHECK(sel.lambda_hat == 0.2);
  CHECK(sel.gamma_tilde.theta[0] == 0.2);

  PathResult none;
  none.points = {point(0.3, 1.0, false)};
  CHECK(error_kind([&] { select(none); }) == ErrorKind::NoConvergedFit);
  CHECK(error_kind([] { select(PathResult{}); }) == ErrorKind::NoConvergedFit);
}

TEST_CASE("path over a grid starting above full shrinkage") {
  const auto pb = random_problem(200, 10, 0.03, 3);
  const double top = full_shrinkage_lambda(pb) * 1.5;
  const auto grid = LambdaGrid::geometric(top / 100.0, top, 25);
  SolverConfig base;
  base.delta_tol = 1e-6;
  const auto path = solution_path(pb, grid, base);
  REQUIRE(path.points.size() == 25);
  CHECK(path.points[0].df == 0);
  CHECK(path.points[0].lambda == top);
  REQUIRE(path.selected_index.has_value());
  CHECK(*path.selected_index == select(path).index);
  for (const auto& p : path.points) {
    CHECK(p.converged);
    CHECK(p.loss == doctest::Approx(pb.loss(p.gamma_hat)));
    CHECK(p.df == degrees_of_freedom(p.gamma_hat));
  }
  CHECK(path.points.back().df > 0);
}

TEST_CASE("warm-started path agrees with independent cold fits") {
  const auto pb = random_problem(300, 12, 0.02, 5);
  const auto grid = LambdaGrid::geometric(0.005, 0.1, 15);
  SolverConfig base;
  base.delta_tol = 1e-6;
  const auto warm = solution_path(pb, grid, base);
  PathOptions cold_opts;
  cold_opts.warm_start = false;
  cold_opts.threads = 3;
  const auto cold = solution_path(pb, grid, base, cold_opts);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    SolverConfig c = base;
    c.lambda = grid[k];
    const double gap = std::abs(penalized_objective(pb, warm.points[k].gamma_hat.gamma(), c) -
                                penalized_objective(pb, cold.points[k].gamma_hat.gamma(), c));
    CHECK(gap <= 10.0 * base.delta_tol);
  }
}

TEST_CASE("paths are deterministic, including the parallel cold start") {
  const auto pb = random_problem(150, 8, 0.04, 9);
  const auto grid = LambdaGrid::geometric(0.01, 0.1, 10);
  PathOptions opts;
  opts.warm_start = false;
  opts.threads = 1;
  std::ostringstream a;
  write_path_csv(a, solution_path(pb, grid, SolverConfig{}, opts));
  opts.threads = 4;
  std::ostringstream b;
  write_path_csv(b, solution_path(pb, grid, SolverConfig{}, opts));
  CHECK(a.str() == b.str());

  std::ostringstream c;
  std::ostringstream d;
  write_path_csv(c, solution_path(pb, grid, SolverConfig{}));
  write_path_csv(d, solution_path(pb, grid, SolverConfig{}));
  CHECK(c.str() == d.str());
}

TEST_CASE("path CSV layout") {
  const auto pb = random_problem(60, 3, 0.1, 2);
  std::ostringstream out;
  write_path_csv(out, solution_path(pb, LambdaGrid::explicit_values({0.2, 0.02}), SolverConfig{}));
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "lambda,log_lambda,df,bic,loss,beta_hat,theta_hat_1,theta_hat_2,theta_hat_3,converged");
  std::string row;
  int rows = 0;
  while (std::getline(in, row)) {
    ++rows;
    CHECK(std::count(row.begin(), row.end(), ',') == 9);
  }
  CHECK(rows == 2);
}

TEST_CASE("BIC keeps the true support on moderately sized networks") {
  ExperimentConfig cfg;
  cfg.n_list = {600};
  cfg.d = 40;
  cfg.s = 5;
  const auto grid = LambdaGrid::standard();
  SolverConfig base;
  int kept = 0;
  const int seeds = 50;
  for (int seed = 0; seed < seeds; ++seed) {
    const auto inst = make_instance(cfg, 600, task_seed(777, 0, static_cast<std::size_t>(seed)));
    const auto path = solution_path(inst.problem, grid, base);
    const auto sel = select(path);
    kept += degrees_of_freedom(sel.gamma_tilde) >= cfg.s;
  }
  MESSAGE("selected df >= s in " << kept << " of " << seeds << " seeds");
  CHECK(kept >= 40);
}
