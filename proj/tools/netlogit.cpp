// Command-line front end: graph generation, sampling, fitting, and the
// experiment harness.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "netlogit/covgen.hpp"
#include "netlogit/error.hpp"
#include "netlogit/experiments.hpp"
#include "netlogit/format.hpp"
#include "netlogit/graphs.hpp"
#include "netlogit/model.hpp"
#include "netlogit/optim.hpp"
#include "netlogit/parallel.hpp"
#include "netlogit/tune.hpp"

namespace fs = std::filesystem;
using namespace netlogit;

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::size_t threads = 0;

  ExperimentConfig config() const {
    ExperimentConfig c = config_path.empty() ? ExperimentConfig{} : load_experiment_config(config_path);
    if (seed) c.base_seed = *seed;
    return c;
  }
  std::size_t thread_count() const { return threads == 0 ? default_threads() : threads; }
  fs::path out(const std::string& name) const {
    fs::create_directories(out_dir);
    return fs::path(out_dir) / name;
  }
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--config", common.config_path, "Experiment config (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--seed", common.seed, "Base seed (overrides the config)");
  cmd->add_option("--out-dir", common.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--threads", common.threads, "Worker threads (0 = all cores)")->capture_default_str();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  return out;
}

void write_text(const fs::path& path, const std::string& text) { open_out(path) << text << '\n'; }

std::string params_json(const ModelParams& p) {
  nlohmann::json j;
  j["beta"] = p.beta;
  j["theta"] = std::vector<double>(p.theta.data(), p.theta.data() + p.theta.size());
  return j.dump(2);
}

std::size_t pick_n(const ExperimentConfig& c, std::optional<std::size_t> n) { return n ? *n : c.n_list.front(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Penalized pseudo-likelihood estimation for network logistic regression"};
  app.set_version_flag("--version", std::string(NETLOGIT_VERSION));
  app.require_subcommand(1);

  Common common;
  std::optional<std::size_t> n_opt;

  auto* gen = app.add_subcommand("gen-graph", "Draw one graph from the configured ensemble");
  add_common(gen, common);
  gen->add_option("--n", n_opt, "Number of nodes (default: first entry of n_list)");

  auto* sample = app.add_subcommand("sample", "Generate graph, covariates, truth and a Gibbs sample");
  add_common(sample, common);
  sample->add_option("--n", n_opt, "Number of nodes (default: first entry of n_list)");

  std::string edges_path;
  std::string cov_path;
  std::string spins_path;
  std::optional<double> lambda_opt;
  auto* fitc = app.add_subcommand("fit", "Fit PMPL to data files");
  add_common(fitc, common);
  fitc->add_option("--edges", edges_path, "Edge list")->required()->check(CLI::ExistingFile);
  fitc->add_option("--covariates", cov_path, "Covariate CSV")->required()->check(CLI::ExistingFile);
  fitc->add_option("--spins", spins_path, "Spin CSV (first row is used)")->required()->check(CLI::ExistingFile);
  fitc->add_option("--lambda", lambda_opt, "Single penalty; omit to run the configured grid with BIC");
  bool fixed_zero_beta = false;
  fitc->add_flag("--logistic", fixed_zero_beta, "Fix beta at 0 (independent logistic regression)");

  auto* path = app.add_subcommand("path", "Solution-path experiment");
  add_common(path, common);

  auto* experiment = app.add_subcommand("experiment", "Estimation-error experiment");
  add_common(experiment, common);

  CLI11_PARSE(app, argc, argv);

  try {
    const ExperimentConfig cfg = common.config();

    if (*gen) {
      const std::size_t n = pick_n(cfg, n_opt);
      const Instance inst = make_instance(cfg, n, task_seed(cfg.base_seed, 0, 0));
      write_edge_list(common.out("graph.edges"), inst.graph);
      write_text(common.out("diagnostics.json"),
                 to_json(diagnostics(inst.problem.interactions(), inst.graph, &inst.problem.covariates())));
      std::cout << "n=" << n << " edges=" << inst.graph.n_edges() << '\n';
    } else if (*sample) {
      const std::size_t n = pick_n(cfg, n_opt);
      const Instance inst = make_instance(cfg, n, task_seed(cfg.base_seed, 0, 0));
      write_edge_list(common.out("graph.edges"), inst.graph);
      auto cov = open_out(common.out("covariates.csv"));
      write_covariates_csv(cov, inst.problem.covariates());
      auto spins = open_out(common.out("spins.csv"));
      write_spins_csv(spins, inst.problem.spins());
      write_text(common.out("truth.json"), params_json(inst.truth));
      write_text(common.out("diagnostics.json"),
                 to_json(diagnostics(inst.problem.interactions(), inst.graph, &inst.problem.covariates())));
      std::cout << "n=" << n << " edges=" << inst.graph.n_edges() << '\n';
    } else if (*fitc) {
      const Graph g = read_edge_list(fs::path(edges_path));
      CovariateMatrix z = read_covariates_csv(fs::path(cov_path));
      std::ifstream sin(spins_path);
      auto rows = read_spins_csv(sin);
      if (rows.empty()) throw Error(ErrorKind::Parse, "spin file is empty");
      const PseudoLikelihoodProblem pb(scale_adjacency(g), std::move(z), std::move(rows.front()));

      SolverConfig solver;
      solver.tau = cfg.tau;
      solver.delta_tol = cfg.delta_tol;
      solver.max_iters = cfg.max_iters;
      if (fixed_zero_beta) solver.fixed_beta = 0.0;

      if (lambda_opt) {
        solver.lambda = *lambda_opt;
        const FitResult r = fit(pb, solver);
        nlohmann::json j = nlohmann::json::parse(params_json(r.gamma_hat));
        j["lambda"] = *lambda_opt;
        j["converged"] = r.converged;
        j["n_iters"] = r.n_iters;
        j["kkt_beta"] = r.kkt.beta_resid;
        j["kkt_theta"] = r.kkt.theta_max_resid;
        write_text(common.out("fit.json"), j.dump(2));
        std::cout << "converged=" << r.converged << " df=" << degrees_of_freedom(r.gamma_hat) << '\n';
      } else {
        PathOptions opts;
        opts.scaling = cfg.bic;
        const PathResult p = solution_path(pb, instantiate(cfg.grid, pb.n(), pb.d()), solver, opts);
        auto out = open_out(common.out("path.csv"));
        write_path_csv(out, p);
        const Selection sel = select(p);
        nlohmann::json j = nlohmann::json::parse(params_json(sel.gamma_tilde));
        j["lambda_hat"] = sel.lambda_hat;
        write_text(common.out("selected.json"), j.dump(2));
        std::cout << "lambda_hat=" << format_double(sel.lambda_hat) << " df=" << degrees_of_freedom(sel.gamma_tilde)
                  << '\n';
      }
    } else if (*path) {
      const auto paths = run_solution_path_experiment(cfg, common.thread_count());
      for (const auto& sp : paths) {
        auto out = open_out(common.out("path_n" + std::to_string(sp.n) + "_rep" + std::to_string(sp.rep) + ".csv"));
        write_path_csv(out, sp.path);
      }
      write_text(common.out("manifest.json"), run_manifest_json(cfg, "path"));
      std::cout << "wrote " << paths.size() << " paths\n";
    } else if (*experiment) {
      const ErrorTable table = run_error_experiment(cfg, common.thread_count());
      auto e = open_out(common.out("errors.csv"));
      write_error_csv(e, table);
      auto a = open_out(common.out("aggregates.csv"));
      write_aggregate_csv(a, table);
      auto t = open_out(common.out("timings.csv"));
      write_timing_csv(t, table);
      write_text(common.out("manifest.json"), run_manifest_json(cfg, "error"));
      for (const auto& agg : table.aggregates) {
        std::cout << to_string(agg.method) << " n=" << agg.n << " mean_l1=" << format_double(agg.mean_l1)
                  << " mean_l2=" << format_double(agg.mean_l2) << '\n';
      }
      for (Method m : {Method::Pmpl, Method::Logistic}) {
        try {
          std::cout << to_string(m) << " rate_slope=" << format_double(rate_slope(table, m)) << '\n';
        } catch (const Error&) {
        }
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
