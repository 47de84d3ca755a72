#include "netlogit/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "netlogit/error.hpp"
#include "netlogit/format.hpp"
#include "netlogit/model.hpp"
#include "netlogit/parallel.hpp"
#include "netlogit/rng.hpp"

namespace netlogit {

using json = nlohmann::ordered_json;

namespace {

// Sub-stream tags for make_instance.
enum Stream : std::uint64_t { kGraph = 1, kCovariates = 2, kTheta = 3, kGibbs = 4 };

constexpr std::size_t kMaxGraphAttempts = 10;

}  // namespace

GraphEnsembleSpec instantiate(const EnsembleTemplate& ensemble, std::size_t n) {
  return std::visit(
      [n](const auto& t) -> GraphEnsembleSpec {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ErdosRenyiTemplate>) {
          return ErdosRenyi{n, t.mean_degree / static_cast<double>(n)};
        } else if constexpr (std::is_same_v<T, SbmTemplate>) {
          return StochasticBlock{n, t.proportions, t.base};
        } else {
          return FixedEdgeList{t.path};
        }
      },
      ensemble);
}

LambdaGrid instantiate(const GridSpec& grid, std::size_t n, std::size_t d) {
  return std::visit(
      [n, d](const auto& g) -> LambdaGrid {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, GeometricGrid>) {
          return LambdaGrid::geometric(g.lo, g.hi, g.count);
        } else if constexpr (std::is_same_v<T, ExplicitGrid>) {
          return LambdaGrid::explicit_values(g.values);
        } else {
          return LambdaGrid::theory_scaled(g.deltas, n, d);
        }
      },
      grid);
}

std::string_view to_string(Method method) noexcept { return method == Method::Pmpl ? "pmpl" : "logistic"; }

void ExperimentConfig::validate() const {
  auto bad = [](const std::string& why) { throw Error(ErrorKind::InvalidArgument, why); };
  if (n_list.empty()) bad("n_list is empty");
  for (std::size_t k = 0; k < n_list.size(); ++k) {
    if (n_list[k] == 0) bad("network sizes must be positive");
    if (k > 0 && n_list[k] <= n_list[k - 1]) bad("n_list must be strictly increasing");
  }
  if (d == 0) bad("d must be positive");
  if (s > d) bad("s must not exceed d");
  if (reps == 0) bad("reps must be positive");
  if (!std::isfinite(beta_true)) bad("beta_true must be finite");
  if (const auto* shell = std::get_if<UniformShell>(&signal); shell && !(shell->lo > 0.0 && shell->lo <= shell->hi)) {
    bad("signal shell needs 0 < lo <= hi");
  }
  if (const auto* ex = std::get_if<ExplicitTheta>(&signal); ex && static_cast<std::size_t>(ex->values.size()) != s) {
    bad("explicit signal must have length s");
  }
  SolverConfig solver;
  solver.tau = tau;
  solver.delta_tol = delta_tol;
  solver.validate();
}

ExperimentConfig desk_error_preset(bool sbm) {
  ExperimentConfig c;
  if (sbm) c.ensemble = SbmTemplate{{0.5, 0.5}, {{10.0, 5.0}, {5.0, 10.0}}};
  return c;
}

ExperimentConfig full_error_preset(bool sbm) {
  ExperimentConfig c = desk_error_preset(sbm);
  c.reps = 200;
  return c;
}

ExperimentConfig full_path_preset(bool sbm, bool wide) {
  ExperimentConfig c;
  c.ensemble = sbm ? EnsembleTemplate{SbmTemplate{{0.5, 0.5}, {{4.0, 8.0}, {8.0, 4.0}}}}
                   : EnsembleTemplate{ErdosRenyiTemplate{5.0}};
  c.n_list = {1200};
  c.d = wide ? 600 : 200;
  c.s = wide ? 10 : 5;
  c.reps = 1;
  c.comparison = Comparison::Pmpl;
  return c;
}

// ---------------------------------------------------------------------------
// JSON config

namespace {

[[noreturn]] void parse_fail(const std::string& why) { throw Error(ErrorKind::Parse, "experiment config: " + why); }

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

EnsembleTemplate ensemble_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "erdos_renyi") return ErdosRenyiTemplate{get_or(j, "mean_degree", 5.0)};
  if (kind == "sbm") {
    return SbmTemplate{j.at("proportions").get<std::vector<double>>(),
                       j.at("base").get<std::vector<std::vector<double>>>()};
  }
  if (kind == "edge_list") return EdgeListTemplate{j.at("path").get<std::string>()};
  parse_fail("unknown ensemble kind '" + kind + "'");
}

json ensemble_to_json(const EnsembleTemplate& e) {
  return std::visit(
      [](const auto& t) -> json {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ErdosRenyiTemplate>) {
          return {{"kind", "erdos_renyi"}, {"mean_degree", t.mean_degree}};
        } else if constexpr (std::is_same_v<T, SbmTemplate>) {
          return {{"kind", "sbm"}, {"proportions", t.proportions}, {"base", t.base}};
        } else {
          return {{"kind", "edge_list"}, {"path", t.path.string()}};
        }
      },
      e);
}

GridSpec grid_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "geometric") {
    return GeometricGrid{get_or(j, "lo", 0.001), get_or(j, "hi", 0.1), get_or<std::size_t>(j, "count", 100)};
  }
  if (kind == "explicit") return ExplicitGrid{j.at("values").get<std::vector<double>>()};
  if (kind == "theory_scaled") return TheoryGrid{j.at("deltas").get<std::vector<double>>()};
  parse_fail("unknown grid kind '" + kind + "'");
}

json grid_to_json(const GridSpec& g) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GeometricGrid>) {
          return {{"kind", "geometric"}, {"lo", v.lo}, {"hi", v.hi}, {"count", v.count}};
        } else if constexpr (std::is_same_v<T, ExplicitGrid>) {
          return {{"kind", "explicit"}, {"values", v.values}};
        } else {
          return {{"kind", "theory_scaled"}, {"deltas", v.deltas}};
        }
      },
      g);
}

Comparison comparison_from_string(const std::string& s) {
  if (s == "pmpl") return Comparison::Pmpl;
  if (s == "logistic") return Comparison::Logistic;
  if (s == "both") return Comparison::Both;
  parse_fail("unknown comparison '" + s + "'");
}

std::string comparison_to_string(Comparison c) {
  switch (c) {
    case Comparison::Pmpl: return "pmpl";
    case Comparison::Logistic: return "logistic";
    case Comparison::Both: return "both";
  }
  return "both";
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  ExperimentConfig c;
  try {
    const json j = json::parse(json_text);
    if (!j.is_object()) parse_fail("top level must be an object");
    if (j.contains("preset")) {
      const auto preset = j.at("preset").get<std::string>();
      if (preset == "desk_er") {
        c = desk_error_preset(false);
      } else if (preset == "desk_sbm") {
        c = desk_error_preset(true);
      } else if (preset == "full_er") {
        c = full_error_preset(false);
      } else if (preset == "full_sbm") {
        c = full_error_preset(true);
      } else if (preset == "path_er") {
        c = full_path_preset(false, false);
      } else if (preset == "path_sbm") {
        c = full_path_preset(true, false);
      } else if (preset == "path_er_wide") {
        c = full_path_preset(false, true);
      } else if (preset == "path_sbm_wide") {
        c = full_path_preset(true, true);
      } else {
        parse_fail("unknown preset '" + preset + "'");
      }
    }
    if (j.contains("ensemble")) c.ensemble = ensemble_from_json(j.at("ensemble"));
    c.n_list = get_or(j, "n_list", c.n_list);
    c.d = get_or(j, "d", c.d);
    c.s = get_or(j, "s", c.s);
    c.beta_true = get_or(j, "beta_true", c.beta_true);
    if (j.contains("covariate")) {
      const auto& cj = j.at("covariate");
      const auto kind = cj.at("kind").get<std::string>();
      if (kind == "gaussian_ar") {
        c.covariate.kind = GaussianAR{get_or(cj, "rho", 0.2)};
      } else if (kind == "gaussian_identity") {
        c.covariate.kind = GaussianIdentity{};
      } else if (kind == "file") {
        c.covariate.kind = CovariatesFromFile{cj.at("path").get<std::string>()};
      } else {
        parse_fail("unknown covariate kind '" + kind + "'");
      }
    }
    if (j.contains("theta")) {
      const auto& tj = j.at("theta");
      const auto kind = tj.at("kind").get<std::string>();
      if (kind == "uniform_shell") {
        c.signal = UniformShell{get_or(tj, "lo", 0.5), get_or(tj, "hi", 1.0)};
      } else if (kind == "explicit") {
        const auto values = tj.at("values").get<std::vector<double>>();
        c.signal = ExplicitTheta{Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()))};
      } else {
        parse_fail("unknown theta kind '" + kind + "'");
      }
    }
    c.gibbs_iters = get_or(j, "gibbs_iters", c.gibbs_iters);
    if (j.contains("grid")) c.grid = grid_from_json(j.at("grid"));
    c.reps = get_or(j, "reps", c.reps);
    c.base_seed = get_or(j, "base_seed", c.base_seed);
    if (j.contains("comparison")) c.comparison = comparison_from_string(j.at("comparison").get<std::string>());
    if (j.contains("solver")) {
      const auto& sj = j.at("solver");
      c.tau = get_or(sj, "tau", c.tau);
      c.delta_tol = get_or(sj, "delta_tol", c.delta_tol);
      c.max_iters = get_or(sj, "max_iters", c.max_iters);
    }
    if (j.contains("bic")) {
      const auto b = j.at("bic").get<std::string>();
      if (b == "per_node") {
        c.bic = BicScaling::PerNode;
      } else if (b == "classical") {
        c.bic = BicScaling::Classical;
      } else {
        parse_fail("unknown bic scaling '" + b + "'");
      }
    }
    c.extend_to_full_shrinkage = get_or(j, "extend_to_full_shrinkage", c.extend_to_full_shrinkage);
  } catch (const json::exception& e) {
    parse_fail(e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

namespace {

json config_json(const ExperimentConfig& c) {
  json j;
  j["ensemble"] = ensemble_to_json(c.ensemble);
  j["n_list"] = c.n_list;
  j["d"] = c.d;
  j["s"] = c.s;
  j["beta_true"] = c.beta_true;
  j["covariate"] = std::visit(
      [](const auto& k) -> json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, GaussianAR>) {
          return {{"kind", "gaussian_ar"}, {"rho", k.rho}};
        } else if constexpr (std::is_same_v<T, GaussianIdentity>) {
          return {{"kind", "gaussian_identity"}};
        } else {
          return {{"kind", "file"}, {"path", k.path.string()}};
        }
      },
      c.covariate.kind);
  if (const auto* shell = std::get_if<UniformShell>(&c.signal)) {
    j["theta"] = {{"kind", "uniform_shell"}, {"lo", shell->lo}, {"hi", shell->hi}};
  } else {
    const auto& v = std::get<ExplicitTheta>(c.signal).values;
    j["theta"] = {{"kind", "explicit"}, {"values", std::vector<double>(v.data(), v.data() + v.size())}};
  }
  j["gibbs_iters"] = c.gibbs_iters;
  j["grid"] = grid_to_json(c.grid);
  j["reps"] = c.reps;
  j["base_seed"] = c.base_seed;
  j["comparison"] = comparison_to_string(c.comparison);
  j["solver"] = {{"tau", c.tau}, {"delta_tol", c.delta_tol}, {"max_iters", c.max_iters}};
  j["bic"] = c.bic == BicScaling::PerNode ? "per_node" : "classical";
  j["extend_to_full_shrinkage"] = c.extend_to_full_shrinkage;
  return j;
}

}  // namespace

std::string to_json(const ExperimentConfig& config) { return config_json(config).dump(2); }

// ---------------------------------------------------------------------------
// Pipeline

std::uint64_t task_seed(std::uint64_t base_seed, std::size_t scenario, std::size_t rep) {
  return hash64({base_seed, static_cast<std::uint64_t>(scenario), static_cast<std::uint64_t>(rep)});
}

Instance make_instance(const ExperimentConfig& config, std::size_t n, std::uint64_t seed) {
  const GraphEnsembleSpec spec = instantiate(config.ensemble, n);
  Graph graph;
  InteractionMatrix a;
  for (std::size_t attempt = 0;; ++attempt) {
    graph = generate_graph(spec, hash64({seed, kGraph, attempt}));
    if (graph.n_vertices() != n) {
      throw Error(ErrorKind::DimensionMismatch, "ensemble produced " + std::to_string(graph.n_vertices()) +
                                                    " vertices, expected " + std::to_string(n));
    }
    try {
      a = scale_adjacency(graph);
      break;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::EmptyGraph || attempt + 1 >= kMaxGraphAttempts) throw;
    }
  }

  CovariateSpec cov = config.covariate;
  cov.d = config.d;
  CovariateMatrix z = gen_covariates(cov, n, hash64({seed, kCovariates}));

  ModelParams truth;
  truth.beta = config.beta_true;
  truth.theta = gen_theta(ThetaSpec{config.d, config.s, config.signal}, hash64({seed, kTheta}));

  GibbsOptions gibbs;
  gibbs.n_iters = config.gibbs_iters;
  gibbs.scan = Scan::Random;
  gibbs.seed = hash64({seed, kGibbs});
  SpinConfiguration x = gibbs_sample(truth, a, z, gibbs);

  return Instance{n, seed, std::move(graph), std::move(truth),
                  PseudoLikelihoodProblem(std::move(a), std::move(z), std::move(x))};
}

namespace {

SolverConfig solver_for(const ExperimentConfig& config, Method method) {
  SolverConfig s;
  s.tau = config.tau;
  s.delta_tol = config.delta_tol;
  s.max_iters = config.max_iters;
  if (method == Method::Logistic) s.fixed_beta = 0.0;
  return s;
}

}  // namespace

std::vector<ScenarioPath> run_solution_path_experiment(const ExperimentConfig& config, std::size_t threads) {
  config.validate();
  const std::size_t tasks = config.n_list.size() * config.reps;
  std::vector<ScenarioPath> out(tasks);
  parallel_for(tasks, threads, [&](std::size_t task) {
    const std::size_t scenario = task / config.reps;
    const std::size_t rep = task % config.reps;
    const std::size_t n = config.n_list[scenario];
    const std::uint64_t seed = task_seed(config.base_seed, scenario, rep);
    const Instance inst = make_instance(config, n, seed);

    LambdaGrid grid = instantiate(config.grid, n, config.d);
    const SolverConfig solver = solver_for(config, Method::Pmpl);
    const double shrink = full_shrinkage_lambda(inst.problem);
    PathOptions options;
    options.scaling = config.bic;
    if (config.extend_to_full_shrinkage && shrink >= grid[0]) {
      std::vector<double> values = grid.values();
      values.insert(values.begin(), shrink * (1.0 + 1e-9));
      grid = LambdaGrid::explicit_values(std::move(values));
      // (beta0, 0) is the exact solution at the new top value; starting there
      // keeps theta at zero instead of relying on early stopping to undo the
      // first gradient step.
      Vector start = Vector::Zero(static_cast<Eigen::Index>(inst.problem.dim()));
      start[0] = beta_only_minimizer(inst.problem).value_or(0.0);
      options.init = start;
    }

    ScenarioPath& slot = out[task];
    slot.scenario = scenario;
    slot.n = n;
    slot.rep = rep;
    slot.seed = seed;
    slot.truth = inst.truth;
    slot.full_shrinkage_lambda = shrink;
    slot.path = solution_path(inst.problem, grid, solver, options);
  });
  return out;
}

namespace {

ErrorRow score(Method method, const Instance& inst, std::size_t rep, const Selection& sel, double runtime) {
  ErrorRow row;
  row.method = method;
  row.n = inst.n;
  row.rep = rep;
  row.seed = inst.seed;
  const Vector diff = sel.gamma_tilde.gamma() - inst.truth.gamma();
  row.l1_error = diff.lpNorm<1>();
  row.l2_error = diff.norm();
  const Vector theta_diff = diff.tail(diff.size() - 1);
  row.theta_l1_error = theta_diff.lpNorm<1>();
  row.theta_l2_error = theta_diff.norm();
  row.support_recovered = true;
  for (Eigen::Index j = 0; j < inst.truth.theta.size(); ++j) {
    if (inst.truth.theta[j] != 0.0 && sel.gamma_tilde.theta[j] == 0.0) row.support_recovered = false;
  }
  row.df = degrees_of_freedom(sel.gamma_tilde);
  row.lambda_hat = sel.lambda_hat;
  row.runtime_sec = runtime;
  return row;
}

}  // namespace

std::vector<ErrorAggregate> aggregate(const std::vector<ErrorRow>& rows) {
  std::map<std::pair<int, std::size_t>, std::vector<const ErrorRow*>> groups;
  for (const auto& r : rows) groups[{static_cast<int>(r.method), r.n}].push_back(&r);
  std::vector<ErrorAggregate> out;
  for (const auto& [key, members] : groups) {
    ErrorAggregate agg;
    agg.method = static_cast<Method>(key.first);
    agg.n = key.second;
    agg.count = members.size();
    const double count = static_cast<double>(members.size());
    for (const auto* r : members) {
      agg.mean_l1 += r->l1_error;
      agg.mean_l2 += r->l2_error;
    }
    agg.mean_l1 /= count;
    agg.mean_l2 /= count;
    if (members.size() > 1) {
      double ss1 = 0.0;
      double ss2 = 0.0;
      for (const auto* r : members) {
        ss1 += (r->l1_error - agg.mean_l1) * (r->l1_error - agg.mean_l1);
        ss2 += (r->l2_error - agg.mean_l2) * (r->l2_error - agg.mean_l2);
      }
      agg.sd_l1 = std::sqrt(ss1 / (count - 1.0));
      agg.sd_l2 = std::sqrt(ss2 / (count - 1.0));
    }
    out.push_back(agg);
  }
  return out;
}

ErrorTable run_error_experiment(const ExperimentConfig& config, std::size_t threads) {
  config.validate();
  std::vector<Method> methods;
  if (config.comparison != Comparison::Logistic) methods.push_back(Method::Pmpl);
  if (config.comparison != Comparison::Pmpl) methods.push_back(Method::Logistic);

  const std::size_t tasks = config.n_list.size() * config.reps;
  std::vector<std::vector<ErrorRow>> per_task(tasks);
  parallel_for(tasks, threads, [&](std::size_t task) {
    const std::size_t scenario = task / config.reps;
    const std::size_t rep = task % config.reps;
    const std::size_t n = config.n_list[scenario];
    const Instance inst = make_instance(config, n, task_seed(config.base_seed, scenario, rep));
    const LambdaGrid grid = instantiate(config.grid, n, config.d);
    PathOptions options;
    options.scaling = config.bic;
    for (Method method : methods) {
      const auto start = std::chrono::steady_clock::now();
      const PathResult path = solution_path(inst.problem, grid, solver_for(config, method), options);
      const Selection sel = select(path);
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      per_task[task].push_back(score(method, inst, rep, sel, elapsed));
    }
  });

  ErrorTable table;
  for (auto& rows : per_task) table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  std::sort(table.rows.begin(), table.rows.end(), [](const ErrorRow& a, const ErrorRow& b) {
    return std::tuple(static_cast<int>(a.method), a.n, a.rep) < std::tuple(static_cast<int>(b.method), b.n, b.rep);
  });
  table.aggregates = aggregate(table.rows);
  return table;
}

double rate_slope(const ErrorTable& table, Method method) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& agg : table.aggregates) {
    if (agg.method != method) continue;
    if (!(agg.mean_l2 > 0.0)) throw Error(ErrorKind::InsufficientData, "mean l2 error must be positive for a log fit");
    xs.push_back(std::log(static_cast<double>(agg.n)));
    ys.push_back(std::log(agg.mean_l2));
  }
  if (xs.size() < 3) throw Error(ErrorKind::InsufficientData, "rate slope needs at least 3 network sizes");
  const double k = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

void write_error_csv(std::ostream& out, const ErrorTable& table) {
  out << "method,n,rep,seed,l1_error,l2_error,theta_l1_error,theta_l2_error,support_recovered,df,lambda_hat\n";
  for (const auto& r : table.rows) {
    out << to_string(r.method) << ',' << r.n << ',' << r.rep << ',' << r.seed << ',' << format_double(r.l1_error) << ','
        << format_double(r.l2_error) << ',' << format_double(r.theta_l1_error) << ','
        << format_double(r.theta_l2_error) << ',' << (r.support_recovered ? 1 : 0) << ',' << r.df << ','
        << format_double(r.lambda_hat) << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const ErrorTable& table) {
  out << "method,n,count,mean_l1,sd_l1,mean_l2,sd_l2\n";
  for (const auto& a : table.aggregates) {
    out << to_string(a.method) << ',' << a.n << ',' << a.count << ',' << format_double(a.mean_l1) << ','
        << format_double(a.sd_l1) << ',' << format_double(a.mean_l2) << ',' << format_double(a.sd_l2) << '\n';
  }
}

void write_timing_csv(std::ostream& out, const ErrorTable& table) {
  out << "method,n,rep,runtime_sec\n";
  for (const auto& r : table.rows) {
    out << to_string(r.method) << ',' << r.n << ',' << r.rep << ',' << format_double(r.runtime_sec) << '\n';
  }
}

std::string run_manifest_json(const ExperimentConfig& config, std::string_view kind) {
  json j;
  j["kind"] = std::string(kind);
  j["version"] = NETLOGIT_VERSION;
  j["config"] = config_json(config);
  json seeds = json::array();
  for (std::size_t scenario = 0; scenario < config.n_list.size(); ++scenario) {
    for (std::size_t rep = 0; rep < config.reps; ++rep) {
      seeds.push_back({{"scenario", scenario},
                       {"n", config.n_list[scenario]},
                       {"rep", rep},
                       {"seed", task_seed(config.base_seed, scenario, rep)}});
    }
  }
  j["seeds"] = std::move(seeds);
  return j.dump(2);
}

}  // namespace netlogit
