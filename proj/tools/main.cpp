// Command-line front end: generation, solving, benchmarking, recovery
// sweeps, modularity scoring and price-data ingestion.
#include "fpn/baselines.hpp"
#include "fpn/datagen.hpp"
#include "fpn/io.hpp"
#include "fpn/metrics.hpp"
#include "fpn/weights.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fpn;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitValidation = 2;
constexpr int kExitStalled = 3;
constexpr int kExitMaxIter = 4;

struct GlobalOpts {
  std::uint64_t seed = 0;
  fs::path out = ".";
  int threads = 1;
  bool json_logs = false;
};

void log_line(const GlobalOpts& g, const std::string& msg) {
  if (g.json_logs)
    std::cerr << json{{"level", "info"}, {"msg", msg}}.dump() << '\n';
  else
    std::cerr << msg << '\n';
}

std::string make_run_id(const std::string& command, std::uint64_t seed) {
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  std::ostringstream id;
  id << command << '-' << std::hex << ms << '-' << seed;
  return id.str();
}

void write_metadata(const GlobalOpts& g, const std::string& command, json resolved) {
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  json meta{{"schema_version", 1},
            {"command", command},
            {"run_id", make_run_id(command, g.seed)},
            {"seed", g.seed},
            {"threads", g.threads},
            {"rng_name", kRngName},
            {"code_version", kVersion},
            {"timestamp_unix_ms",
             std::chrono::duration_cast<std::chrono::milliseconds>(now).count()},
            {"resolved", std::move(resolved)}};
  std::ofstream out(g.out / "metadata.json");
  out << meta.dump(2) << '\n';
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

// Inline generation spec of the form "ba:p=200:r=1".
GraphSpec parse_gen_spec(const std::string& text, std::uint64_t seed) {
  GraphSpec spec;
  spec.seed = seed;
  std::istringstream ss(text);
  std::string token;
  if (!std::getline(ss, token, ':')) throw std::invalid_argument("empty --gen spec");
  spec.topology = topology_from_string(token);
  while (std::getline(ss, token, ':')) {
    const auto eq = token.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--gen fields must be key=value, got '" + token + "'");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "p") spec.p = std::stoi(value);
    else if (key == "r") spec.ba_degree = std::stoi(value);
    else if (key == "w") spec.weights = WeightDist::constant(std::stod(value));
    else throw std::invalid_argument("unknown --gen field '" + key + "'");
  }
  spec.validate();
  return spec;
}

json graph_spec_json(const GraphSpec& spec) {
  json w;
  if (spec.weights.kind == WeightDist::Kind::uniform)
    w = {{"dist", "uniform"}, {"lo", spec.weights.lo}, {"hi", spec.weights.hi}};
  else
    w = {{"dist", "constant"}, {"value", spec.weights.value}};
  return {{"topology", to_string(spec.topology)},
          {"p", spec.p},
          {"r", spec.ba_degree},
          {"weights", std::move(w)},
          {"seed", spec.seed}};
}

int exit_code_for(SolveStatus status) {
  switch (status) {
    case SolveStatus::kkt_satisfied: return 0;
    case SolveStatus::line_search_stalled: return kExitStalled;
    case SolveStatus::max_iter: return kExitMaxIter;
  }
  return kExitValidation;
}

SolveResult run_solver(const std::string& name, const ProblemInstance& prob,
                       const SolverConfig& cfg, const std::optional<Mat>& x0,
                       std::optional<double> ref, const InnerConfig& inner) {
  if (name == "fpn") return fpn_solve(prob, cfg, x0, ref);
  if (name == "pgd") return pgd_solve(prob, cfg, x0, ref);
  if (name == "apgd") return apgd_solve(prob, cfg, x0, ref);
  if (name == "newton-demo") return full_newton_demo(prob, cfg, x0, ref);
  if (name == "subproblem") return subproblem_exact_solve(prob, cfg, x0, inner, ref);
  throw std::invalid_argument("unknown solver '" + name + "'");
}

struct WeightFlags {
  std::string lam_file;
  double sigma = -1.0;  // <0 means "not requested"
  double weights_eps = 1e-3;
  std::string pilot = "mle";
  std::string pilot_file;
  double pilot_tol = 1e-4;
  bool dump = false;
};

Mat resolve_weights(const WeightFlags& wf, const Mat& s, const IndexSet& disconnect, json& meta) {
  const auto p = s.rows();
  if (!wf.lam_file.empty()) {
    meta["weights"] = {{"mode", "file"}, {"path", wf.lam_file}};
    return io::read_matrix_csv(wf.lam_file);
  }
  if (wf.sigma >= 0.0) {
    Mat pilot;
    if (wf.pilot == "mle") {
      pilot = mle_pilot(s, disconnect, wf.pilot_tol);
    } else if (wf.pilot == "file") {
      if (wf.pilot_file.empty()) throw std::invalid_argument("--pilot file requires --pilot-file");
      pilot = io::read_matrix_csv(wf.pilot_file);
    } else {
      throw std::invalid_argument("unknown pilot '" + wf.pilot + "'");
    }
    meta["weights"] = {{"mode", "adaptive"},
                       {"sigma", wf.sigma},
                       {"eps", wf.weights_eps},
                       {"pilot", wf.pilot},
                       {"pilot_tol", wf.pilot_tol}};
    return adaptive_weights(pilot, wf.sigma, wf.weights_eps);
  }
  meta["weights"] = {{"mode", "zero"}};
  return Mat::Zero(p, p);
}

void add_config_flags(CLI::App* cmd, SolverConfig& cfg, std::string& config_file) {
  cmd->add_option("--config", config_file, "solver config JSON file");
  cmd->add_option("--alpha", cfg.alpha, "line-search sufficient-decrease constant");
  cmd->add_option("--beta", cfg.beta, "line-search backtracking factor");
  cmd->add_option("--eps-k", cfg.epsilon_k, "restricted-set threshold");
  cmd->add_option("--kkt-tol", cfg.kkt_tol, "stationarity certificate tolerance");
  cmd->add_option("--max-iter", cfg.max_iter, "outer iteration cap");
  cmd->add_option("--max-backtracks", cfg.max_backtracks, "line-search cap");
}

void apply_config_file(const std::string& config_file, SolverConfig& cfg, CLI::App* cmd) {
  if (config_file.empty()) return;
  SolverConfig from_file = io::read_solver_config_json(config_file);
  // Explicit command-line flags override the file.
  if (cmd->count("--alpha") == 0) cfg.alpha = from_file.alpha;
  if (cmd->count("--beta") == 0) cfg.beta = from_file.beta;
  if (cmd->count("--eps-k") == 0) cfg.epsilon_k = from_file.epsilon_k;
  if (cmd->count("--kkt-tol") == 0) cfg.kkt_tol = from_file.kkt_tol;
  if (cmd->count("--max-iter") == 0) cfg.max_iter = from_file.max_iter;
  if (cmd->count("--max-backtracks") == 0) cfg.max_backtracks = from_file.max_backtracks;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"M-matrix precision estimation under sign constraints"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "base RNG seed")->capture_default_str();
  app.add_option("--out", g.out, "output directory")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads for sweep fan-out")->capture_default_str();
  app.add_flag("--json-logs", g.json_logs, "emit log lines as JSON");

  // ---- solve ----------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "estimate a precision matrix from a covariance CSV");
  std::string s_file, e_file, x0_file, solver_name = "fpn", config_file, ref_opt_str;
  WeightFlags wf;
  SolverConfig cfg;
  InnerConfig inner;
  solve->add_option("--s", s_file, "sample covariance CSV")->required();
  solve->add_option("--lam", wf.lam_file, "weight matrix CSV");
  solve->add_option("--e", e_file, "disconnectivity pairs CSV (1-based)");
  solve->add_option("--x0", x0_file, "initial point CSV");
  solve->add_option("--solver", solver_name, "fpn|pgd|apgd|newton-demo|subproblem")
      ->capture_default_str();
  solve->add_option("--sigma", wf.sigma, "adaptive-weight sparsity level");
  solve->add_option("--weights-eps", wf.weights_eps, "adaptive-weight epsilon")->capture_default_str();
  solve->add_option("--pilot", wf.pilot, "pilot estimator: mle|file")->capture_default_str();
  solve->add_option("--pilot-file", wf.pilot_file, "pilot matrix CSV (with --pilot file)");
  solve->add_option("--pilot-tol", wf.pilot_tol, "pilot solve tolerance")->capture_default_str();
  solve->add_flag("--dump-weights", wf.dump, "write the resolved weights to weights.csv");
  solve->add_option("--ref-opt", ref_opt_str, "reference optimal objective for rel_error traces");
  solve->add_option("--inner-iters", inner.max_inner_iters, "subproblem inner iteration cap")
      ->capture_default_str();
  solve->add_option("--inner-tol", inner.inner_tol, "subproblem inner tolerance")
      ->capture_default_str();
  add_config_flags(solve, cfg, config_file);

  // ---- bench ----------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "trace solver convergence against a reference optimum");
  std::string bench_gen, bench_solvers = "fpn,pgd,apgd";
  std::string bench_s, bench_lam, bench_e;
  int bench_n = 0;
  double bench_sigma = 0.01;
  SolverConfig bench_cfg;
  std::string bench_config_file;
  bench->add_option("--gen", bench_gen, "inline instance spec, e.g. ba:p=200:r=1");
  bench->add_option("--s", bench_s, "sample covariance CSV (alternative to --gen)");
  bench->add_option("--lam", bench_lam, "weight matrix CSV (with --s)");
  bench->add_option("--e", bench_e, "disconnectivity CSV");
  bench->add_option("--n", bench_n, "sample count for --gen (default 10*p)");
  bench->add_option("--sigma", bench_sigma, "adaptive-weight sparsity for --gen")
      ->capture_default_str();
  bench->add_option("--solvers", bench_solvers, "comma-separated solver list")
      ->capture_default_str();
  add_config_flags(bench, bench_cfg, bench_config_file);

  // ---- gen ------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a synthetic instance");
  std::string topology = "ba", weight_kind = "uniform";
  int gen_p = 100, gen_r = 1, gen_n = 100;
  double w_lo = 2.0, w_hi = 5.0, w_const = 1.0;
  gen->add_option("--topology", topology, "ba|ring|grid")->capture_default_str();
  gen->add_option("--p", gen_p, "node count")->capture_default_str();
  gen->add_option("--r", gen_r, "attachment degree (ba)")->capture_default_str();
  gen->add_option("--weight", weight_kind, "uniform|constant")->capture_default_str();
  gen->add_option("--w-lo", w_lo, "uniform weight lower bound")->capture_default_str();
  gen->add_option("--w-hi", w_hi, "uniform weight upper bound")->capture_default_str();
  gen->add_option("--w-const", w_const, "constant weight value")->capture_default_str();
  gen->add_option("--n", gen_n, "number of Gaussian samples")->capture_default_str();

  // ---- recover --------------------------------------------------------
  auto* recover = app.add_subcommand("recover", "support-recovery probability sweep");
  std::string rec_topology = "ring", rec_mode = "C-matrix", rec_grid = "10,100,1000";
  int rec_p = 32, rec_r = 1, rec_seeds = 20;
  double rec_c0 = 1.0, rec_sigma = 0.01, rec_weps = 1e-3, rec_ptol = 1e-4, rec_wconst = 1.0;
  recover->add_option("--topology", rec_topology, "ba|ring|grid")->capture_default_str();
  recover->add_option("--p", rec_p, "node count")->capture_default_str();
  recover->add_option("--r", rec_r, "attachment degree (ba)")->capture_default_str();
  recover->add_option("--n-grid", rec_grid, "comma-separated sample sizes")->capture_default_str();
  recover->add_option("--seeds", rec_seeds, "realizations per sample size")->capture_default_str();
  recover->add_option("--weight-mode", rec_mode, "adaptive|C-matrix|zero")->capture_default_str();
  recover->add_option("--c0", rec_c0, "constant C entry for C-matrix mode")->capture_default_str();
  recover->add_option("--sigma", rec_sigma, "sparsity level for adaptive mode")->capture_default_str();
  recover->add_option("--weights-eps", rec_weps, "adaptive-weight epsilon")->capture_default_str();
  recover->add_option("--pilot-tol", rec_ptol, "pilot tolerance for adaptive mode")
      ->capture_default_str();
  recover->add_option("--w-const", rec_wconst, "constant graph weight")->capture_default_str();

  // ---- modularity -----------------------------------------------------
  auto* mod = app.add_subcommand("modularity", "community quality of a 0/1 adjacency matrix");
  std::string adj_file, labels_file;
  mod->add_option("--adj", adj_file, "adjacency CSV (0/1 symmetric)")->required();
  mod->add_option("--labels", labels_file, "one integer label per line")->required();

  // ---- ingest ---------------------------------------------------------
  auto* ingest = app.add_subcommand("ingest", "price CSV to log-returns and covariance");
  std::string prices_file;
  bool center = true;
  ingest->add_option("--prices", prices_file, "ticker header row, one row per day")->required();
  ingest->add_flag("--center,!--no-center", center, "subtract column means (default on)");

  CLI11_PARSE(app, argc, argv);

  try {
    fs::create_directories(g.out);

    if (*solve) {
      apply_config_file(config_file, cfg, solve);
      cfg.validate();
      const Mat s = io::read_matrix_csv(s_file);
      IndexSet e;
      if (!e_file.empty()) e = io::read_index_set_csv(e_file);
      json meta{{"s", s_file}, {"e", e_file}, {"solver", solver_name}};
      const Mat lambda = resolve_weights(wf, s, e, meta);
      const ProblemInstance prob(s, lambda, e);
      std::optional<Mat> x0;
      if (!x0_file.empty()) {
        x0 = io::read_matrix_csv(x0_file);
        cfg.init_policy = InitPolicy::user_supplied;
      }
      std::optional<double> ref;
      if (!ref_opt_str.empty()) ref = std::stod(ref_opt_str);

      const SolveResult res = run_solver(solver_name, prob, cfg, x0, ref, inner);
      io::write_matrix_csv(g.out / "solution.csv", res.X_star);
      io::write_trace_csv(g.out / "trace.csv", res.trace);
      write_json(g.out / "summary.json", io::solve_summary_json(res));
      if (wf.dump) io::write_matrix_csv(g.out / "weights.csv", lambda);
      meta["config"] = io::solver_config_to_json(cfg);
      write_metadata(g, "solve", meta);
      log_line(g, std::string("solve: ") + to_string(res.status) + " after " +
                      std::to_string(res.iterations) + " iterations");
      return exit_code_for(res.status);
    }

    if (*bench) {
      apply_config_file(bench_config_file, bench_cfg, bench);
      bench_cfg.validate();
      std::optional<ProblemInstance> prob;
      json meta;
      if (!bench_gen.empty()) {
        const GraphSpec spec = parse_gen_spec(bench_gen, g.seed);
        const GroundTruth gt = gen_precision(gen_graph(spec));
        const int n = bench_n > 0 ? bench_n : 10 * spec.p;
        const Dataset ds = sample_gaussian(gt, n, mix_seed(spec.seed, 1));
        const Mat lambda = adaptive_weights(mle_pilot(ds.S), bench_sigma);
        prob.emplace(ds.S, lambda);
        meta["instance"] = {{"gen", graph_spec_json(spec)}, {"n", n}, {"sigma", bench_sigma}};
      } else if (!bench_s.empty()) {
        const Mat s = io::read_matrix_csv(bench_s);
        IndexSet e;
        if (!bench_e.empty()) e = io::read_index_set_csv(bench_e);
        Mat lambda = bench_lam.empty() ? Mat::Zero(s.rows(), s.cols()).eval()
                                       : io::read_matrix_csv(bench_lam);
        prob.emplace(s, lambda, e);
        meta["instance"] = {{"s", bench_s}, {"lam", bench_lam}, {"e", bench_e}};
      } else {
        throw std::invalid_argument("bench requires --gen or --s");
      }

      // Reference optimum from a high-accuracy run.
      SolverConfig ref_cfg = bench_cfg;
      ref_cfg.kkt_tol = 1e-10;
      ref_cfg.max_iter = std::max(bench_cfg.max_iter, 5000);
      const SolveResult ref = fpn_solve(*prob, ref_cfg);
      if (ref.status == SolveStatus::line_search_stalled) {
        log_line(g, "bench: reference solve stalled");
        return kExitStalled;
      }
      const double fstar = ref.trace.back().objective;

      std::ofstream combined(g.out / "combined.csv");
      combined.precision(17);
      combined << "solver,iter,seconds,rel_error\n";
      json summary;
      summary["f_star"] = fstar;
      int exit_code = 0;
      std::istringstream list(bench_solvers);
      std::string name;
      while (std::getline(list, name, ',')) {
        const SolveResult res = run_solver(name, *prob, bench_cfg, std::nullopt, fstar, {});
        io::write_trace_csv(g.out / ("trace_" + name + ".csv"), res.trace);
        for (const auto& row : res.trace)
          combined << name << ',' << row.iter << ',' << row.elapsed_seconds << ','
                   << row.rel_error << '\n';
        summary["solvers"][name] = io::solve_summary_json(res);
        // The unpartitioned Newton iterate stalls by design; it does not
        // affect the exit code.
        if (name != "newton-demo" && res.status != SolveStatus::kkt_satisfied)
          exit_code = std::max(exit_code, exit_code_for(res.status));
        log_line(g, "bench: " + name + " -> " + to_string(res.status));
      }
      write_json(g.out / "summary.json", summary);
      meta["config"] = io::solver_config_to_json(bench_cfg);
      meta["solvers"] = bench_solvers;
      write_metadata(g, "bench", meta);
      return exit_code;
    }

    if (*gen) {
      GraphSpec spec;
      spec.topology = topology_from_string(topology);
      spec.p = gen_p;
      spec.ba_degree = gen_r;
      spec.seed = g.seed;
      if (weight_kind == "uniform") spec.weights = WeightDist::uniform_range(w_lo, w_hi);
      else if (weight_kind == "constant") spec.weights = WeightDist::constant(w_const);
      else throw std::invalid_argument("unknown weight kind '" + weight_kind + "'");
      spec.validate();

      const Mat a = gen_graph(spec);
      const GroundTruth gt = gen_precision(a);
      const Dataset ds = sample_gaussian(gt, gen_n, mix_seed(spec.seed, 1));
      io::write_matrix_csv(g.out / "adjacency.csv", a);
      io::write_matrix_csv(g.out / "theta.csv", gt.theta);
      io::write_matrix_csv(g.out / "sigma.csv", gt.sigma);
      io::write_index_set_csv(g.out / "support.csv", gt.support);
      io::write_matrix_csv(g.out / "samples.csv", ds.samples);
      io::write_matrix_csv(g.out / "s.csv", ds.S);
      json meta{{"spec", graph_spec_json(spec)},
                {"n", gen_n},
                {"edge_count", gt.support.edge_count()},
                {"theta_nonzeros", 2 * gt.support.edge_count() + static_cast<std::size_t>(spec.p)}};
      write_metadata(g, "gen", meta);
      log_line(g, "gen: " + std::to_string(gt.support.edge_count()) + " edges");
      return 0;
    }

    if (*recover) {
      GraphSpec spec;
      spec.topology = topology_from_string(rec_topology);
      spec.p = rec_p;
      spec.ba_degree = rec_r;
      spec.weights = WeightDist::constant(rec_wconst);
      spec.seed = g.seed;
      spec.validate();

      RecoveryOptions opt;
      opt.mode = weight_mode_from_string(rec_mode);
      opt.sigma = rec_sigma;
      opt.weights_eps = rec_weps;
      opt.pilot_tol = rec_ptol;
      opt.c0 = rec_c0;
      opt.threads = g.threads;

      std::vector<int> grid;
      std::istringstream list(rec_grid);
      std::string tok;
      while (std::getline(list, tok, ',')) grid.push_back(std::stoi(tok));
      if (grid.empty()) throw std::invalid_argument("recover: empty --n-grid");

      const auto rows = recovery_sweep(spec, opt, grid, rec_seeds);
      std::ofstream sweep(g.out / "sweep.csv");
      sweep.precision(17);
      sweep << "n,n_over_logp,success_rate\n";
      json rates = json::array();
      for (const auto& row : rows) {
        sweep << row.n << ',' << row.n_over_logp << ',' << row.success_rate << '\n';
        rates.push_back({{"n", row.n}, {"success_rate", row.success_rate}});
      }
      write_json(g.out / "summary.json", {{"rows", rates}});
      write_metadata(g, "recover",
                     json{{"spec", graph_spec_json(spec)},
                          {"mode", to_string(opt.mode)},
                          {"c0", rec_c0},
                          {"sigma", rec_sigma},
                          {"seeds", rec_seeds},
                          {"n_grid", grid},
                          {"success_zero_threshold", opt.zero_threshold}});
      return 0;
    }

    if (*mod) {
      const Mat a = io::read_matrix_csv(adj_file);
      const auto labels = io::read_labels_csv(labels_file);
      const double q = modularity(a, labels);
      std::cout.precision(17);
      std::cout << q << '\n';
      write_metadata(g, "modularity", json{{"adj", adj_file}, {"labels", labels_file}, {"Q", q}});
      return 0;
    }

    if (*ingest) {
      const auto table = io::read_price_csv(prices_file);
      const Eigen::MatrixXd returns = log_returns(table.prices);
      const Mat s = sample_covariance(returns, center);
      io::write_matrix_csv(g.out / "returns.csv", returns);
      io::write_matrix_csv(g.out / "s.csv", s);
      write_metadata(g, "ingest",
                     json{{"prices", prices_file},
                          {"tickers", table.tickers},
                          {"days", table.prices.rows()},
                          {"centered", center}});
      return 0;
    }
  } catch (const std::exception& ex) {
    log_line(g, std::string("error: ") + ex.what());
    return kExitValidation;
  }
  return kExitValidation;
}
