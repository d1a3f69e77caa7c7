#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "adag/constraints.hpp"
#include "adag/experiment.hpp"
#include "adag/graphs.hpp"
#include "adag/io.hpp"
#include "adag/metrics.hpp"
#include "adag/optimizer.hpp"
#include "adag/oracles.hpp"
#include "adag/sem.hpp"

namespace fs = std::filesystem;
using namespace adag;

namespace {

void write_trace_csv(const fs::path& path, const optimizer::LearnResult& res) {
  std::ofstream out(path);
  out << "outer,inner_checkpoint,mu,s_used,score,h,l1,objective\n";
  for (const auto& c : res.checkpoints) {
    out << c.outer << ',' << c.inner << ',' << io::format_double(c.mu) << ','
        << io::format_double(c.s_used) << ',' << io::format_double(c.score) << ','
        << io::format_double(c.h) << ',' << io::format_double(c.l1) << ','
        << io::format_double(c.objective) << '\n';
  }
}

int cmd_gen(const std::string& family, int d, double k, const std::string& noise,
            int n, std::uint64_t seed, const std::string& out_dir, bool do_normalize,
            double wlo, double whi) {
  graphs::GraphGenSpec spec;
  spec.family = graphs::family_from_string(family);
  spec.d = d;
  spec.k = k;
  spec.weight_low = wlo;
  spec.weight_high = whi;
  spec.seed = mix_seed(seed, 1);
  auto dag = graphs::generate_dag(spec);

  auto ds = sem::sample_sem(dag, n, sem::noise_from_string(noise), mix_seed(seed, 2));
  if (do_normalize) ds = sem::normalize(ds);

  fs::create_directories(out_dir);
  io::write_matrix_csv(fs::path(out_dir) / "dag.csv", dag.data);
  io::write_edge_list(fs::path(out_dir) / "edges.csv", dag);
  io::write_dataset(fs::path(out_dir) / "data.csv", ds);
  std::cout << "wrote " << out_dir << "/dag.csv, edges.csv, data.csv, data.json\n";
  return 0;
}

int cmd_learn(const std::string& data_path, const std::string& truth_path,
              const std::string& preset, const std::string& out_dir,
              double mask_threshold, bool do_normalize,
              optimizer::PathFollowConfig opt) {
  auto ds = io::read_dataset(data_path);
  if (do_normalize) ds = sem::normalize(ds);

  std::optional<sem::EdgeMask> mask;
  if (mask_threshold > 0) mask = sem::correlation_mask(ds, mask_threshold);

  opt.constraint = experiment::preset_constraint(preset);
  auto res = optimizer::path_follow(ds, opt, mask ? &*mask : nullptr);

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    io::write_matrix_csv(fs::path(out_dir) / "B_cont.csv", res.B_cont.data);
    io::write_matrix_csv(fs::path(out_dir) / "B_bin.csv", res.B_bin);
    write_trace_csv(fs::path(out_dir) / "trace.csv", res);
  }

  std::cout << "learned " << res.B_bin.sum() << " edges in " << res.wall_time_s
            << " s (s_resets=" << res.s_resets << ", converged=" << res.converged
            << ")\n";
  if (!res.converged) std::cout << "warning: " << res.abort_reason << "\n";

  if (!truth_path.empty()) {
    auto truth = graphs::pattern_of(io::read_matrix_csv(truth_path));
    auto m = metrics::evaluate(res.B_bin, truth);
    std::cout << "shd=" << m.shd << " tpr=" << m.tpr << " fdr=" << m.fdr
              << " (true edges " << m.edges_true << ", est " << m.edges_est << ")\n";
    if (!out_dir.empty()) {
      std::ofstream mj(fs::path(out_dir) / "metrics.json");
      mj << "{\"shd\": " << m.shd << ", \"tpr\": " << m.tpr << ", \"fdr\": " << m.fdr
         << ", \"edges_true\": " << m.edges_true << ", \"edges_est\": " << m.edges_est
         << "}\n";
    }
  }
  return res.converged ? 0 : 1;
}

int cmd_bench(const std::string& config_path, const std::string& out_override) {
  auto cfg = experiment::load_config(config_path);
  if (!out_override.empty()) cfg.out_dir = out_override;
  auto res = experiment::run_experiment(cfg);
  std::cout << experiment::summary_json_text(res);
  if (res.failures > 0)
    std::cerr << res.failures << " of " << cfg.replicates << " replicates failed\n";
  return res.failures;
}

int cmd_gradcheck(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim(3, 8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0;
  const char* families[] = {"exponential", "order1", "order2", "order3"};
  for (const char* name : families) {
    auto spec = experiment::preset_constraint(name);
    double fam_worst = 0;
    for (int t = 0; t < trials; ++t) {
      const int d = dim(rng);
      Matrix Bt(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) Bt(i, j) = i == j ? 0.0 : unit(rng);
      const double target = 0.4 * spec.s * unit(rng) + 0.05;
      const double rho = constraints::spectral_radius_estimate(Bt);
      if (rho > 0) Bt *= target / rho;
      auto ev = constraints::eval_constraint(spec, Bt);
      Matrix fd = oracles::finite_diff_gradient(
          [&](const Matrix& M) { return constraints::eval_constraint(spec, M).value; },
          Bt);
      const double rel = (ev.gradient - fd).cwiseAbs().maxCoeff() /
                         std::max(1e-12, fd.cwiseAbs().maxCoeff());
      fam_worst = std::max(fam_worst, rel);
    }
    std::cout << name << ": max relative gradient error " << fam_worst << "\n";
    worst = std::max(worst, fam_worst);
  }
  std::cout << (worst <= 1e-5 ? "PASS" : "FAIL") << " (threshold 1e-5)\n";
  return worst <= 1e-5 ? 0 : 1;
}

int cmd_hessian(const std::string& input, double s) {
  Matrix Bt = io::read_matrix_csv(input).cwiseAbs();
  const int d = static_cast<int>(Bt.rows());
  if (d > 12) {
    std::cerr << "hessian: d must be <= 12 for the dense construction\n";
    return 1;
  }
  const char* names[] = {"exponential", "order1", "order2"};
  for (const char* name : names) {
    auto spec = experiment::preset_constraint(name);
    spec.s = s;
    Matrix H = constraints::hessian_dense(spec, Bt);
    std::cout << name << ": spectral radius "
              << constraints::spectral_radius_estimate(H) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure learning with analytic acyclicity constraints"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random DAG and SEM dataset");
  std::string g_family = "er", g_noise = "gaussian", g_out = "data";
  int g_d = 50, g_n = 1000;
  double g_k = 2.0, g_wlo = 0.5, g_whi = 2.0;
  std::uint64_t g_seed = 0;
  bool g_norm = false;
  gen->add_option("--family", g_family, "er or sf");
  gen->add_option("--d", g_d, "node count")->required();
  gen->add_option("--k", g_k, "expected edges per node");
  gen->add_option("--noise", g_noise, "gaussian, exponential or gumbel");
  gen->add_option("--n", g_n, "sample count");
  gen->add_option("--seed", g_seed, "random seed");
  gen->add_option("--out", g_out, "output directory");
  gen->add_option("--weight-low", g_wlo, "minimum |edge weight|");
  gen->add_option("--weight-high", g_whi, "maximum |edge weight|");
  gen->add_flag("--normalize", g_norm, "normalize columns to zero mean, unit std");

  // learn
  auto* learn = app.add_subcommand("learn", "learn a DAG from one dataset");
  std::string l_data, l_truth, l_preset = "order2", l_out = "run";
  double l_mask = 0.0;
  bool l_norm = false;
  optimizer::PathFollowConfig l_opt;
  std::string l_step = "adam";
  learn->add_option("--data", l_data, "dataset CSV (n rows, d columns)")->required();
  learn->add_option("--truth", l_truth, "ground-truth adjacency CSV for metrics");
  learn->add_option("--preset", l_preset, "exponential or order1..order4");
  learn->add_option("--out", l_out, "output directory");
  learn->add_option("--mask-threshold", l_mask, "correlation mask threshold (0 = off)");
  learn->add_flag("--normalize", l_norm, "normalize before learning");
  learn->add_option("--gamma", l_opt.gamma, "step size");
  learn->add_option("--t-inner", l_opt.T_inner, "inner steps per stage");
  learn->add_option("--lambda1", l_opt.lambda1, "l1 weight");
  learn->add_option("--omega", l_opt.omega, "edge threshold");
  learn->add_option("--step", l_step, "adam, gd or gd_adaptive");

  // bench
  auto* bench = app.add_subcommand("bench", "run a config-driven experiment");
  std::string b_config, b_out;
  bench->add_option("--config", b_config, "experiment config (JSON)")->required();
  bench->add_option("--out", b_out, "override out_dir from the config");

  // gradcheck
  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient audit");
  int gc_trials = 10;
  std::uint64_t gc_seed = 7;
  gradcheck->add_option("--trials", gc_trials, "random matrices per family");
  gradcheck->add_option("--seed", gc_seed, "random seed");

  // hessian
  auto* hess = app.add_subcommand("hessian", "Hessian spectral radii for a matrix");
  std::string h_input;
  double h_s = 1.0;
  hess->add_option("--input", h_input, "matrix CSV; absolute values are used")->required();
  hess->add_option("--s", h_s, "series scale");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen(g_family, g_d, g_k, g_noise, g_n, g_seed, g_out, g_norm, g_wlo, g_whi);
    if (learn->parsed()) {
      l_opt.step = optimizer::step_mode_from_string(l_step);
      return cmd_learn(l_data, l_truth, l_preset, l_out, l_mask, l_norm, l_opt);
    }
    if (bench->parsed()) return cmd_bench(b_config, b_out);
    if (gradcheck->parsed()) return cmd_gradcheck(gc_trials, gc_seed);
    if (hess->parsed()) return cmd_hessian(h_input, h_s);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
