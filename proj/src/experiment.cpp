#include "adag/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "adag/io.hpp"
#include "adag/kernels.hpp"

namespace adag::experiment {

using nlohmann::json;

bool is_preset_name(const std::string& name) {
  return name == "exponential" || name == "exp" || name == "order1" ||
         name == "order2" || name == "order3" || name == "order4";
}

constraints::ConstraintSpec preset_constraint(const std::string& name) {
  constraints::ConstraintSpec spec;
  if (name == "exponential" || name == "exp") {
    spec.family = constraints::ConstraintFamily::Exponential;
  } else if (name == "order1") {
    spec.family = constraints::ConstraintFamily::LogDet;
  } else if (name == "order2" || name == "order3" || name == "order4") {
    spec.family = constraints::ConstraintFamily::InversePower;
    spec.order = name.back() - '1';  // order2 -> 1, order3 -> 2, order4 -> 3
  } else {
    throw std::invalid_argument("unknown constraint preset: " + name);
  }
  return spec;
}

void ExperimentConfig::validate() const {
  if (replicates < 1) throw std::invalid_argument("config: replicates must be >= 1");
  if (n_samples < 1) throw std::invalid_argument("config: n_samples must be >= 1");
  if (!is_preset_name(preset))
    throw std::invalid_argument("config: unknown constraint preset " + preset);
  if (mask_threshold && !(*mask_threshold > 0 && *mask_threshold < 1))
    throw std::invalid_argument("config: mask_threshold must lie in (0,1)");
}

namespace {

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return it.key() == k;
        }) == allowed.end())
      throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
  }
}

void parse_graph(const json& g, graphs::GraphGenSpec& spec) {
  require_keys(g, "graph", {"family", "d", "k", "weight_low", "weight_high", "seed"});
  if (g.contains("family")) spec.family = graphs::family_from_string(g["family"]);
  if (g.contains("d")) spec.d = g["d"].get<int>();
  if (g.contains("k")) spec.k = g["k"].get<double>();
  if (g.contains("weight_low")) spec.weight_low = g["weight_low"].get<double>();
  if (g.contains("weight_high")) spec.weight_high = g["weight_high"].get<double>();
  if (g.contains("seed")) spec.seed = g["seed"].get<std::uint64_t>();
}

void parse_optimizer(const json& o, optimizer::PathFollowConfig& opt) {
  require_keys(o, "optimizer",
               {"mu0", "alpha", "lambda1", "T_outer", "T_inner", "gamma", "s_schedule",
                "omega", "step", "adam_beta1", "adam_beta2", "adam_eps",
                "paper_update_scaling", "checkpoint_every"});
  if (o.contains("mu0")) opt.mu0 = o["mu0"].get<double>();
  if (o.contains("alpha")) opt.alpha = o["alpha"].get<double>();
  if (o.contains("lambda1")) opt.lambda1 = o["lambda1"].get<double>();
  if (o.contains("T_outer")) opt.T_outer = o["T_outer"].get<int>();
  if (o.contains("T_inner")) opt.T_inner = o["T_inner"].get<int>();
  if (o.contains("gamma")) opt.gamma = o["gamma"].get<double>();
  if (o.contains("s_schedule")) opt.s_schedule = o["s_schedule"].get<std::vector<double>>();
  if (o.contains("omega")) opt.omega = o["omega"].get<double>();
  if (o.contains("step")) opt.step = optimizer::step_mode_from_string(o["step"]);
  if (o.contains("adam_beta1")) opt.adam_beta1 = o["adam_beta1"].get<double>();
  if (o.contains("adam_beta2")) opt.adam_beta2 = o["adam_beta2"].get<double>();
  if (o.contains("adam_eps")) opt.adam_eps = o["adam_eps"].get<double>();
  if (o.contains("paper_update_scaling"))
    opt.paper_update_scaling = o["paper_update_scaling"].get<bool>();
  if (o.contains("checkpoint_every")) opt.checkpoint_every = o["checkpoint_every"].get<int>();
  // If T_outer shrank or grew without an explicit schedule, keep the default
  // annealing shape by truncating or padding with the last value.
  if (!o.contains("s_schedule")) {
    std::vector<double> sched{1.0, 0.9, 0.8, 0.7, 0.6};
    while (static_cast<int>(sched.size()) < opt.T_outer) sched.push_back(sched.back());
    sched.resize(opt.T_outer);
    opt.s_schedule = sched;
  }
}

void parse_constraint_overrides(const json& c, ExperimentConfig& cfg) {
  require_keys(c, "constraint",
               {"preset", "s", "eps", "xi", "max_doublings", "max_resets",
                "paper_gradient_scaling"});
  if (c.contains("preset")) cfg.preset = c["preset"].get<std::string>();
  auto spec = preset_constraint(cfg.preset);
  if (c.contains("s")) spec.s = c["s"].get<double>();
  if (c.contains("eps")) spec.eps = c["eps"].get<double>();
  if (c.contains("xi")) spec.xi = c["xi"].get<double>();
  if (c.contains("max_doublings")) spec.max_doublings = c["max_doublings"].get<int>();
  if (c.contains("max_resets")) spec.max_resets = c["max_resets"].get<int>();
  if (c.contains("paper_gradient_scaling"))
    spec.paper_gradient_scaling = c["paper_gradient_scaling"].get<bool>();
  cfg.opt.constraint = spec;
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  json doc = json::parse(text);
  ExperimentConfig cfg;
  require_keys(doc, "config",
               {"graph", "noise", "n_samples", "normalized", "mask_threshold",
                "constraint", "optimizer", "replicates", "base_seed", "out_dir"});
  if (doc.contains("graph")) parse_graph(doc["graph"], cfg.graph);
  if (doc.contains("noise")) cfg.noise = sem::noise_from_string(doc["noise"]);
  if (doc.contains("n_samples")) cfg.n_samples = doc["n_samples"].get<int>();
  if (doc.contains("normalized")) cfg.normalized = doc["normalized"].get<bool>();
  if (doc.contains("mask_threshold") && !doc["mask_threshold"].is_null())
    cfg.mask_threshold = doc["mask_threshold"].get<double>();
  if (doc.contains("constraint")) {
    if (doc["constraint"].is_string()) {
      cfg.preset = doc["constraint"].get<std::string>();
      cfg.opt.constraint = preset_constraint(cfg.preset);
    } else {
      parse_constraint_overrides(doc["constraint"], cfg);
    }
  } else {
    cfg.opt.constraint = preset_constraint(cfg.preset);
  }
  if (doc.contains("optimizer")) parse_optimizer(doc["optimizer"], cfg.opt);
  if (doc.contains("replicates")) cfg.replicates = doc["replicates"].get<int>();
  if (doc.contains("base_seed")) cfg.base_seed = doc["base_seed"].get<std::uint64_t>();
  if (doc.contains("out_dir")) cfg.out_dir = doc["out_dir"].get<std::string>();
  cfg.validate();
  cfg.opt.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

ReplicateRow run_replicate(const ExperimentConfig& cfg, int r) {
  ReplicateRow row;
  row.seed = cfg.base_seed + static_cast<std::uint64_t>(r);
  row.d = cfg.graph.d;
  row.family = graphs::to_string(cfg.graph.family);
  row.preset = cfg.preset;
  try {
    graphs::GraphGenSpec gspec = cfg.graph;
    gspec.seed = mix_seed(row.seed, 1);
    const auto truth = graphs::generate_dag(gspec);

    sem::SemDataset ds =
        sem::sample_sem(truth, cfg.n_samples, cfg.noise, mix_seed(row.seed, 2));
    if (cfg.normalized) ds = sem::normalize(ds);

    std::optional<sem::EdgeMask> mask;
    if (cfg.mask_threshold) mask = sem::correlation_mask(ds, *cfg.mask_threshold);

    optimizer::PathFollowConfig pf = cfg.opt;
    pf.constraint = cfg.opt.constraint;
    pf.seed = row.seed;
    const auto learned = optimizer::path_follow(ds, pf, mask ? &*mask : nullptr);

    row.m = metrics::evaluate(learned.B_bin, graphs::pattern_of(truth.data));
    row.wall_time_s = learned.wall_time_s;
    row.s_resets = learned.s_resets;
    row.converged = learned.converged;
  } catch (const std::exception& e) {
    row.failed = true;
    row.error = e.what();
  }
  return row;
}

namespace {

int worker_count(int replicates) {
  int hw = kernels::threads();
  return std::max(1, std::min(hw, replicates));
}

struct Stats {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double stdev = std::numeric_limits<double>::quiet_NaN();
};

Stats stats_of(const std::vector<double>& xs) {
  Stats st;
  if (xs.empty()) return st;
  double m = 0;
  for (double x : xs) m += x;
  m /= xs.size();
  st.mean = m;
  if (xs.size() == 1) {
    st.stdev = 0;
    return st;
  }
  double ss = 0;
  for (double x : xs) ss += (x - m) * (x - m);
  st.stdev = std::sqrt(ss / (xs.size() - 1));
  return st;
}

}  // namespace

std::string results_csv_text(const ExperimentResult& res) {
  std::ostringstream out;
  out << "seed,d,family,preset,shd,tpr,fdr,wall_time_s,s_resets,converged\n";
  for (const auto& row : res.rows) {
    out << row.seed << ',' << row.d << ',' << row.family << ',' << row.preset << ',';
    if (row.failed) {
      out << "nan,nan,nan";
    } else {
      out << row.m.shd << ',' << io::format_double(row.m.tpr) << ','
          << io::format_double(row.m.fdr);
    }
    out << ',' << io::format_double(row.wall_time_s) << ',' << row.s_resets << ','
        << (row.converged ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string summary_json_text(const ExperimentResult& res) {
  std::vector<double> shd, tpr, fdr, wall;
  for (const auto& row : res.rows) {
    if (row.failed) continue;
    shd.push_back(row.m.shd);
    tpr.push_back(row.m.tpr);
    fdr.push_back(row.m.fdr);
    wall.push_back(row.wall_time_s);
  }
  auto put = [](const Stats& st) {
    return json{{"mean", st.mean}, {"std", st.stdev}};
  };
  json doc = {
      {"replicates", res.rows.size()},
      {"failures", res.failures},
      {"metrics",
       {{"shd", put(stats_of(shd))},
        {"tpr", put(stats_of(tpr))},
        {"fdr", put(stats_of(fdr))},
        {"wall_time_s", put(stats_of(wall))}}},
  };
  return doc.dump(2) + "\n";
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  cfg.opt.validate();
  ExperimentResult res;
  res.rows.resize(cfg.replicates);

  const int workers = worker_count(cfg.replicates);
  if (workers <= 1) {
    for (int r = 0; r < cfg.replicates; ++r) res.rows[r] = run_replicate(cfg, r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        kernels::set_threads(1);  // replicate-level parallelism owns the cores
        for (int r = next.fetch_add(1); r < cfg.replicates; r = next.fetch_add(1))
          res.rows[r] = run_replicate(cfg, r);
      });
    }
    for (auto& t : pool) t.join();
  }

  for (const auto& row : res.rows)
    if (row.failed) ++res.failures;

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream rcsv(std::filesystem::path(cfg.out_dir) / "results.csv");
    rcsv << results_csv_text(res);
    std::ofstream sj(std::filesystem::path(cfg.out_dir) / "summary.json");
    sj << summary_json_text(res);
  }
  return res;
}

}  // namespace adag::experiment
