#include "adag/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "adag/kernels.hpp"

namespace adag::optimizer {

StepMode step_mode_from_string(const std::string& s) {
  if (s == "adam") return StepMode::Adam;
  if (s == "gd") return StepMode::GradientDescent;
  if (s == "gd_adaptive") return StepMode::GradientDescentAdaptive;
  throw std::invalid_argument("unknown step mode: " + s);
}

std::string to_string(StepMode m) {
  switch (m) {
    case StepMode::Adam: return "adam";
    case StepMode::GradientDescent: return "gd";
    case StepMode::GradientDescentAdaptive: return "gd_adaptive";
  }
  return "adam";
}

void PathFollowConfig::validate() const {
  if (!(alpha > 0 && alpha < 1))
    throw std::invalid_argument("path_follow: alpha must lie in (0,1)");
  if (lambda1 < 0) throw std::invalid_argument("path_follow: lambda1 must be >= 0");
  if (gamma <= 0) throw std::invalid_argument("path_follow: gamma must be positive");
  if (T_outer < 1 || T_inner < 1)
    throw std::invalid_argument("path_follow: iteration counts must be positive");
  if (static_cast<int>(s_schedule.size()) != T_outer)
    throw std::invalid_argument("path_follow: s_schedule length must equal T_outer");
  for (double s : s_schedule)
    if (s <= 0) throw std::invalid_argument("path_follow: s_schedule entries must be positive");
  if (omega < 0) throw std::invalid_argument("path_follow: omega must be >= 0");
  if (checkpoint_every < 1)
    throw std::invalid_argument("path_follow: checkpoint_every must be >= 1");
  constraint.validate();
}

std::pair<double, Matrix> mse_score(const graphs::WeightedAdjacency& B,
                                    const sem::SemDataset& ds) {
  if (ds.X.cols() != B.d)
    throw std::invalid_argument("mse_score: dimension mismatch");
  const double n = static_cast<double>(ds.X.rows());
  Matrix R = ds.X - ds.X * B.data;
  double value = 0.5 * R.squaredNorm() / n;
  Matrix grad = -(ds.X.transpose() * R) / n;
  return {value, std::move(grad)};
}

namespace {

struct CycleEdge {
  int from, to;
};

// Some directed cycle as an edge list, or empty if the graph is acyclic.
std::vector<CycleEdge> find_cycle(const BinMatrix& adj) {
  const int d = static_cast<int>(adj.rows());
  std::vector<int> color(d, 0);
  std::vector<std::pair<int, int>> frames;  // (node, next candidate neighbor)
  std::vector<int> path;
  for (int start = 0; start < d; ++start) {
    if (color[start] != 0) continue;
    frames.clear();
    path.clear();
    frames.emplace_back(start, 0);
    path.push_back(start);
    color[start] = 1;
    while (!frames.empty()) {
      const int u = frames.back().first;
      int v = frames.back().second;
      for (; v < d; ++v)
        if (v != u && adj(u, v) && color[v] != 2) break;
      if (v >= d) {
        color[u] = 2;
        frames.pop_back();
        path.pop_back();
        continue;
      }
      frames.back().second = v + 1;
      if (color[v] == 1) {
        std::vector<CycleEdge> cycle;
        auto it = std::find(path.begin(), path.end(), v);
        for (auto p = it; p + 1 != path.end(); ++p) cycle.push_back({*p, *(p + 1)});
        cycle.push_back({path.back(), v});
        return cycle;
      }
      color[v] = 1;
      frames.emplace_back(v, 0);
      path.push_back(v);
    }
  }
  return {};
}

}  // namespace

BinMatrix threshold(const graphs::WeightedAdjacency& B, double omega) {
  if (omega < 0) throw std::invalid_argument("threshold: omega must be >= 0");
  const int d = B.d;
  BinMatrix bin(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      bin(i, j) = (i != j && std::abs(B.data(i, j)) > omega) ? 1 : 0;
  while (true) {
    auto cycle = find_cycle(bin);
    if (cycle.empty()) break;
    const CycleEdge* weakest = &cycle[0];
    for (const auto& e : cycle)
      if (std::abs(B.data(e.from, e.to)) < std::abs(B.data(weakest->from, weakest->to)))
        weakest = &e;
    bin(weakest->from, weakest->to) = 0;
  }
  return bin;
}

LearnResult path_follow(const sem::SemDataset& ds, const PathFollowConfig& cfg,
                        const sem::EdgeMask* mask) {
  cfg.validate();
  if (!ds.X.allFinite()) throw std::invalid_argument("path_follow: X has non-finite entries");
  const int d = static_cast<int>(ds.X.cols());
  if (mask && (mask->allowed.rows() != d || mask->allowed.cols() != d))
    throw std::invalid_argument("path_follow: mask dimension mismatch");

  const auto t_start = std::chrono::steady_clock::now();

  Matrix Cov;
  kernels::gram(ds.X, Cov);
  const double tr_cov = Cov.trace();

  Matrix B = Matrix::Zero(d, d);
  Matrix CB(d, d), G(d, d), M, V, B_prev;
  const double chain = cfg.paper_update_scaling ? 1.0 : 2.0;

  LearnResult res;
  double mu = cfg.mu0;
  double gamma_cur = cfg.gamma;

  auto apply_mask = [&](Matrix& X) {
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i)
        if (!mask->allowed(i, j)) X(i, j) = 0.0;
  };

  constraints::ConstraintSpec cs = cfg.constraint;

  for (int outer = 0; outer < cfg.T_outer && res.converged; ++outer) {
    const double s_sched = cfg.s_schedule[outer];
    cs.s = s_sched;
    int outer_resets = 0;
    double last_score = 0, last_h = 0;
    int steps_run = 0;
    if (cfg.step == StepMode::Adam) {
      M = Matrix::Zero(d, d);
      V = Matrix::Zero(d, d);
    }
    // backtracking state for the adaptive mode
    Matrix adapt_snapshot = B;
    double adapt_obj = std::numeric_limits<double>::infinity();

    for (int inner = 0; inner < cfg.T_inner; ++inner) {
      Matrix Bt = B.cwiseProduct(B);
      constraints::ConstraintEval ev = constraints::eval_constraint(cs, Bt);
      if (ev.resets > 0) {
        outer_resets += ev.resets;
        cs.s = ev.s_used;  // keep the enlarged scale for the rest of this outer pass
      }

      kernels::gemm(Cov, B, CB);
      const double score = 0.5 * (tr_cov - 2.0 * CB.trace() + CB.cwiseProduct(B).sum());
      const double l1 = B.cwiseAbs().sum();
      last_score = score;
      last_h = ev.value;
      if (l1 >= s_sched) res.l1_always_below_s = false;

      if (inner % cfg.checkpoint_every == 0) {
        const double obj = mu * (score + cfg.lambda1 * l1) + ev.value;
        res.checkpoints.push_back({outer, inner, mu, ev.s_used, score, ev.value, l1, obj});
        if (mask) {
          for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i)
              if (!mask->allowed(i, j))
                res.mask_violation_max =
                    std::max(res.mask_violation_max, std::abs(B(i, j)));
        }
        if (cfg.step == StepMode::GradientDescentAdaptive) {
          if (obj > adapt_obj + 1e-12) {
            B = adapt_snapshot;  // retreat, halve the step, try again
            gamma_cur *= 0.5;
            continue;
          }
          adapt_snapshot = B;
          adapt_obj = obj;
        }
      }

      // mu [grad S + lambda1 sign(B)] + chain * grad h(B o B) o B
      // subgradient convention sign(0) = 0
      G = mu * (CB - Cov +
                cfg.lambda1 * B.unaryExpr([](double x) {
                  return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
                })) +
          chain * ev.gradient.cwiseProduct(B);

      B_prev = B;
      switch (cfg.step) {
        case StepMode::Adam: {
          const int t = inner + 1;
          M = cfg.adam_beta1 * M + (1.0 - cfg.adam_beta1) * G;
          V = cfg.adam_beta2 * V + (1.0 - cfg.adam_beta2) * G.cwiseProduct(G);
          const double bc1 = 1.0 - std::pow(cfg.adam_beta1, t);
          const double bc2 = 1.0 - std::pow(cfg.adam_beta2, t);
          B -= cfg.gamma *
               ((M / bc1).array() / ((V / bc2).array().sqrt() + cfg.adam_eps)).matrix();
          break;
        }
        case StepMode::GradientDescent:
          B -= cfg.gamma * G;
          break;
        case StepMode::GradientDescentAdaptive:
          B -= gamma_cur * G;
          break;
      }
      if (mask) apply_mask(B);
      ++steps_run;

      if (!B.allFinite() || B.norm() > 1e6) {
        res.converged = false;
        res.abort_reason = "divergence at outer " + std::to_string(outer) +
                           " inner " + std::to_string(inner);
        B = B_prev;  // last finite iterate
        break;
      }
    }

    res.outer_trace.push_back({outer, mu, cs.s, last_score, last_h, steps_run, outer_resets});
    res.s_resets += outer_resets;
    mu *= cfg.alpha;
  }

  res.B_cont = graphs::WeightedAdjacency(std::move(B));
  res.B_bin = threshold(res.B_cont, cfg.omega);
  res.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return res;
}

}  // namespace adag::optimizer
