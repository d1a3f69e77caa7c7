#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "adag/constraints.hpp"
#include "adag/graphs.hpp"
#include "adag/sem.hpp"
#include "adag/types.hpp"

namespace adag::optimizer {

/// Inner-step rule for the path-following loop. Adam is the default: with the
/// raw fixed-step rule the ill-conditioned MSE term needs step sizes far
/// outside the stable range to make progress within a practical T_inner.
enum class StepMode { Adam, GradientDescent, GradientDescentAdaptive };

StepMode step_mode_from_string(const std::string& s);
std::string to_string(StepMode m);

struct PathFollowConfig {
  double mu0 = 1.0;
  double alpha = 0.1;
  double lambda1 = 0.1;
  int T_outer = 5;
  int T_inner = 20000;
  double gamma = 3e-4;
  std::vector<double> s_schedule{1.0, 0.9, 0.8, 0.7, 0.6};
  double omega = 0.3;
  constraints::ConstraintSpec constraint;
  std::uint64_t seed = 0;

  StepMode step = StepMode::Adam;
  double adam_beta1 = 0.99;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  // Reproduces the published update, which folds the Hadamard chain factor 2
  // of d(B o B) into the step size.
  bool paper_update_scaling = false;
  int checkpoint_every = 100;

  void validate() const;
};

struct CheckpointRecord {
  int outer = 0;
  int inner = 0;
  double mu = 0, s_used = 0, score = 0, h = 0, l1 = 0, objective = 0;
};

struct OuterRecord {
  int outer = 0;
  double mu = 0, s_used = 0, score = 0, h = 0;
  int inner_steps = 0;
  int resets = 0;
};

struct LearnResult {
  graphs::WeightedAdjacency B_cont;
  BinMatrix B_bin;
  std::vector<OuterRecord> outer_trace;
  std::vector<CheckpointRecord> checkpoints;
  double wall_time_s = 0;
  int s_resets = 0;
  bool converged = true;  // false after a divergence abort
  bool l1_always_below_s = true;
  double mask_violation_max = 0;  // largest |B| seen on a disallowed entry
  std::string abort_reason;
};

/// Half mean squared error of X ~ X B and its gradient in B:
/// value (1/2n)||X - XB||_F^2, gradient -(1/n) X^T (X - XB).
std::pair<double, Matrix> mse_score(const graphs::WeightedAdjacency& B,
                                    const sem::SemDataset& ds);

/// Path-following minimization of mu [S(B,X) + lambda1 ||B||_1] + h(B o B),
/// shrinking mu by alpha after each outer iteration and annealing the
/// constraint scale along s_schedule. A scale reset inside the constraint
/// evaluator carries the enlarged s for the rest of the outer iteration.
/// Masked entries are zeroed after every inner step.
LearnResult path_follow(const sem::SemDataset& ds, const PathFollowConfig& cfg,
                        const sem::EdgeMask* mask = nullptr);

/// Binary adjacency with entry 1 iff |B_ij| > omega; if thresholding leaves a
/// cycle, the smallest-|weight| edge on a detected cycle is dropped until the
/// result is acyclic.
BinMatrix threshold(const graphs::WeightedAdjacency& B, double omega);

}  // namespace adag::optimizer
