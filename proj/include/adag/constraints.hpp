#pragma once

#include <string>
#include <vector>

#include "adag/types.hpp"

namespace adag::constraints {

enum class ConstraintFamily { Exponential, LogDet, InversePower };

/// A member of the analytic constraint family together with the numeric
/// parameters of its evaluator.
struct ConstraintSpec {
  ConstraintFamily family = ConstraintFamily::LogDet;
  int order = 1;     // power n for InversePower; ignored otherwise
  double s = 1.0;    // series scale; ignored for Exponential
  double eps = 1e-8;
  double xi = 0.0;            // reset margin; 0 selects 0.1 * constraint_order()
  int max_doublings = 0;      // cap on the series counter k; 0 selects 2d
  int max_resets = 12;
  // Reproduces the published gradient n [D^T/s]^{n+1} for InversePower, which
  // differs from the analytic derivative by the positive constant s^{-n}.
  bool paper_gradient_scaling = false;

  /// 1 for Exponential and LogDet, n+1 for InversePower(n): the position of
  /// the constraint in the derivative ladder of 1/(s-x).
  int constraint_order() const;
  double xi_effective() const;
  void validate() const;
};

struct SeriesInverseResult {
  Matrix D;          // approximates (I - Bt/s_used)^{-1}
  double s_used = 0;
  bool converged = false;
  double residual = 0;  // ||D (I - Bt/s_used) - I||_F
  int doublings = 0;    // folds performed on the final attempt
  int resets = 0;
};

struct ConstraintEval {
  double value = 0;
  Matrix gradient;   // d h / d Bt, elementwise
  double s_used = 0;
  bool converged = false;
  int doublings = 0;
  int resets = 0;
};

/// Neumann-series inverse by repeated squaring: D accumulates
/// sum_i (Bt/s)^i via L_{2t} = L_t + (Bt/s)^t L_t. If the series fails to
/// reach eps within the doubling cap, s is reset to the spectral-norm
/// estimate of Bt plus a margin that doubles on every further attempt.
/// residual_trace, when given, receives the residual after every fold.
SeriesInverseResult series_inverse(const Matrix& Bt, const ConstraintSpec& spec,
                                   std::vector<double>* residual_trace = nullptr);

/// Value and exact gradient of the acyclicity function h(Bt):
///   Exponential:      tr exp(Bt) - d,              grad exp(Bt)^T
///   LogDet:           -log det(I - Bt/s),          grad D^T / s
///   InversePower(n):  tr (I - Bt/s)^{-n} - d,      grad (n/s) [(I - Bt/s)^{-(n+1)}]^T
/// All are nonnegative on their domain and zero exactly on DAG patterns.
ConstraintEval eval_constraint(const ConstraintSpec& spec, const Matrix& Bt);

/// Dense d^2 x d^2 Hessian of tr f(Bt) truncated at series order K
/// (K = 0 selects 2d + 4). Only intended for small d.
Matrix hessian_dense(const ConstraintSpec& spec, const Matrix& Bt, int K = 0);

/// Hessian for an arbitrary coefficient sequence; coeffs[i] multiplies x^i
/// and coeffs[0] is ignored.
Matrix hessian_from_coeffs(const std::vector<double>& coeffs, const Matrix& Bt);

/// Series coefficients c_1..c_K of the family's value function, returned in
/// coeffs[1..K] (coeffs[0] holds c_0 = 0 by convention here).
std::vector<double> family_coefficients(const ConstraintSpec& spec, int K);

/// Upper estimate of the spectral radius: the largest singular value.
double spectral_radius_estimate(const Matrix& M);

/// Matrix exponential by scaling and squaring over a truncated Taylor kernel.
Matrix expm(const Matrix& M, int* squarings = nullptr);

ConstraintFamily family_from_string(const std::string& s);
std::string to_string(ConstraintFamily f);

}  // namespace adag::constraints
