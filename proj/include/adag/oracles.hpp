#pragma once

#include <functional>
#include <vector>

#include "adag/types.hpp"

// Deliberately naive reference computations used by the test suite. Nothing
// here shares code with the fast evaluators it is checked against.
namespace adag::oracles {

/// Power-series coefficients c_0 + sum_{i=1..K} c_i x^i with c_i > 0.
struct CoefficientSeq {
  double c0 = 0;
  std::vector<double> c;  // c[0] = c_1, ..., c[K-1] = c_K
  int order() const { return static_cast<int>(c.size()); }

  static CoefficientSeq exponential(int K);
  static CoefficientSeq log_inverse(double s, int K);   // 1/(i s^i)
  static CoefficientSeq inverse_power(int n, double s, int K);  // binom(n+i-1,i)/s^i
  /// Coefficients of the term-by-term n-th derivative of this series.
  CoefficientSeq derivative(int n) const;
  CoefficientSeq sum(const CoefficientSeq& other) const;
  CoefficientSeq product(const CoefficientSeq& other) const;
};

/// c0*d + sum_i c_i tr(Bt^i) by direct repeated multiplication.
double truncated_trace(const CoefficientSeq& coeffs, const Matrix& Bt);

/// Central finite differences of a matrix functional, entry by entry.
Matrix finite_diff_gradient(const std::function<double(const Matrix&)>& h,
                            const Matrix& Bt, double step = 1e-6);

/// Dense finite-difference Hessian of a matrix functional at Bt (d^2 x d^2,
/// column-major vec ordering).
Matrix finite_diff_hessian(const std::function<double(const Matrix&)>& h,
                           const Matrix& Bt, double step = 1e-4);

/// Pattern-level nilpotency check: (pattern of Bt)^d == 0.
bool nilpotency_acyclic(const Matrix& Bt);

/// K_{d,d} with K vec(A) = vec(A^T).
Matrix commutation_matrix(int d);

}  // namespace adag::oracles
