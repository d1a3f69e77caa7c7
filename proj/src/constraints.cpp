#include "adag/constraints.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "adag/kernels.hpp"

namespace adag::constraints {

int ConstraintSpec::constraint_order() const {
  return family == ConstraintFamily::InversePower ? order + 1 : 1;
}

double ConstraintSpec::xi_effective() const {
  return xi > 0 ? xi : 0.1 * constraint_order();
}

void ConstraintSpec::validate() const {
  if (s <= 0) throw std::invalid_argument("ConstraintSpec: s must be positive");
  if (eps <= 0) throw std::invalid_argument("ConstraintSpec: eps must be positive");
  if (family == ConstraintFamily::InversePower && order < 1)
    throw std::invalid_argument("ConstraintSpec: InversePower order must be >= 1");
  if (max_resets < 1) throw std::invalid_argument("ConstraintSpec: max_resets must be >= 1");
}

ConstraintFamily family_from_string(const std::string& s) {
  if (s == "exponential" || s == "exp") return ConstraintFamily::Exponential;
  if (s == "logdet") return ConstraintFamily::LogDet;
  if (s == "invpow" || s == "inversepower") return ConstraintFamily::InversePower;
  throw std::invalid_argument("unknown constraint family: " + s);
}

std::string to_string(ConstraintFamily f) {
  switch (f) {
    case ConstraintFamily::Exponential: return "exponential";
    case ConstraintFamily::LogDet: return "logdet";
    case ConstraintFamily::InversePower: return "invpow";
  }
  return "logdet";
}

double spectral_radius_estimate(const Matrix& M) {
  Matrix G = M.transpose() * M;
  Eigen::SelfAdjointEigenSolver<Matrix> es(G, Eigen::EigenvaluesOnly);
  const double lmax = es.eigenvalues().maxCoeff();
  return lmax > 0 ? std::sqrt(lmax) : 0.0;
}

SeriesInverseResult series_inverse(const Matrix& Bt, const ConstraintSpec& spec,
                                   std::vector<double>* residual_trace) {
  spec.validate();
  if (Bt.rows() != Bt.cols())
    throw std::invalid_argument("series_inverse: matrix must be square");
  if (!Bt.allFinite())
    throw std::invalid_argument("series_inverse: non-finite entries");

  const Eigen::Index d = Bt.rows();
  // The 2d cap is meant for large problems; a floor keeps the series long
  // enough to actually reach eps at small d.
  const int max_k =
      spec.max_doublings > 0 ? spec.max_doublings : std::max(64, 2 * static_cast<int>(d));
  const Matrix I = Matrix::Identity(d, d);

  double rho_hat = -1.0;  // computed lazily on the first reset
  SeriesInverseResult out;

  for (int attempt = 0; attempt <= spec.max_resets; ++attempt) {
    double s = spec.s;
    if (attempt > 0) {
      if (rho_hat < 0) rho_hat = spectral_radius_estimate(Bt);
      // scale doubles per retry so the scaled radius shrinks geometrically;
      // any finite input converges within a couple of attempts
      s = (std::max(spec.s, rho_hat) + spec.xi_effective()) *
          std::ldexp(1.0, attempt - 1);
    }

    Matrix A = Bt / s;
    Matrix D = I + A;
    Matrix W = A;
    Matrix Wsq, tmp;
    int k = 1;
    int folds = 0;
    double res = 0;
    bool converged = false;
    if (residual_trace) residual_trace->clear();

    while (true) {
      kernels::gemm(W, W, Wsq);  // Wsq = (Bt/s)^{2k}; equals I - D (I - Bt/s)
      res = Wsq.norm();
      if (residual_trace) residual_trace->push_back(res);
      if (!std::isfinite(res)) break;
      if (res <= spec.eps) {
        converged = true;
        break;
      }
      if (k >= max_k) break;
      kernels::gemm(D, Wsq, tmp);  // L_{2t} = L_t + (Bt/s)^t L_t
      D += tmp;
      W.swap(Wsq);
      k *= 2;
      ++folds;
    }

    if (converged) {
      out.D = std::move(D);
      out.s_used = s;
      out.converged = true;
      out.residual = res;
      out.doublings = folds;
      out.resets = attempt;
      return out;
    }
  }
  throw std::runtime_error("series_inverse: no convergence after " +
                           std::to_string(spec.max_resets) + " scale resets");
}

Matrix expm(const Matrix& M, int* squarings) {
  const Eigen::Index d = M.rows();
  const double norm1 = M.cwiseAbs().rowwise().sum().maxCoeff();  // bounds rho(M)
  int m = 0;
  if (norm1 > 1.0) m = static_cast<int>(std::ceil(std::log2(norm1)));
  Matrix A = M / std::ldexp(1.0, m);

  Matrix T = Matrix::Identity(d, d) + A;
  Matrix term = A, next;
  for (int j = 2; j <= 64; ++j) {
    kernels::gemm(term, A, next);
    term = next / static_cast<double>(j);
    T += term;
    if (term.norm() <= 1e-16 * std::max(1.0, T.norm())) break;
  }
  Matrix sq;
  for (int i = 0; i < m; ++i) {
    kernels::gemm(T, T, sq);
    T.swap(sq);
  }
  if (squarings) *squarings = m;
  return T;
}

namespace {

double log_det(const Matrix& M) {
  Eigen::PartialPivLU<Matrix> lu(M);
  const auto& diag = lu.matrixLU().diagonal();
  double ld = 0;
  double sign = lu.permutationP().determinant();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (diag(i) == 0.0) return -std::numeric_limits<double>::infinity();
    if (diag(i) < 0) sign = -sign;
    ld += std::log(std::abs(diag(i)));
  }
  if (sign <= 0)
    throw std::runtime_error("log_det: matrix has non-positive determinant");
  return ld;
}

}  // namespace

ConstraintEval eval_constraint(const ConstraintSpec& spec, const Matrix& Bt) {
  spec.validate();
  const Eigen::Index d = Bt.rows();
  ConstraintEval out;

  if (spec.family == ConstraintFamily::Exponential) {
    int m = 0;
    Matrix E = expm(Bt, &m);
    out.value = E.trace() - static_cast<double>(d);
    out.gradient = E.transpose();
    out.s_used = spec.s;
    out.converged = true;
    out.doublings = m;
    out.resets = 0;
    return out;
  }

  SeriesInverseResult si = series_inverse(Bt, spec);
  const double s = si.s_used;
  out.s_used = s;
  out.converged = si.converged;
  out.doublings = si.doublings;
  out.resets = si.resets;

  if (spec.family == ConstraintFamily::LogDet) {
    out.value = -log_det(Matrix::Identity(d, d) - Bt / s);
    out.gradient = si.D.transpose() / s;
    return out;
  }

  // InversePower(n): value from D^n, gradient from D^{n+1}.
  const int n = spec.order;
  Matrix P = si.D, next;
  for (int i = 1; i < n; ++i) {
    kernels::gemm(P, si.D, next);
    P.swap(next);
  }
  out.value = P.trace() - static_cast<double>(d);
  kernels::gemm(P, si.D, next);  // D^{n+1}
  if (spec.paper_gradient_scaling) {
    out.gradient = static_cast<double>(n) * next.transpose() / std::pow(s, n + 1);
  } else {
    out.gradient = (static_cast<double>(n) / s) * next.transpose();
  }
  return out;
}

std::vector<double> family_coefficients(const ConstraintSpec& spec, int K) {
  std::vector<double> c(static_cast<std::size_t>(K) + 1, 0.0);
  switch (spec.family) {
    case ConstraintFamily::Exponential: {
      double v = 1.0;
      for (int i = 1; i <= K; ++i) {
        v /= i;
        c[i] = v;  // 1/i!
      }
      break;
    }
    case ConstraintFamily::LogDet: {
      double spow = spec.s;
      for (int i = 1; i <= K; ++i) {
        c[i] = 1.0 / (i * spow);  // 1/(i s^i)
        spow *= spec.s;
      }
      break;
    }
    case ConstraintFamily::InversePower: {
      const int n = spec.order;
      double v = 1.0;
      for (int i = 1; i <= K; ++i) {
        v *= static_cast<double>(n + i - 1) / (i * spec.s);  // binom(n+i-1, i)/s^i
        c[i] = v;
      }
      break;
    }
  }
  return c;
}

namespace {

// Applies the commutation permutation: out.row(i + j d) = in.row(j + i d).
Matrix commutation_apply(const Matrix& in, int d) {
  Matrix out(in.rows(), in.cols());
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) out.row(i + j * d) = in.row(j + i * d);
  return out;
}

}  // namespace

Matrix hessian_from_coeffs(const std::vector<double>& coeffs, const Matrix& Bt) {
  const int d = static_cast<int>(Bt.rows());
  if (d > 12) throw std::invalid_argument("hessian: dense construction limited to d <= 12");
  const int K = static_cast<int>(coeffs.size()) - 1;
  if (K < 2) throw std::invalid_argument("hessian: truncation order must be >= 2");

  std::vector<Matrix> P(K - 1);
  P[0] = Matrix::Identity(d, d);
  for (int j = 1; j <= K - 2; ++j) P[j] = P[j - 1] * Bt;

  const int dd = d * d;
  Matrix M = Matrix::Zero(dd, dd);
  Matrix term(dd, dd);
  double prev_term = 0, last_term = 0;
  for (int i = 2; i <= K; ++i) {
    term.setZero();
    const double w = i * coeffs[i];
    for (int j = 0; j <= i - 2; ++j) {
      const Matrix PjT = P[j].transpose();
      const Matrix& Q = P[i - 2 - j];
      // term += w * kron(PjT, Q)
      for (int bc = 0; bc < d; ++bc)
        for (int br = 0; br < d; ++br) {
          const double a = PjT(br, bc);
          if (a != 0.0) term.block(br * d, bc * d, d, d) += (w * a) * Q;
        }
    }
    M += term;
    prev_term = last_term;
    last_term = term.norm();
  }
  // Geometric extrapolation of the dropped tail; per the error analysis the
  // terms decay polynomial-over-exponential once i clears the transient.
  if (last_term > 0) {
    const double q = prev_term > 0 ? last_term / prev_term : 0.0;
    const double tail =
        q >= 1.0 ? std::numeric_limits<double>::infinity() : last_term * q / (1.0 - q);
    if (tail > 1e-2 * std::max(1e-300, M.norm()))
      throw std::invalid_argument(
          "hessian: truncation order K too small for the requested accuracy");
  }
  return commutation_apply(M, d);
}

Matrix hessian_dense(const ConstraintSpec& spec, const Matrix& Bt, int K) {
  spec.validate();
  const int d = static_cast<int>(Bt.rows());
  if (K == 0) K = 2 * d + 4;
  return hessian_from_coeffs(family_coefficients(spec, K), Bt);
}

}  // namespace adag::constraints
