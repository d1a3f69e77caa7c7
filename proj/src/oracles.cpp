#include "adag/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adag::oracles {

CoefficientSeq CoefficientSeq::exponential(int K) {
  CoefficientSeq seq;
  seq.c0 = 1.0;
  seq.c.resize(K);
  double v = 1.0;
  for (int i = 1; i <= K; ++i) {
    v /= i;
    seq.c[i - 1] = v;
  }
  return seq;
}

CoefficientSeq CoefficientSeq::log_inverse(double s, int K) {
  CoefficientSeq seq;
  seq.c0 = 0.0;
  seq.c.resize(K);
  double spow = s;
  for (int i = 1; i <= K; ++i) {
    seq.c[i - 1] = 1.0 / (i * spow);
    spow *= s;
  }
  return seq;
}

CoefficientSeq CoefficientSeq::inverse_power(int n, double s, int K) {
  CoefficientSeq seq;
  seq.c0 = 1.0;
  seq.c.resize(K);
  double v = 1.0;
  for (int i = 1; i <= K; ++i) {
    v *= static_cast<double>(n + i - 1) / (i * s);
    seq.c[i - 1] = v;
  }
  return seq;
}

CoefficientSeq CoefficientSeq::derivative(int n) const {
  const int K = order();
  if (n < 1 || n > K) throw std::invalid_argument("derivative: order out of range");
  CoefficientSeq out;
  // falling factorial (j+n)!/j!
  auto ff = [n](int j) {
    double p = 1.0;
    for (int t = j + 1; t <= j + n; ++t) p *= t;
    return p;
  };
  out.c0 = c[n - 1] * ff(0);
  out.c.resize(K - n);
  for (int j = 1; j <= K - n; ++j) out.c[j - 1] = c[j + n - 1] * ff(j);
  return out;
}

CoefficientSeq CoefficientSeq::sum(const CoefficientSeq& other) const {
  const int K = std::min(order(), other.order());
  CoefficientSeq out;
  out.c0 = c0 + other.c0;
  out.c.resize(K);
  for (int i = 0; i < K; ++i) out.c[i] = c[i] + other.c[i];
  return out;
}

CoefficientSeq CoefficientSeq::product(const CoefficientSeq& other) const {
  const int K = std::min(order(), other.order());
  CoefficientSeq out;
  out.c0 = c0 * other.c0;
  out.c.assign(K, 0.0);
  auto get = [](const CoefficientSeq& s, int i) { return i == 0 ? s.c0 : s.c[i - 1]; };
  for (int i = 1; i <= K; ++i)
    for (int a = 0; a <= i; ++a) out.c[i - 1] += get(*this, a) * get(other, i - a);
  return out;
}

double truncated_trace(const CoefficientSeq& coeffs, const Matrix& Bt) {
  const Eigen::Index d = Bt.rows();
  double total = coeffs.c0 * static_cast<double>(d);
  Matrix P = Bt;
  for (int i = 1; i <= coeffs.order(); ++i) {
    total += coeffs.c[i - 1] * P.trace();
    if (i < coeffs.order()) P = P * Bt;
  }
  return total;
}

Matrix finite_diff_gradient(const std::function<double(const Matrix&)>& h,
                            const Matrix& Bt, double step) {
  Matrix g(Bt.rows(), Bt.cols());
  Matrix probe = Bt;
  for (Eigen::Index i = 0; i < Bt.rows(); ++i) {
    for (Eigen::Index j = 0; j < Bt.cols(); ++j) {
      const double orig = probe(i, j);
      probe(i, j) = orig + step;
      const double hp = h(probe);
      probe(i, j) = orig - step;
      const double hm = h(probe);
      probe(i, j) = orig;
      g(i, j) = (hp - hm) / (2 * step);
    }
  }
  return g;
}

Matrix finite_diff_hessian(const std::function<double(const Matrix&)>& h,
                           const Matrix& Bt, double step) {
  const Eigen::Index d = Bt.rows();
  const Eigen::Index dd = d * d;
  Matrix H(dd, dd);
  Matrix probe = Bt;
  auto bump = [&](Eigen::Index a, double v) {
    probe(a % d, a / d) += v;  // column-major vec index
  };
  for (Eigen::Index p = 0; p < dd; ++p) {
    for (Eigen::Index q = 0; q < dd; ++q) {
      bump(p, step);
      bump(q, step);
      const double hpp = h(probe);
      bump(q, -2 * step);
      const double hpm = h(probe);
      bump(p, -2 * step);
      const double hmm = h(probe);
      bump(q, 2 * step);
      const double hmp = h(probe);
      bump(p, step);
      bump(q, -step);
      H(p, q) = (hpp - hpm - hmp + hmm) / (4 * step * step);
    }
  }
  return H;
}

bool nilpotency_acyclic(const Matrix& Bt) {
  const int d = static_cast<int>(Bt.rows());
  // 0/1 pattern with boolean arithmetic sidesteps magnitude overflow
  BinMatrix P(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) P(i, j) = Bt(i, j) != 0.0 ? 1 : 0;
  auto bool_mul = [d](const BinMatrix& A, const BinMatrix& B) {
    BinMatrix C = BinMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k)
        if (A(i, k))
          for (int j = 0; j < d; ++j)
            if (B(k, j)) C(i, j) = 1;
    return C;
  };
  int e = 1;
  while (e < d) {
    P = bool_mul(P, P);
    e *= 2;
  }
  return P.isZero();
}

Matrix commutation_matrix(int d) {
  Matrix K = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) K(i + j * d, j + i * d) = 1.0;
  return K;
}

}  // namespace adag::oracles
