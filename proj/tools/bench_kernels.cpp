// Timing comparison of the parallel kernels against their serial references,
// and of the doubling-series inverse against the naive term-by-term sum.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

#include "adag/constraints.hpp"
#include "adag/kernels.hpp"
#include "adag/types.hpp"

using namespace adag;
using Clock = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  auto t0 = Clock::now();
  for (int i = 0; i < reps; ++i) fn();
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count() / reps;
}

Matrix random_matrix(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = u(rng);
  return m;
}

// Naive Neumann sum, one term at a time, to the same residual target.
Matrix naive_series_inverse(const Matrix& Bt, double s, double eps, int max_terms) {
  const Eigen::Index d = Bt.rows();
  Matrix A = Bt / s;
  Matrix D = Matrix::Identity(d, d);
  Matrix term = Matrix::Identity(d, d);
  for (int i = 1; i <= max_terms; ++i) {
    term = term * A;
    D += term;
    if (term.norm() <= eps) break;
  }
  return D;
}

}  // namespace

int main() {
  std::mt19937_64 rng(42);
  const int reps = 20;

  std::printf("gemm: serial Eigen vs chunked / OpenMP (%d threads)\n",
              kernels::threads());
  std::printf("%8s %12s %12s %10s\n", "d", "serial ms", "parallel ms", "max diff");
  for (int d : {64, 128, 256, 512}) {
    Matrix A = random_matrix(d, rng), B = random_matrix(d, rng);
    Matrix Cs, Cp;
    double ts = time_ms([&] { kernels::gemm_serial(A, B, Cs); }, reps);
    double tp = time_ms([&] { kernels::gemm(A, B, Cp); }, reps);
    std::printf("%8d %12.3f %12.3f %10.2e\n", d, ts, tp,
                (Cs - Cp).cwiseAbs().maxCoeff());
  }

  std::printf("\nseries inverse: doubling vs naive term-by-term (rho/s = 0.5)\n");
  std::printf("%8s %12s %12s %10s\n", "d", "doubling ms", "naive ms", "max diff");
  for (int d : {64, 128, 256}) {
    Matrix Bt = random_matrix(d, rng);
    Bt *= 0.5 / constraints::spectral_radius_estimate(Bt);
    constraints::ConstraintSpec spec;
    spec.s = 1.0;
    Matrix Dd, Dn;
    double td = time_ms(
        [&] { Dd = constraints::series_inverse(Bt, spec).D; }, reps);
    double tn = time_ms([&] { Dn = naive_series_inverse(Bt, 1.0, 1e-10, 8 * d); }, reps);
    std::printf("%8d %12.3f %12.3f %10.2e\n", d, td, tn,
                (Dd - Dn).cwiseAbs().maxCoeff());
  }

  std::printf("\ngram: serial vs chunked (n=2000)\n");
  std::printf("%8s %12s %12s %10s\n", "d", "serial ms", "parallel ms", "max diff");
  for (int d : {128, 256}) {
    std::normal_distribution<double> g(0, 1);
    Matrix X(2000, d);
    for (int i = 0; i < X.rows(); ++i)
      for (int j = 0; j < d; ++j) X(i, j) = g(rng);
    Matrix Gs, Gp;
    double ts = time_ms([&] { kernels::gram_serial(X, Gs); }, reps);
    double tp = time_ms([&] { kernels::gram(X, Gp); }, reps);
    std::printf("%8d %12.3f %12.3f %10.2e\n", d, ts, tp,
                (Gs - Gp).cwiseAbs().maxCoeff());
  }
  return 0;
}
