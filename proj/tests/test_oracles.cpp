#include <doctest.h>

#include <cmath>
#include <random>

#include "adag/constraints.hpp"
#include "adag/oracles.hpp"
#include "test_support.hpp"

using namespace adag;
using oracles::CoefficientSeq;

TEST_CASE("truncated_trace: nilpotent input reduces to c0 d") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const int d = 4 + t % 4;
    Matrix Bt = testsup::random_dag_pattern(d, 0.5, 1.0, rng);
    auto coeffs = CoefficientSeq::exponential(d);
    CHECK(oracles::truncated_trace(coeffs, Bt) == doctest::Approx(1.0 * d).epsilon(1e-14));
  }
}

TEST_CASE("truncated_trace: exponential series on the 2-cycle hits 2 cosh(1)") {
  Matrix b(2, 2);
  b << 0, 1, 1, 0;
  auto coeffs = CoefficientSeq::exponential(30);
  CHECK(oracles::truncated_trace(coeffs, b) ==
        doctest::Approx(2.0 * std::cosh(1.0)).epsilon(1e-12));
}

TEST_CASE("truncated_trace agrees with eval_constraint across 100 random inputs") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> dim(2, 9);
  std::uniform_real_distribution<double> radius(0.05, 0.5);
  for (int t = 0; t < 100; ++t) {
    const int d = dim(rng);
    Matrix Bt = testsup::random_nonneg(d, radius(rng), rng);
    const int K = 2 * d + 8;

    constraints::ConstraintSpec spec;
    CoefficientSeq coeffs;
    switch (t % 3) {
      case 0:
        spec.family = constraints::ConstraintFamily::Exponential;
        coeffs = CoefficientSeq::exponential(40);
        break;
      case 1:
        spec.family = constraints::ConstraintFamily::LogDet;
        coeffs = CoefficientSeq::log_inverse(1.0, 4 * K);
        break;
      default:
        spec.family = constraints::ConstraintFamily::InversePower;
        spec.order = 1 + t % 2;
        coeffs = CoefficientSeq::inverse_power(spec.order, 1.0, 4 * K);
        break;
    }
    const double oracle = oracles::truncated_trace(coeffs, Bt) - coeffs.c0 * d;
    const double value = constraints::eval_constraint(spec, Bt).value;
    CHECK(std::abs(oracle - value) <= 1e-7 * (1 + std::abs(value)));
  }
}

TEST_CASE("finite_diff_gradient: trace and exp-at-zero") {
  Matrix z = Matrix::Zero(4, 4);
  Matrix g = oracles::finite_diff_gradient([](const Matrix& m) { return m.trace(); }, z);
  CHECK((g - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);

  Matrix ge = oracles::finite_diff_gradient(
      [](const Matrix& m) { return constraints::expm(m).trace(); }, z);
  CHECK((ge - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("nilpotency_acyclic: pattern-level checks") {
  Matrix tri = Matrix::Zero(4, 4);
  tri(0, 1) = tri(1, 2) = tri(0, 3) = 5.0;
  CHECK(oracles::nilpotency_acyclic(tri));
  Matrix cyc(2, 2);
  cyc << 0, 1, 1, 0;
  CHECK_FALSE(oracles::nilpotency_acyclic(cyc));
  // magnitudes do not matter
  CHECK(oracles::nilpotency_acyclic(1e8 * tri));
}

TEST_CASE("commutation_matrix: definition and involution") {
  CHECK(oracles::commutation_matrix(1) == Matrix::Identity(1, 1));

  Matrix K2 = oracles::commutation_matrix(2);
  // swaps vec indices 1 and 2, fixes 0 and 3
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 0) = expect(3, 3) = 1.0;
  expect(1, 2) = expect(2, 1) = 1.0;
  CHECK(K2 == expect);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0, 1);
  for (int d = 2; d <= 6; ++d) {
    Matrix K = oracles::commutation_matrix(d);
    CHECK((K * K - Matrix::Identity(d * d, d * d)).cwiseAbs().maxCoeff() == 0.0);
    for (int t = 0; t < 20; ++t) {
      Matrix A(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) A(i, j) = g(rng);
      Matrix vecA = Eigen::Map<Matrix>(A.data(), d * d, 1);
      Matrix At = A.transpose();
      Matrix vecAt = Eigen::Map<Matrix>(At.data(), d * d, 1);
      CHECK((K * vecA - vecAt).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("derivative ladder of the geometric series matches higher inverse powers") {
  // the n-th derivative of 1/(1 - x/s), shifted by its constant term, is
  // n!/s^n times the order-(n+1) inverse-power criterion
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> radius(0.05, 0.4);
  const double s = 1.3;
  for (int t = 0; t < 30; ++t) {
    const int d = 3 + t % 5;
    Matrix Bt = testsup::random_nonneg(d, radius(rng) * s, rng);
    const int n = 1 + t % 3;
    auto base = CoefficientSeq::inverse_power(1, s, 80 + n);
    auto deriv = base.derivative(n);
    const double lhs = oracles::truncated_trace(deriv, Bt) - deriv.c0 * d;

    constraints::ConstraintSpec spec;
    spec.family = constraints::ConstraintFamily::InversePower;
    spec.order = n + 1;
    spec.s = s;
    double nfact = 1;
    for (int i = 2; i <= n; ++i) nfact *= i;
    const double rhs = nfact / std::pow(s, n) * constraints::eval_constraint(spec, Bt).value;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
  }
}

TEST_CASE("sum and product of class-F series separate DAGs from cyclic graphs") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> radius(0.1, 0.45);
  for (int t = 0; t < 30; ++t) {
    const int d = 3 + t % 5;
    Matrix dag = testsup::random_dag_pattern(d, 0.4, 0.7, rng);
    Matrix cyc = testsup::random_cyclic(d, 0.25, 1.0, rng);
    cyc *= radius(rng) / std::max(1e-12, constraints::spectral_radius_estimate(cyc));

    auto f1 = CoefficientSeq::exponential(60);
    auto f2 = CoefficientSeq::inverse_power(1, 1.0, 60);
    for (const auto& combo : {f1.sum(f2), f1.product(f2)}) {
      for (double c : combo.c) CHECK(c > 0);  // class F is closed (Prop. 4)
      CHECK(std::abs(oracles::truncated_trace(combo, dag) - combo.c0 * d) < 1e-9);
      CHECK(oracles::truncated_trace(combo, cyc) - combo.c0 * d > 1e-6);
    }
  }
}

TEST_CASE("dominating coefficient sequences give dominating Hessian radii") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.2, 1.0);
  for (int t = 0; t < 30; ++t) {
    const int d = 3 + t % 3;
    Matrix Bt = testsup::random_nonneg(d, 0.4, rng);
    const int K = 2 * d + 4;
    std::vector<double> lo(K + 1, 0.0), hi(K + 1, 0.0);
    for (int i = 1; i <= K; ++i) {
      lo[i] = u(rng) / std::tgamma(i + 1.0);
      hi[i] = lo[i] * (1.0 + u(rng));
    }
    const double r_lo = constraints::spectral_radius_estimate(
        constraints::hessian_from_coeffs(lo, Bt));
    const double r_hi = constraints::spectral_radius_estimate(
        constraints::hessian_from_coeffs(hi, Bt));
    CHECK(r_hi >= r_lo - 1e-12);
  }
}
