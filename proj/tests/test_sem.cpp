#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "adag/graphs.hpp"
#include "adag/sem.hpp"

using namespace adag;
using sem::NoiseFamily;

namespace {

double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double worst = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = cdf(xs[i]);
    worst = std::max(worst, std::abs(F - (i + 1) / n));
    worst = std::max(worst, std::abs(F - i / n));
  }
  return worst;
}

double col_mean(const Matrix& X, int j) { return X.col(j).mean(); }

double col_var(const Matrix& X, int j) {
  const double m = col_mean(X, j);
  return (X.col(j).array() - m).square().sum() / (X.rows() - 1);
}

}  // namespace

TEST_CASE("sample_sem: B = 0 gives iid noise with the right moments") {
  graphs::WeightedAdjacency B(5);
  auto ds = sem::sample_sem(B, 10000, NoiseFamily::Gaussian, 11);
  for (int j = 0; j < 5; ++j) {
    CHECK(std::abs(col_mean(ds.X, j)) < 0.05);
    CHECK(std::abs(col_var(ds.X, j) - 1.0) < 0.1);
  }
}

TEST_CASE("sample_sem: chain variance matches the closed form") {
  // x2 = w x1 + e2 with unit-variance noise: var(x2) = 1 + w^2
  for (double w : {0.8, 1.5, -2.0}) {
    Matrix b = Matrix::Zero(2, 2);
    b(0, 1) = w;
    auto ds = sem::sample_sem(graphs::WeightedAdjacency(b), 10000,
                              NoiseFamily::Gaussian, 17);
    const double expect = 1 + w * w;
    CHECK(col_var(ds.X, 1) == doctest::Approx(expect).epsilon(0.10));
  }
}

TEST_CASE("sample_sem: shape contract for n = 1 and error on cycles") {
  graphs::WeightedAdjacency B(3);
  auto ds = sem::sample_sem(B, 1, NoiseFamily::Gumbel, 5);
  CHECK(ds.X.rows() == 1);
  CHECK(ds.X.allFinite());

  Matrix cyc = Matrix::Zero(2, 2);
  cyc(0, 1) = cyc(1, 0) = 1.0;
  CHECK_THROWS(sem::sample_sem(graphs::WeightedAdjacency(cyc), 10,
                               NoiseFamily::Gaussian, 5));
  CHECK_THROWS(sem::sample_sem(B, 0, NoiseFamily::Gaussian, 5));
}

TEST_CASE("sample_sem: marginals match each noise family (KS < 0.02)") {
  graphs::WeightedAdjacency B(3);
  const int n = 10000;
  auto grab = [&](NoiseFamily f) {
    auto ds = sem::sample_sem(B, n, f, 23);
    return std::vector<double>(ds.X.col(1).data(), ds.X.col(1).data() + n);
  };
  CHECK(ks_statistic(grab(NoiseFamily::Gaussian), [](double x) {
          return 0.5 * std::erfc(-x / std::sqrt(2.0));
        }) < 0.02);
  CHECK(ks_statistic(grab(NoiseFamily::Exponential), [](double x) {
          return x < 0 ? 0.0 : 1.0 - std::exp(-x);
        }) < 0.02);
  CHECK(ks_statistic(grab(NoiseFamily::Gumbel), [](double x) {
          return std::exp(-std::exp(-x));
        }) < 0.02);
}

TEST_CASE("sample_sem: deterministic per seed") {
  Matrix b = Matrix::Zero(4, 4);
  b(0, 2) = 1.2;
  b(1, 3) = -0.7;
  graphs::WeightedAdjacency B(b);
  auto a1 = sem::sample_sem(B, 50, NoiseFamily::Exponential, 3);
  auto a2 = sem::sample_sem(B, 50, NoiseFamily::Exponential, 3);
  auto a3 = sem::sample_sem(B, 50, NoiseFamily::Exponential, 4);
  CHECK(a1.X == a2.X);
  CHECK(a1.X != a3.X);
}

TEST_CASE("normalize: centers, scales and is idempotent") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0, 1);
  sem::SemDataset ds;
  ds.n = 200;
  ds.X = Matrix(200, 3);
  for (int i = 0; i < 200; ++i) {
    ds.X(i, 0) = 5.0 + 2.0 * g(rng);
    ds.X(i, 1) = -1.0 + 0.1 * g(rng);
    ds.X(i, 2) = g(rng);
  }
  auto nd = sem::normalize(ds);
  CHECK(nd.normalized);
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(col_mean(nd.X, j)) < 1e-9);
    CHECK(std::abs(std::sqrt(col_var(nd.X, j)) - 1.0) < 1e-9);
  }
  auto nn = sem::normalize(nd);
  CHECK((nn.X - nd.X).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("normalize: names the constant column") {
  sem::SemDataset ds;
  ds.n = 10;
  ds.X = Matrix::Zero(10, 2);
  for (int i = 0; i < 10; ++i) ds.X(i, 0) = i;
  ds.X.col(1).setConstant(3.0);
  CHECK_THROWS_WITH_AS(sem::normalize(ds), doctest::Contains("column 1"),
                       std::invalid_argument);
}

TEST_CASE("normalize preserves the correlation matrix") {
  graphs::GraphGenSpec spec{graphs::GraphFamily::ER, 8, 2.0, 0.5, 2.0, 77};
  auto dag = graphs::generate_dag(spec);
  auto ds = sem::sample_sem(dag, 500, NoiseFamily::Gaussian, 78);
  Matrix before = sem::correlation_matrix(ds.X);
  Matrix after = sem::correlation_matrix(sem::normalize(ds).X);
  CHECK((before - after).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("correlation_mask: identical and independent columns") {
  sem::SemDataset ds;
  ds.n = 10000;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0, 1);
  ds.X = Matrix(ds.n, 3);
  for (int i = 0; i < ds.n; ++i) {
    ds.X(i, 0) = g(rng);
    ds.X(i, 1) = ds.X(i, 0);  // copy: |corr| = 1
    ds.X(i, 2) = g(rng);      // independent
  }
  auto mask = sem::correlation_mask(ds, 0.1);
  CHECK(mask.allowed(0, 1));
  CHECK(mask.allowed(1, 0));
  CHECK_FALSE(mask.allowed(0, 0));
  CHECK_FALSE(mask.allowed(0, 2));  // null correlation ~ N(0, 1/n), far below 0.1
}

TEST_CASE("correlation_mask: independent columns rarely pass the 0.1 threshold") {
  int allowed = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    graphs::WeightedAdjacency B(2);
    auto ds = sem::sample_sem(B, 10000, NoiseFamily::Gaussian, 100 + t);
    allowed += sem::correlation_mask(ds, 0.1).allowed(0, 1) ? 1 : 0;
  }
  CHECK(allowed <= 1);  // >= 99% of seeds reject
}

TEST_CASE("correlation_mask: constant column never allows an edge") {
  sem::SemDataset ds;
  ds.n = 100;
  ds.X = Matrix(100, 2);
  for (int i = 0; i < 100; ++i) {
    ds.X(i, 0) = i;
    ds.X(i, 1) = 1.0;
  }
  auto mask = sem::correlation_mask(ds, 0.1);
  CHECK_FALSE(mask.allowed(0, 1));
  CHECK_FALSE(mask.allowed(1, 0));
}
