#include "adag/sem.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace adag::sem {

NoiseFamily noise_from_string(const std::string& s) {
  if (s == "gaussian" || s == "gauss") return NoiseFamily::Gaussian;
  if (s == "exponential" || s == "exp") return NoiseFamily::Exponential;
  if (s == "gumbel") return NoiseFamily::Gumbel;
  throw std::invalid_argument("unknown noise family: " + s);
}

std::string to_string(NoiseFamily f) {
  switch (f) {
    case NoiseFamily::Gaussian: return "gaussian";
    case NoiseFamily::Exponential: return "exponential";
    case NoiseFamily::Gumbel: return "gumbel";
  }
  return "gaussian";
}

SemDataset sample_sem(const graphs::WeightedAdjacency& B, int n, NoiseFamily noise,
                      std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_sem: need n >= 1");
  const auto order = graphs::topological_order(B);  // throws on cycles
  const int d = B.d;

  std::mt19937_64 rng(seed);
  Matrix X(n, d);
  switch (noise) {
    case NoiseFamily::Gaussian: {
      std::normal_distribution<double> dist(0.0, 1.0);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < d; ++c) X(r, c) = dist(rng);
      break;
    }
    case NoiseFamily::Exponential: {
      std::exponential_distribution<double> dist(1.0);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < d; ++c) X(r, c) = dist(rng);
      break;
    }
    case NoiseFamily::Gumbel: {
      std::extreme_value_distribution<double> dist(0.0, 1.0);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < d; ++c) X(r, c) = dist(rng);
      break;
    }
  }

  // x_j = sum_i B_ij x_i + e_j, filled parents-first.
  for (int j : order) {
    for (int i = 0; i < d; ++i) {
      const double w = B.data(i, j);
      if (w != 0.0) X.col(j) += w * X.col(i);
    }
  }

  SemDataset ds;
  ds.X = std::move(X);
  ds.n = n;
  ds.noise = noise;
  ds.normalized = false;
  ds.seed = seed;
  return ds;
}

SemDataset normalize(const SemDataset& ds) {
  const Eigen::Index n = ds.X.rows();
  const Eigen::Index d = ds.X.cols();
  if (n < 2) throw std::invalid_argument("normalize: need at least 2 samples");
  SemDataset out = ds;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double mean = ds.X.col(j).mean();
    const double sq = (ds.X.col(j).array() - mean).square().sum();
    const double sd = std::sqrt(sq / static_cast<double>(n - 1));
    if (sd == 0.0)
      throw std::invalid_argument("normalize: column " + std::to_string(j) +
                                  " is constant");
    out.X.col(j) = (ds.X.col(j).array() - mean) / sd;
  }
  out.normalized = true;
  return out;
}

Matrix correlation_matrix(const Matrix& X) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  Vector mean(d), sd(d);
  Matrix C = Matrix::Zero(d, d);
  Matrix Z(n, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    mean(j) = X.col(j).mean();
    Z.col(j) = X.col(j).array() - mean(j);
    sd(j) = std::sqrt(Z.col(j).squaredNorm() / static_cast<double>(n - 1));
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (i == j) {
        C(i, j) = 1.0;
      } else if (sd(i) == 0.0 || sd(j) == 0.0) {
        C(i, j) = 0.0;  // constant column: no evidence of association
      } else {
        C(i, j) = Z.col(i).dot(Z.col(j)) / (static_cast<double>(n - 1) * sd(i) * sd(j));
      }
    }
  }
  return C;
}

EdgeMask correlation_mask(const SemDataset& ds, double threshold) {
  if (ds.n < 2) throw std::invalid_argument("correlation_mask: need n >= 2");
  const Matrix C = correlation_matrix(ds.X);
  const Eigen::Index d = C.rows();
  EdgeMask mask;
  mask.threshold = threshold;
  mask.allowed = BoolMatrix::Constant(d, d, false);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (i != j) mask.allowed(i, j) = std::abs(C(i, j)) > threshold;
  return mask;
}

}  // namespace adag::sem
