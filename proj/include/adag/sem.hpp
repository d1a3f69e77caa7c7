#pragma once

#include <cstdint>
#include <string>

#include "adag/graphs.hpp"
#include "adag/types.hpp"

namespace adag::sem {

/// Exogenous noise families, all with unit parameters: standard normal,
/// rate-1 exponential, Gumbel(0, 1).
enum class NoiseFamily { Gaussian, Exponential, Gumbel };

NoiseFamily noise_from_string(const std::string& s);
std::string to_string(NoiseFamily f);

struct SemDataset {
  Matrix X;  // n x d samples
  int n = 0;
  NoiseFamily noise = NoiseFamily::Gaussian;
  bool normalized = false;
  std::uint64_t seed = 0;
};

/// Draws n samples of the linear structural equation model x = B^T x + e by
/// propagating noise through a topological order of B. Throws on cyclic B.
SemDataset sample_sem(const graphs::WeightedAdjacency& B, int n, NoiseFamily noise,
                      std::uint64_t seed);

/// Centers every column and scales it to unit sample standard deviation
/// (n-1 denominator). Throws naming the column if one is constant.
SemDataset normalize(const SemDataset& ds);

struct EdgeMask {
  BoolMatrix allowed;
  double threshold = 0.1;
};

/// allowed(i,j) = |pearson(X_i, X_j)| > threshold for i != j; diagonal false.
/// Correlation with a constant column is taken as 0.
EdgeMask correlation_mask(const SemDataset& ds, double threshold);

/// Pearson correlation matrix with unit diagonal (n-1 denominators).
Matrix correlation_matrix(const Matrix& X);

}  // namespace adag::sem
