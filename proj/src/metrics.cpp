#include "adag/metrics.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace adag::metrics {

namespace {

void check_dims(const BinMatrix& est, const BinMatrix& truth) {
  if (est.rows() != est.cols() || truth.rows() != truth.cols() ||
      est.rows() != truth.rows())
    throw std::invalid_argument("metrics: adjacency dimensions do not match");
}

}  // namespace

int shd(const BinMatrix& est, const BinMatrix& truth) {
  check_dims(est, truth);
  const int d = static_cast<int>(est.rows());
  int count = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const int a1 = est(i, j) != 0, a2 = est(j, i) != 0;
      const int b1 = truth(i, j) != 0, b2 = truth(j, i) != 0;
      if (a1 == b1 && a2 == b2) continue;
      const bool swap = (a1 == 1 && a2 == 0 && b1 == 0 && b2 == 1) ||
                        (a1 == 0 && a2 == 1 && b1 == 1 && b2 == 0);
      count += swap ? 1 : std::abs(a1 - b1) + std::abs(a2 - b2);
    }
  }
  return count;
}

GraphMetrics tpr_fdr(const BinMatrix& est, const BinMatrix& truth) {
  check_dims(est, truth);
  const int d = static_cast<int>(est.rows());
  GraphMetrics m;
  int correct = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      const bool e = est(i, j) != 0;
      const bool t = truth(i, j) != 0;
      m.edges_est += e;
      m.edges_true += t;
      correct += e && t;
    }
  }
  m.tpr = m.edges_true == 0 ? 1.0 : static_cast<double>(correct) / m.edges_true;
  m.fdr = static_cast<double>(m.edges_est - correct) / std::max(1, m.edges_est);
  return m;
}

GraphMetrics evaluate(const BinMatrix& est, const BinMatrix& truth) {
  GraphMetrics m = tpr_fdr(est, truth);
  m.shd = shd(est, truth);
  return m;
}

}  // namespace adag::metrics
