#pragma once

#include "adag/types.hpp"

namespace adag::metrics {

struct GraphMetrics {
  int shd = 0;
  double tpr = 0;
  double fdr = 0;
  int edges_true = 0;
  int edges_est = 0;
};

/// Structural Hamming distance between binary adjacencies. Extra and missing
/// edges count 1 each; a reversed edge counts 1.
int shd(const BinMatrix& est, const BinMatrix& truth);

/// True positive rate over correctly directed edges and false detection rate
/// over the estimate. Empty truth yields tpr = 1 by convention (visible via
/// edges_true = 0); empty estimate yields fdr = 0.
GraphMetrics tpr_fdr(const BinMatrix& est, const BinMatrix& truth);

/// shd + tpr/fdr in one record.
GraphMetrics evaluate(const BinMatrix& est, const BinMatrix& truth);

}  // namespace adag::metrics
