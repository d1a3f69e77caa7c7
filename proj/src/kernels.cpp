#include "adag/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace adag::kernels {

namespace {

int hardware_default() {
  static const int cached = [] {
    if (const char* env = std::getenv("ADAG_THREADS")) {
      int v = std::atoi(env);
      if (v > 0) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
  }();
  return cached;
}

thread_local int g_threads = 0;  // 0 = use hardware default

// Chunk height is fixed so the set of row blocks, and hence the
// floating-point result, is independent of the thread count.
constexpr Eigen::Index kChunk = 64;

}  // namespace

void set_threads(int n) { g_threads = n > 0 ? n : 0; }

int threads() { return g_threads > 0 ? g_threads : hardware_default(); }

void gemm(const Matrix& A, const Matrix& B, Matrix& C) {
  const Eigen::Index rows = A.rows();
  C.resize(rows, B.cols());
  const Eigen::Index nchunks = (rows + kChunk - 1) / kChunk;
  const int nt = std::min<Eigen::Index>(threads(), nchunks);
  if (nt <= 1 || nchunks == 1) {
    C.noalias() = A * B;
    return;
  }
#pragma omp parallel for schedule(static) num_threads(nt)
  for (Eigen::Index c = 0; c < nchunks; ++c) {
    const Eigen::Index r0 = c * kChunk;
    const Eigen::Index len = std::min(kChunk, rows - r0);
    C.middleRows(r0, len).noalias() = A.middleRows(r0, len) * B;
  }
}

void gemm_serial(const Matrix& A, const Matrix& B, Matrix& C) {
  C.resize(A.rows(), B.cols());
  C.noalias() = A * B;
}

void gram(const Matrix& X, Matrix& G) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  G.resize(d, d);
  const Eigen::Index nchunks = (d + kChunk - 1) / kChunk;
  const int nt = std::min<Eigen::Index>(threads(), nchunks);
  if (nt <= 1 || nchunks == 1) {
    G.noalias() = X.transpose() * X / static_cast<double>(n);
    return;
  }
#pragma omp parallel for schedule(static) num_threads(nt)
  for (Eigen::Index c = 0; c < nchunks; ++c) {
    const Eigen::Index c0 = c * kChunk;
    const Eigen::Index len = std::min(kChunk, d - c0);
    G.middleCols(c0, len).noalias() =
        X.transpose() * X.middleCols(c0, len) / static_cast<double>(n);
  }
}

void gram_serial(const Matrix& X, Matrix& G) {
  G.resize(X.cols(), X.cols());
  G.noalias() = X.transpose() * X / static_cast<double>(X.rows());
}

}  // namespace adag::kernels
