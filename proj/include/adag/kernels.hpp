#pragma once

#include "adag/types.hpp"

namespace adag::kernels {

// Thread budget for the parallel kernels. The value is thread-local so that
// independent worker threads (e.g. replicates of an experiment) can pin their
// own kernels to a single core without touching each other.
void set_threads(int n);  // n <= 0 restores the hardware default
int threads();

/// C = A * B using fixed-height row chunks; chunk results do not depend on the
/// thread count, so output is identical for any ADAG_THREADS setting.
void gemm(const Matrix& A, const Matrix& B, Matrix& C);

/// Serial reference for gemm (single Eigen product call).
void gemm_serial(const Matrix& A, const Matrix& B, Matrix& C);

/// G = X^T X / n for an n x d sample matrix.
void gram(const Matrix& X, Matrix& G);
void gram_serial(const Matrix& X, Matrix& G);

}  // namespace adag::kernels
