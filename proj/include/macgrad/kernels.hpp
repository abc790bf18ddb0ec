#pragma once

// Hot loops behind the tensor API. Every kernel exists twice: a serial
// reference used by the tests and the benchmark, and an OpenMP version that
// partitions output rows across threads. Each output element is accumulated
// by a single thread in the same order as the serial loop, so both variants
// are bit-identical regardless of thread count.

#include <cstddef>

namespace macgrad::kernels {

struct MatDims {
    std::size_t m, k, n;
};

// c[m x n] = a[m x k] * b[k x n]
// c[m x n] = a^T * b with a stored [k x m]
// c[m x n] = a * b^T with b stored [n x k]
namespace serial {
void gemm_nn(const double* a, const double* b, double* c, MatDims d);
void gemm_tn(const double* a, const double* b, double* c, MatDims d);
void gemm_nt(const double* a, const double* b, double* c, MatDims d);
void im2col(const double* x, double* cols, std::size_t batch, std::size_t channels, std::size_t height,
            std::size_t width, std::size_t kh, std::size_t kw, std::size_t stride, std::size_t pad);
void col2im(const double* cols, double* x, std::size_t batch, std::size_t channels, std::size_t height,
            std::size_t width, std::size_t kh, std::size_t kw, std::size_t stride, std::size_t pad);
}  // namespace serial

namespace parallel {
void gemm_nn(const double* a, const double* b, double* c, MatDims d);
void gemm_tn(const double* a, const double* b, double* c, MatDims d);
void gemm_nt(const double* a, const double* b, double* c, MatDims d);
void im2col(const double* x, double* cols, std::size_t batch, std::size_t channels, std::size_t height,
            std::size_t width, std::size_t kh, std::size_t kw, std::size_t stride, std::size_t pad);
void col2im(const double* cols, double* x, std::size_t batch, std::size_t channels, std::size_t height,
            std::size_t width, std::size_t kh, std::size_t kw, std::size_t stride, std::size_t pad);
}  // namespace parallel

// Caps OpenMP threads; 0 leaves the runtime default. Reads MACGRAD_THREADS
// when called with no argument.
void configure_threads();
void set_threads(int n);
int max_threads();

}  // namespace macgrad::kernels
