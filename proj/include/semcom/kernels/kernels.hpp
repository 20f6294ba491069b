/**
 * @file kernels.hpp
 * @brief Dense double-precision vector/matrix kernels with runtime SIMD dispatch.
 *
 * Every kernel exists as a scalar reference implementation (semcom::kernels::ref)
 * and, on x86-64, an AVX2+FMA variant (semcom::kernels::avx2). The top-level
 * entry points dispatch through function pointers selected once at startup.
 * Selection can be forced with the environment variable SEMCOM_KERNELS=scalar|avx2.
 *
 * All matrices are row-major with leading dimension equal to the column count.
 * Accumulation order inside each kernel is fixed, so results are reproducible
 * run-to-run on the same machine and backend.
 */
#pragma once

#include <cstddef>
#include <string>

namespace semcom::kernels {

// C[m x n] = beta*C + A[m x k] * B[k x n]
using GemmFn = void (*)(std::size_t m, std::size_t n, std::size_t k,
                        const double* a, const double* b, double* c, double beta);
// y[n] += alpha * x[n]
using AxpyFn = void (*)(std::size_t n, double alpha, const double* x, double* y);
// out = sum_i x[i] * y[i]
using DotFn = double (*)(std::size_t n, const double* x, const double* y);
// y[i] = max(x[i], 0)
using ReluFn = void (*)(std::size_t n, const double* x, double* y);
// dx[i] += dy[i] * (x[i] > 0)
using ReluBwdFn = void (*)(std::size_t n, const double* x, const double* dy, double* dx);
using SumFn = double (*)(std::size_t n, const double* x);
// elementwise z[i] = x[i] * y[i]
using MulFn = void (*)(std::size_t n, const double* x, const double* y, double* z);

namespace ref {
void gemm_nn(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c, double beta);
void gemm_nt(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c, double beta);
void gemm_tn(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c, double beta);
void axpy(std::size_t n, double alpha, const double* x, double* y);
double dot(std::size_t n, const double* x, const double* y);
void relu(std::size_t n, const double* x, double* y);
void relu_bwd(std::size_t n, const double* x, const double* dy, double* dx);
double sum(std::size_t n, const double* x);
void mul(std::size_t n, const double* x, const double* y, double* z);
}  // namespace ref

namespace avx2 {
bool available();
void gemm_nn(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c, double beta);
void gemm_nt(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c, double beta);
void gemm_tn(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c, double beta);
void axpy(std::size_t n, double alpha, const double* x, double* y);
double dot(std::size_t n, const double* x, const double* y);
void relu(std::size_t n, const double* x, double* y);
void relu_bwd(std::size_t n, const double* x, const double* dy, double* dx);
double sum(std::size_t n, const double* x);
void mul(std::size_t n, const double* x, const double* y, double* z);
}  // namespace avx2

struct Dispatch {
  GemmFn gemm_nn;
  GemmFn gemm_nt;
  GemmFn gemm_tn;
  AxpyFn axpy;
  DotFn dot;
  ReluFn relu;
  ReluBwdFn relu_bwd;
  SumFn sum;
  MulFn mul;
  const char* backend;
};

// Active dispatch table. Initialized on first use.
const Dispatch& active();

// Name of the backend in use ("scalar" or "avx2").
std::string backend_name();

// Dispatched entry points.
inline void gemm_nn(std::size_t m, std::size_t n, std::size_t k,
                    const double* a, const double* b, double* c, double beta = 0.0) {
  active().gemm_nn(m, n, k, a, b, c, beta);
}
inline void gemm_nt(std::size_t m, std::size_t n, std::size_t k,
                    const double* a, const double* b, double* c, double beta = 0.0) {
  active().gemm_nt(m, n, k, a, b, c, beta);
}
inline void gemm_tn(std::size_t m, std::size_t n, std::size_t k,
                    const double* a, const double* b, double* c, double beta = 0.0) {
  active().gemm_tn(m, n, k, a, b, c, beta);
}
inline void axpy(std::size_t n, double alpha, const double* x, double* y) {
  active().axpy(n, alpha, x, y);
}
inline double dot(std::size_t n, const double* x, const double* y) {
  return active().dot(n, x, y);
}
inline void relu(std::size_t n, const double* x, double* y) { active().relu(n, x, y); }
inline void relu_bwd(std::size_t n, const double* x, const double* dy, double* dx) {
  active().relu_bwd(n, x, dy, dx);
}
inline double sum(std::size_t n, const double* x) { return active().sum(n, x); }
inline void mul(std::size_t n, const double* x, const double* y, double* z) {
  active().mul(n, x, y, z);
}

}  // namespace semcom::kernels
