/**
 * @file kernels_avx2.cpp
 * @brief AVX2+FMA kernel variants. Built with -mavx2 -mfma on x86-64; on other
 *        architectures every entry point forwards to the scalar reference.
 *
 * Loop structure keeps a fixed accumulation order per call so outputs are
 * reproducible. Results may differ from the scalar path in the last ulps
 * because of FMA contraction; the equivalence tests use a relative tolerance.
 */
#include "semcom/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define SEMCOM_X86 1
#include <immintrin.h>
#else
#define SEMCOM_X86 0
#endif

namespace semcom::kernels::avx2 {

#if SEMCOM_X86

bool available() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

inline void scale_row(double* c, std::size_t n, double beta) {
  if (beta == 0.0) {
    std::size_t j = 0;
    __m256d z = _mm256_setzero_pd();
    for (; j + 4 <= n; j += 4) _mm256_storeu_pd(c + j, z);
    for (; j < n; ++j) c[j] = 0.0;
  } else if (beta != 1.0) {
    __m256d vb = _mm256_set1_pd(beta);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4)
      _mm256_storeu_pd(c + j, _mm256_mul_pd(_mm256_loadu_pd(c + j), vb));
    for (; j < n; ++j) c[j] *= beta;
  }
}

// c[0..n) += s * b[0..n)
inline void fma_row(double* c, const double* b, double s, std::size_t n) {
  __m256d vs = _mm256_set1_pd(s);
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    __m256d c0 = _mm256_loadu_pd(c + j);
    __m256d c1 = _mm256_loadu_pd(c + j + 4);
    c0 = _mm256_fmadd_pd(vs, _mm256_loadu_pd(b + j), c0);
    c1 = _mm256_fmadd_pd(vs, _mm256_loadu_pd(b + j + 4), c1);
    _mm256_storeu_pd(c + j, c0);
    _mm256_storeu_pd(c + j + 4, c1);
  }
  for (; j + 4 <= n; j += 4) {
    __m256d c0 = _mm256_loadu_pd(c + j);
    c0 = _mm256_fmadd_pd(vs, _mm256_loadu_pd(b + j), c0);
    _mm256_storeu_pd(c + j, c0);
  }
  for (; j < n; ++j) c[j] += s * b[j];
}

}  // namespace

void gemm_nn(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c, double beta) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    scale_row(ci, n, beta);
    const double* ai = a + i * k;
    std::size_t p = 0;
    // Unroll over k by 2 to cut loop overhead on the small matrices we see.
    for (; p + 2 <= k; p += 2) {
      fma_row(ci, b + p * n, ai[p], n);
      fma_row(ci, b + (p + 1) * n, ai[p + 1], n);
    }
    for (; p < k; ++p) fma_row(ci, b + p * n, ai[p], n);
  }
}

void gemm_nt(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c, double beta) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * k;
    double* ci = c + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      const double* bj = b + j * k;
      __m256d acc = _mm256_setzero_pd();
      std::size_t p = 0;
      for (; p + 4 <= k; p += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(ai + p), _mm256_loadu_pd(bj + p), acc);
      double s = hsum(acc);
      for (; p < k; ++p) s += ai[p] * bj[p];
      ci[j] = (beta == 0.0 ? 0.0 : beta * ci[j]) + s;
    }
  }
}

void gemm_tn(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c, double beta) {
  if (beta == 0.0) {
    for (std::size_t t = 0; t < m * n; ++t) c[t] = 0.0;
  } else if (beta != 1.0) {
    for (std::size_t t = 0; t < m * n; ++t) c[t] *= beta;
  }
  for (std::size_t p = 0; p < k; ++p) {
    const double* ap = a + p * m;
    const double* bp = b + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      if (ap[i] != 0.0) fma_row(c + i * n, bp, ap[i], n);
    }
  }
}

void axpy(std::size_t n, double alpha, const double* x, double* y) {
  fma_row(y, x, alpha, n);
}

double dot(std::size_t n, const double* x, const double* y) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void relu(std::size_t n, const double* x, double* y) {
  __m256d z = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_max_pd(_mm256_loadu_pd(x + i), z));
  for (; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_bwd(std::size_t n, const double* x, const double* dy, double* dx) {
  __m256d z = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(x + i), z, _CMP_GT_OQ);
    __m256d g = _mm256_and_pd(_mm256_loadu_pd(dy + i), mask);
    _mm256_storeu_pd(dx + i, _mm256_add_pd(_mm256_loadu_pd(dx + i), g));
  }
  for (; i < n; ++i) {
    if (x[i] > 0.0) dx[i] += dy[i];
  }
}

double sum(std::size_t n, const double* x) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

void mul(std::size_t n, const double* x, const double* y, double* z) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(z + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) z[i] = x[i] * y[i];
}

#else  // !SEMCOM_X86

bool available() { return false; }

void gemm_nn(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c, double beta) {
  ref::gemm_nn(m, n, k, a, b, c, beta);
}
void gemm_nt(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c, double beta) {
  ref::gemm_nt(m, n, k, a, b, c, beta);
}
void gemm_tn(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c, double beta) {
  ref::gemm_tn(m, n, k, a, b, c, beta);
}
void axpy(std::size_t n, double alpha, const double* x, double* y) {
  ref::axpy(n, alpha, x, y);
}
double dot(std::size_t n, const double* x, const double* y) { return ref::dot(n, x, y); }
void relu(std::size_t n, const double* x, double* y) { ref::relu(n, x, y); }
void relu_bwd(std::size_t n, const double* x, const double* dy, double* dx) {
  ref::relu_bwd(n, x, dy, dx);
}
double sum(std::size_t n, const double* x) { return ref::sum(n, x); }
void mul(std::size_t n, const double* x, const double* y, double* z) {
  ref::mul(n, x, y, z);
}

#endif

}  // namespace semcom::kernels::avx2
