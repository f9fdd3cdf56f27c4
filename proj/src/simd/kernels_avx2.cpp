// AVX2/FMA variants. This translation unit is compiled with -mavx2 -mfma and is
// only entered after a runtime CPU check in dispatch.cpp.

#include <immintrin.h>

#include "bernoulli/simd/kernels.hpp"

namespace bernoulli::simd {

const Kernels& scalar_kernels();

namespace {

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void xpby_avx2(const double* x, double beta, double* y, std::size_t n) {
  const __m256d vb = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vb, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void csr_matvec_avx2(std::size_t rows, const int* row_ptr, const int* col, const double* val,
                     const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    int k = row_ptr[r];
    const int end = row_ptr[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= end; k += 4) {
      const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(col + k));
      const __m256d xv = _mm256_i32gather_pd(x, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(val + k), xv, acc);
    }
    double s = hsum(acc);
    for (; k < end; ++k) s += val[k] * x[col[k]];
    y[r] = s;
  }
}

void p1_basis_avx2(const TriangleBatch& t, const P1BasisOut& out) {
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= t.count; i += 4) {
    const __m256d x0 = _mm256_loadu_pd(t.x[0] + i), x1 = _mm256_loadu_pd(t.x[1] + i),
                  x2 = _mm256_loadu_pd(t.x[2] + i);
    const __m256d y0 = _mm256_loadu_pd(t.y[0] + i), y1 = _mm256_loadu_pd(t.y[1] + i),
                  y2 = _mm256_loadu_pd(t.y[2] + i);
    const __m256d det = _mm256_sub_pd(_mm256_mul_pd(_mm256_sub_pd(x1, x0), _mm256_sub_pd(y2, y0)),
                                      _mm256_mul_pd(_mm256_sub_pd(x2, x0), _mm256_sub_pd(y1, y0)));
    const __m256d inv = _mm256_div_pd(one, det);
    _mm256_storeu_pd(out.area + i, _mm256_mul_pd(half, det));
    _mm256_storeu_pd(out.gx[0] + i, _mm256_mul_pd(_mm256_sub_pd(y1, y2), inv));
    _mm256_storeu_pd(out.gy[0] + i, _mm256_mul_pd(_mm256_sub_pd(x2, x1), inv));
    _mm256_storeu_pd(out.gx[1] + i, _mm256_mul_pd(_mm256_sub_pd(y2, y0), inv));
    _mm256_storeu_pd(out.gy[1] + i, _mm256_mul_pd(_mm256_sub_pd(x0, x2), inv));
    _mm256_storeu_pd(out.gx[2] + i, _mm256_mul_pd(_mm256_sub_pd(y0, y1), inv));
    _mm256_storeu_pd(out.gy[2] + i, _mm256_mul_pd(_mm256_sub_pd(x1, x0), inv));
  }
  if (i < t.count) {
    TriangleBatch tail = t;
    tail.count = t.count - i;
    P1BasisOut tail_out = out;
    tail_out.area += i;
    for (int v = 0; v < 3; ++v) {
      tail.x[v] += i;
      tail.y[v] += i;
      tail_out.gx[v] += i;
      tail_out.gy[v] += i;
    }
    scalar_kernels().p1_basis(tail, tail_out);
  }
}

void fourier_series_avx2(const double* a, std::size_t na, const double* b, std::size_t nb,
                         const double* cos_t, const double* sin_t, std::size_t n, double* r,
                         double* dr) {
  const std::size_t order = na > nb + 1 ? na - 1 : nb;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d c1 = _mm256_loadu_pd(cos_t + j);
    const __m256d s1 = _mm256_loadu_pd(sin_t + j);
    __m256d ck = _mm256_set1_pd(1.0);
    __m256d sk = _mm256_setzero_pd();
    __m256d val = _mm256_set1_pd(a[0]);
    __m256d der = _mm256_setzero_pd();
    for (std::size_t k = 1; k <= order; ++k) {
      const __m256d cn = _mm256_fmsub_pd(ck, c1, _mm256_mul_pd(sk, s1));
      const __m256d sn = _mm256_fmadd_pd(sk, c1, _mm256_mul_pd(ck, s1));
      ck = cn;
      sk = sn;
      const double kk = static_cast<double>(k);
      if (k < na) {
        val = _mm256_fmadd_pd(_mm256_set1_pd(a[k]), ck, val);
        der = _mm256_fnmadd_pd(_mm256_set1_pd(kk * a[k]), sk, der);
      }
      if (k <= nb) {
        val = _mm256_fmadd_pd(_mm256_set1_pd(b[k - 1]), sk, val);
        der = _mm256_fmadd_pd(_mm256_set1_pd(kk * b[k - 1]), ck, der);
      }
    }
    _mm256_storeu_pd(r + j, val);
    if (dr != nullptr) _mm256_storeu_pd(dr + j, der);
  }
  if (j < n) {
    scalar_kernels().fourier_series(a, na, b, nb, cos_t + j, sin_t + j, n - j, r + j,
                                    dr != nullptr ? dr + j : nullptr);
  }
}

}  // namespace

const Kernels& avx2_kernel_table() {
  static const Kernels table{"avx2",          dot_avx2,        axpy_avx2,
                             xpby_avx2,       csr_matvec_avx2, p1_basis_avx2,
                             fourier_series_avx2};
  return table;
}

}  // namespace bernoulli::simd
