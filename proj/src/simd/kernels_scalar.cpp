#include "bernoulli/simd/kernels.hpp"

namespace bernoulli::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpby_scalar(const double* x, double beta, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void csr_matvec_scalar(std::size_t rows, const int* row_ptr, const int* col, const double* val,
                       const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    double s = 0.0;
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += val[k] * x[col[k]];
    y[r] = s;
  }
}

void p1_basis_scalar(const TriangleBatch& t, const P1BasisOut& out) {
  for (std::size_t i = 0; i < t.count; ++i) {
    const double x0 = t.x[0][i], x1 = t.x[1][i], x2 = t.x[2][i];
    const double y0 = t.y[0][i], y1 = t.y[1][i], y2 = t.y[2][i];
    const double det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
    const double inv = 1.0 / det;
    out.area[i] = 0.5 * det;
    out.gx[0][i] = (y1 - y2) * inv;
    out.gy[0][i] = (x2 - x1) * inv;
    out.gx[1][i] = (y2 - y0) * inv;
    out.gy[1][i] = (x0 - x2) * inv;
    out.gx[2][i] = (y0 - y1) * inv;
    out.gy[2][i] = (x1 - x0) * inv;
  }
}

void fourier_series_scalar(const double* a, std::size_t na, const double* b, std::size_t nb,
                           const double* cos_t, const double* sin_t, std::size_t n, double* r,
                           double* dr) {
  const std::size_t order = na > nb + 1 ? na - 1 : nb;
  for (std::size_t j = 0; j < n; ++j) {
    const double c1 = cos_t[j], s1 = sin_t[j];
    double ck = 1.0, sk = 0.0;
    double val = a[0], der = 0.0;
    for (std::size_t k = 1; k <= order; ++k) {
      const double cn = ck * c1 - sk * s1;
      const double sn = sk * c1 + ck * s1;
      ck = cn;
      sk = sn;
      const double kk = static_cast<double>(k);
      if (k < na) {
        val += a[k] * ck;
        der -= kk * a[k] * sk;
      }
      if (k <= nb) {
        val += b[k - 1] * sk;
        der += kk * b[k - 1] * ck;
      }
    }
    r[j] = val;
    if (dr != nullptr) dr[j] = der;
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels table{"scalar",        dot_scalar,      axpy_scalar,
                             xpby_scalar,     csr_matvec_scalar, p1_basis_scalar,
                             fourier_series_scalar};
  return table;
}

}  // namespace bernoulli::simd
