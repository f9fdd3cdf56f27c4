#pragma once

// Data-parallel inner loops used by the geometry and FEM layers.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The active table is chosen once per process from the CPU feature
// flags; setting BERNOULLI_SIMD=scalar in the environment forces the scalar
// table. Both tables must agree to rounding (see tests/test_kernels.cpp).

#include <cstddef>
#include <string_view>

namespace bernoulli::simd {

// Structure-of-arrays view of a batch of triangles.
struct TriangleBatch {
  std::size_t count = 0;
  const double* x[3] = {nullptr, nullptr, nullptr};
  const double* y[3] = {nullptr, nullptr, nullptr};
};

// Per-triangle signed area and gradients of the three barycentric (P1) basis
// functions. gx[i][t], gy[i][t] is grad(lambda_i) on triangle t.
struct P1BasisOut {
  double* area = nullptr;
  double* gx[3] = {nullptr, nullptr, nullptr};
  double* gy[3] = {nullptr, nullptr, nullptr};
};

struct Kernels {
  std::string_view name;

  double (*dot)(const double* a, const double* b, std::size_t n);
  // y <- y + alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y <- x + beta * y
  void (*xpby)(const double* x, double beta, double* y, std::size_t n);
  // y <- A x for a CSR matrix with `rows` rows.
  void (*csr_matvec)(std::size_t rows, const int* row_ptr, const int* col, const double* val,
                     const double* x, double* y);
  void (*p1_basis)(const TriangleBatch& tris, const P1BasisOut& out);
  // r(theta) = a0 + sum_k a_k cos(k theta) + b_k sin(k theta) and its theta-derivative,
  // evaluated at n angles given through their cosines and sines. a has na >= 1 entries
  // (a0..a_{na-1}); b has nb entries (b1..b_nb). dr may be null.
  void (*fourier_series)(const double* a, std::size_t na, const double* b, std::size_t nb,
                         const double* cos_t, const double* sin_t, std::size_t n, double* r,
                         double* dr);
};

const Kernels& scalar_kernels();

// Null when the build has no AVX2 variant or the CPU lacks AVX2/FMA.
const Kernels* avx2_kernels();

// The table used by the library.
const Kernels& kernels();

}  // namespace bernoulli::simd
