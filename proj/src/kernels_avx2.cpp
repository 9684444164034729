// Copyright 2026 The qcorr authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// AVX2+FMA lane. A __m256d holds two interleaved complex doubles
// [re0 im0 re1 im1]; complex multiply-add uses the permute / fmaddsub pair:
//   t = im(alpha) * swap(x);  t = fmaddsub(re(alpha), x, t)
// which lands re*re - im*im in even lanes and re*im + im*re in odd lanes.
// This file is compiled with -mavx2 -mfma only; selection happens at runtime.

#include "kernels_table.hpp"

#if defined(QCORR_HAVE_AVX2_BUILD)

#include <immintrin.h>

namespace qcorr::kernels::detail {
namespace {

inline const double* dp(const cplx* p) {
  return reinterpret_cast<const double*>(p);
}
inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }

// y += alpha * x for one row; the shared inner loop of matmul and axpy.
inline void axpy_row(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d xv = _mm256_loadu_pd(dp(x + j));
    const __m256d xs = _mm256_permute_pd(xv, 0x5);
    __m256d t = _mm256_mul_pd(ai, xs);
    t = _mm256_fmaddsub_pd(ar, xv, t);
    const __m256d yv = _mm256_loadu_pd(dp(y + j));
    _mm256_storeu_pd(dp(y + j), _mm256_add_pd(yv, t));
  }
  for (; j < n; ++j) y[j] += alpha * x[j];
}

void matmul_acc_avx2(const cplx* a, const cplx* b, cplx* c, std::size_t m,
                     std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    cplx* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p)
      axpy_row(a[i * k + p], b + p * n, crow, n);
  }
}

void axpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  axpy_row(alpha, x, y, n);
}

void scaled_copy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d xv = _mm256_loadu_pd(dp(x + j));
    const __m256d xs = _mm256_permute_pd(xv, 0x5);
    __m256d t = _mm256_mul_pd(ai, xs);
    t = _mm256_fmaddsub_pd(ar, xv, t);
    _mm256_storeu_pd(dp(y + j), t);
  }
  for (; j < n; ++j) y[j] = alpha * x[j];
}

void scale_avx2(cplx alpha, cplx* x, std::size_t n) {
  scaled_copy_avx2(alpha, x, x, n);
}

double norm_sq_avx2(const cplx* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d xv = _mm256_loadu_pd(dp(x + j));
    acc = _mm256_fmadd_pd(xv, xv, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; j < n; ++j)
    s += x[j].real() * x[j].real() + x[j].imag() * x[j].imag();
  return s;
}

cplx dot_conj_avx2(const cplx* x, const cplx* y, std::size_t n) {
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d xv = _mm256_loadu_pd(dp(x + j));
    const __m256d yv = _mm256_loadu_pd(dp(y + j));
    // even+odd lanes of x*y sum to the real part
    acc_re = _mm256_fmadd_pd(xv, yv, acc_re);
    // swap(x)*y holds [xi*yr, xr*yi]; imag part = odd - even lanes
    acc_im = _mm256_add_pd(acc_im, _mm256_mul_pd(_mm256_permute_pd(xv, 0x5), yv));
  }
  alignas(32) double re4[4], im4[4];
  _mm256_store_pd(re4, acc_re);
  _mm256_store_pd(im4, acc_im);
  double re = re4[0] + re4[1] + re4[2] + re4[3];
  double im = (im4[1] + im4[3]) - (im4[0] + im4[2]);
  for (; j < n; ++j) {
    re += x[j].real() * y[j].real() + x[j].imag() * y[j].imag();
    im += x[j].real() * y[j].imag() - x[j].imag() * y[j].real();
  }
  return {re, im};
}

}  // namespace

const KernelTable avx2_table = {matmul_acc_avx2, axpy_avx2, scaled_copy_avx2,
                                scale_avx2,      norm_sq_avx2, dot_conj_avx2};

}  // namespace qcorr::kernels::detail

#endif  // QCORR_HAVE_AVX2_BUILD
