// Copyright 2026 The fhsim Authors
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

#include <immintrin.h>

#include <cstddef>
#include <cstdint>

#include "fhsim/kernels.hpp"

namespace fhsim::kernels {
namespace {

inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }
inline const double* dp(const cplx* p) { return reinterpret_cast<const double*>(p); }

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

void axpy_real(double a, const cplx* x, cplx* y, std::size_t n) {
  const double* xs = dp(x);
  double* ys = dp(y);
  const std::size_t m = 2 * n;
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 8 <= m; i += 8) {
    __m256d y0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(xs + i), _mm256_loadu_pd(ys + i));
    __m256d y1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(xs + i + 4), _mm256_loadu_pd(ys + i + 4));
    _mm256_storeu_pd(ys + i, y0);
    _mm256_storeu_pd(ys + i + 4, y1);
  }
  for (; i + 4 <= m; i += 4)
    _mm256_storeu_pd(ys + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(xs + i), _mm256_loadu_pd(ys + i)));
  for (; i < m; ++i) ys[i] += a * xs[i];
}

// (ar + i ai)(xr + i xi) for two packed complex numbers
inline __m256d cmul(__m256d ar, __m256d ai, __m256d x) {
  __m256d sw = _mm256_permute_pd(x, 0b0101);
  return _mm256_fmaddsub_pd(ar, x, _mm256_mul_pd(ai, sw));
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double* xs = dp(x);
  double* ys = dp(y);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d r = cmul(ar, ai, _mm256_loadu_pd(xs + 2 * i));
    _mm256_storeu_pd(ys + 2 * i, _mm256_add_pd(_mm256_loadu_pd(ys + 2 * i), r));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void mul_diag(const double* d, const cplx* x, cplx* y, std::size_t n) {
  const double* xs = dp(x);
  double* ys = dp(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d dd = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(d + i)), 0b01010000);
    _mm256_storeu_pd(ys + 2 * i, _mm256_mul_pd(dd, _mm256_loadu_pd(xs + 2 * i)));
  }
  for (; i < n; ++i) y[i] = d[i] * x[i];
}

void csr_gather(const std::uint32_t* row_ptr, const std::uint32_t* cols, const double* vals,
                const cplx* x, cplx* y, std::size_t rows) {
  const double* xs = dp(x);
  for (std::size_t r = 0; r < rows; ++r) {
    std::uint32_t k = row_ptr[r];
    const std::uint32_t end = row_ptr[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 2 <= end; k += 2) {
      __m256d xv = _mm256_loadu2_m128d(xs + 2 * std::size_t(cols[k + 1]), xs + 2 * std::size_t(cols[k]));
      __m256d vv = _mm256_set_pd(vals[k + 1], vals[k + 1], vals[k], vals[k]);
      acc = _mm256_fmadd_pd(vv, xv, acc);
    }
    __m128d s = _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
    if (k < end) s = _mm_fmadd_pd(_mm_set1_pd(vals[k]), _mm_loadu_pd(xs + 2 * std::size_t(cols[k])), s);
    double* yr = dp(y + r);
    _mm_storeu_pd(yr, _mm_add_pd(_mm_loadu_pd(yr), s));
  }
}

cplx dot(const cplx* x, const cplx* y, std::size_t n) {
  const double* xs = dp(x);
  const double* ys = dp(y);
  __m256d re = _mm256_setzero_pd();
  __m256d im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xs + 2 * i);
    __m256d yv = _mm256_loadu_pd(ys + 2 * i);
    re = _mm256_fmadd_pd(xv, yv, re);
    im = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), im);
  }
  alignas(32) double imv[4];
  _mm256_store_pd(imv, im);
  cplx s{hsum(re), imv[0] - imv[1] + imv[2] - imv[3]};
  for (; i < n; ++i) s += std::conj(x[i]) * y[i];
  return s;
}

double norm_sq(const cplx* x, std::size_t n) {
  const double* xs = dp(x);
  const std::size_t m = 2 * n;
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= m; i += 8) {
    __m256d v0 = _mm256_loadu_pd(xs + i);
    __m256d v1 = _mm256_loadu_pd(xs + i + 4);
    a0 = _mm256_fmadd_pd(v0, v0, a0);
    a1 = _mm256_fmadd_pd(v1, v1, a1);
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < m; ++i) s += xs[i] * xs[i];
  return s;
}

void scale(cplx a, cplx* x, std::size_t n) {
  double* xs = dp(x);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) _mm256_storeu_pd(xs + 2 * i, cmul(ar, ai, _mm256_loadu_pd(xs + 2 * i)));
  for (; i < n; ++i) x[i] *= a;
}

void abs_sq(const cplx* x, double* p, std::size_t n) {
  const double* xs = dp(x);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v0 = _mm256_loadu_pd(xs + 2 * i);
    __m256d v1 = _mm256_loadu_pd(xs + 2 * i + 4);
    __m256d h = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
    _mm256_storeu_pd(p + i, _mm256_permute4x64_pd(h, 0b11011000));
  }
  for (; i < n; ++i) p[i] = std::norm(x[i]);
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{Isa::kAvx2, "avx2", axpy_real, axpy,  mul_diag, csr_gather,
                                 dot,        norm_sq, scale,    abs_sq};
  return table;
}

}  // namespace fhsim::kernels
