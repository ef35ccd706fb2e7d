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

#include <random>
#include <vector>

#include "doctest.h"
#include "fhsim/kernels.hpp"
#include "fhsim/vec.hpp"

using fhsim::kernels::cplx;
using fhsim::kernels::KernelTable;

namespace {

std::vector<cplx> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {nd(rng), nd(rng)};
  return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

void check_against_scalar(const KernelTable& simd) {
  const KernelTable& ref = fhsim::kernels::scalar_kernels();
  for (std::size_t n : {0u, 1u, 2u, 3u, 5u, 8u, 17u, 64u, 1001u}) {
    CAPTURE(n);
    auto x = random_vec(n, 1 + n);
    auto y = random_vec(n, 100 + n);
    std::vector<double> d(n);
    for (std::size_t k = 0; k < n; ++k) d[k] = x[k].real() - 0.3;

    auto y1 = y, y2 = y;
    ref.axpy_real(0.7, x.data(), y1.data(), n);
    simd.axpy_real(0.7, x.data(), y2.data(), n);
    CHECK(max_diff(y1, y2) < 1e-13);

    y1 = y, y2 = y;
    ref.axpy({0.3, -1.1}, x.data(), y1.data(), n);
    simd.axpy({0.3, -1.1}, x.data(), y2.data(), n);
    CHECK(max_diff(y1, y2) < 1e-13);

    ref.mul_diag(d.data(), x.data(), y1.data(), n);
    simd.mul_diag(d.data(), x.data(), y2.data(), n);
    CHECK(max_diff(y1, y2) < 1e-13);

    const cplx d1 = ref.dot(x.data(), y.data(), n);
    const cplx d2 = simd.dot(x.data(), y.data(), n);
    CHECK(std::abs(d1 - d2) <= 1e-12 * (1.0 + std::abs(d1)));
    const double n1 = ref.norm_sq(x.data(), n);
    CHECK(std::abs(n1 - simd.norm_sq(x.data(), n)) <= 1e-12 * (1.0 + n1));

    y1 = y, y2 = y;
    ref.scale({-0.4, 2.0}, y1.data(), n);
    simd.scale({-0.4, 2.0}, y2.data(), n);
    CHECK(max_diff(y1, y2) < 1e-13);

    std::vector<double> p1(n), p2(n);
    ref.abs_sq(x.data(), p1.data(), n);
    simd.abs_sq(x.data(), p2.data(), n);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(p1[k] - p2[k]) < 1e-13);

    // CSR rows with 0..4 entries
    std::vector<std::uint32_t> ptr{0}, cols;
    std::vector<double> vals;
    std::mt19937 rng(7);
    for (std::size_t r = 0; r < n; ++r) {
      const int cnt = static_cast<int>(r % 5);
      for (int c = 0; c < cnt; ++c) {
        cols.push_back(rng() % n);
        vals.push_back(0.1 * c - 0.25);
      }
      ptr.push_back(static_cast<std::uint32_t>(cols.size()));
    }
    y1 = y, y2 = y;
    ref.csr_gather(ptr.data(), cols.data(), vals.data(), x.data(), y1.data(), n);
    simd.csr_gather(ptr.data(), cols.data(), vals.data(), x.data(), y2.data(), n);
    CHECK(max_diff(y1, y2) < 1e-13);
  }
}

}  // namespace

TEST_CASE("avx2 kernels agree with the scalar reference") {
  const KernelTable* simd = fhsim::kernels::avx2_kernels();
  if (simd == nullptr) {
    MESSAGE("AVX2 kernels unavailable; skipping");
    return;
  }
  check_against_scalar(*simd);
}

TEST_CASE("kernel selection switches the active table") {
  const auto& before = fhsim::kernels::active();
  fhsim::kernels::select(fhsim::kernels::Isa::kScalar);
  CHECK(fhsim::kernels::active().isa == fhsim::kernels::Isa::kScalar);
  fhsim::kernels::select(before.isa);
  CHECK(fhsim::kernels::active().isa == before.isa);
}

TEST_CASE("chunked reductions match a plain sum on long vectors") {
  const std::size_t n = 50'000;
  auto x = random_vec(n, 3);
  auto y = random_vec(n, 4);
  cplx s{};
  for (std::size_t k = 0; k < n; ++k) s += std::conj(x[k]) * y[k];
  CHECK(std::abs(fhsim::vec::dot(x.data(), y.data(), n) - s) < 1e-9);
}
