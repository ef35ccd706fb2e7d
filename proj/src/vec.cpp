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

#include "fhsim/vec.hpp"

#include <vector>

#include "fhsim/kernels.hpp"

namespace fhsim::vec {

namespace {

constexpr std::size_t kChunk = 8192;

template <typename T, typename F>
T chunked_sum(std::size_t n, F&& f) {
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  if (nchunks <= 1) return f(0, n);
  std::vector<T> partial(nchunks);
#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < nchunks; ++c) {
    const std::size_t lo = c * kChunk;
    const std::size_t hi = lo + kChunk < n ? lo + kChunk : n;
    partial[c] = f(lo, hi - lo);
  }
  T s{};
  for (const T& p : partial) s += p;
  return s;
}

template <typename F>
void chunked_for(std::size_t n, F&& f) {
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  if (nchunks <= 1) {
    f(0, n);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < nchunks; ++c) {
    const std::size_t lo = c * kChunk;
    const std::size_t hi = lo + kChunk < n ? lo + kChunk : n;
    f(lo, hi - lo);
  }
}

}  // namespace

cplx dot(const cplx* x, const cplx* y, std::size_t n) {
  const auto& k = kernels::active();
  return chunked_sum<cplx>(n, [&](std::size_t lo, std::size_t len) { return k.dot(x + lo, y + lo, len); });
}

double norm_sq(const cplx* x, std::size_t n) {
  const auto& k = kernels::active();
  return chunked_sum<double>(n, [&](std::size_t lo, std::size_t len) { return k.norm_sq(x + lo, len); });
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const auto& k = kernels::active();
  chunked_for(n, [&](std::size_t lo, std::size_t len) { k.axpy(a, x + lo, y + lo, len); });
}

void axpy_real(double a, const cplx* x, cplx* y, std::size_t n) {
  const auto& k = kernels::active();
  chunked_for(n, [&](std::size_t lo, std::size_t len) { k.axpy_real(a, x + lo, y + lo, len); });
}

void scale(cplx a, cplx* x, std::size_t n) {
  const auto& k = kernels::active();
  chunked_for(n, [&](std::size_t lo, std::size_t len) { k.scale(a, x + lo, len); });
}

}  // namespace fhsim::vec
