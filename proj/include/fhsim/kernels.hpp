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

#pragma once

// Data-parallel inner loops of the simulator. Every kernel has a scalar
// reference implementation; an AVX2/FMA variant is selected at runtime when
// the CPU supports it. Vectors are interleaved complex<double> arrays.

#include <complex>
#include <cstddef>
#include <cstdint>

namespace fhsim::kernels {

using cplx = std::complex<double>;

enum class Isa { kScalar, kAvx2 };

struct KernelTable {
  Isa isa;
  const char* name;
  // y += a x, a real
  void (*axpy_real)(double a, const cplx* x, cplx* y, std::size_t n);
  // y += a x
  void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
  // y = d .* x, d real
  void (*mul_diag)(const double* d, const cplx* x, cplx* y, std::size_t n);
  // y[r] += sum_k vals[k] x[cols[k]] over k in [row_ptr[r], row_ptr[r+1])
  void (*csr_gather)(const std::uint32_t* row_ptr, const std::uint32_t* cols, const double* vals,
                     const cplx* x, cplx* y, std::size_t rows);
  // sum_i conj(x_i) y_i
  cplx (*dot)(const cplx* x, const cplx* y, std::size_t n);
  double (*norm_sq)(const cplx* x, std::size_t n);
  void (*scale)(cplx a, cplx* x, std::size_t n);
  // p_i = |x_i|^2
  void (*abs_sq)(const cplx* x, double* p, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();

// Table used by the simulator. Defaults to the widest supported ISA; the
// FHSIM_ISA environment variable (scalar|avx2) overrides the default.
const KernelTable& active();

// Throws ParameterError when the requested ISA is unavailable.
void select(Isa isa);

bool cpu_supports_avx2();

}  // namespace fhsim::kernels
