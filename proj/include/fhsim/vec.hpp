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

// Vector primitives over interleaved complex arrays. Reductions use fixed
// chunks combined in index order, so results do not depend on the number of
// OpenMP threads.

#include <complex>
#include <cstddef>

namespace fhsim::vec {

using cplx = std::complex<double>;

cplx dot(const cplx* x, const cplx* y, std::size_t n);
double norm_sq(const cplx* x, std::size_t n);
void axpy(cplx a, const cplx* x, cplx* y, std::size_t n);
void axpy_real(double a, const cplx* x, cplx* y, std::size_t n);
void scale(cplx a, cplx* x, std::size_t n);

}  // namespace fhsim::vec
