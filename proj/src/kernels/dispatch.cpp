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

#include <atomic>
#include <cstdlib>
#include <string>

#include "fhsim/errors.hpp"
#include "fhsim/kernels.hpp"

namespace fhsim::kernels {

#ifdef FHSIM_HAVE_AVX2
const KernelTable& avx2_table();
#endif

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* avx2_kernels() {
#ifdef FHSIM_HAVE_AVX2
  if (cpu_supports_avx2()) return &avx2_table();
#endif
  return nullptr;
}

namespace {

const KernelTable* initial_table() {
  const char* env = std::getenv("FHSIM_ISA");
  if (env != nullptr && std::string(env) == "scalar") return &scalar_kernels();
  if (const KernelTable* t = avx2_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(Isa isa) {
  if (isa == Isa::kScalar) {
    current().store(&scalar_kernels(), std::memory_order_release);
    return;
  }
  const KernelTable* t = avx2_kernels();
  if (t == nullptr) throw ParameterError("AVX2 kernels are not available on this build or CPU");
  current().store(t, std::memory_order_release);
}

}  // namespace fhsim::kernels
