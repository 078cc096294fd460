/******************************************************************************
 * Copyright 2026 The psmrac Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "psmrac/error.hpp"
#include "psmrac/kernels.hpp"

namespace psmrac::kernels {

#ifndef PSMRAC_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif

namespace {

bool cpu_has_avx2() {
#if defined(PSMRAC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__)) && \
    (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa pick_default() {
  if (const char* env = std::getenv("PSMRAC_SIMD")) {
    if (std::string_view(env) == "scalar") return Isa::kScalar;
  }
  return cpu_has_avx2() ? Isa::kAvx2 : Isa::kScalar;
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> table{
      pick_default() == Isa::kAvx2 ? avx2_table() : &scalar_table()};
  return table;
}

}  // namespace

const char* isa_name(Isa isa) {
  return isa == Isa::kAvx2 ? "avx2+fma" : "scalar";
}

bool isa_supported(Isa isa) {
  return isa == Isa::kScalar || (cpu_has_avx2() && avx2_table() != nullptr);
}

Isa active_isa() {
  return slot().load() == &scalar_table() ? Isa::kScalar : Isa::kAvx2;
}

void set_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw NumericalError(std::string("kernel variant not available: ") + isa_name(isa));
  }
  slot().store(isa == Isa::kAvx2 ? avx2_table() : &scalar_table());
}

const KernelTable& active() { return *slot().load(); }

}  // namespace psmrac::kernels
