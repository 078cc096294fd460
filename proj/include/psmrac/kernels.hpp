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

/**
 * @file kernels.hpp
 * @brief Dense vector kernels behind the closed-loop integrator.
 *
 * Every kernel has a scalar reference version and, when the CPU reports
 * AVX2 and FMA, a vectorised version. The variant is chosen once at first
 * use; PSMRAC_SIMD=scalar in the environment forces the reference path.
 * Arrays are plain contiguous doubles; matrices are column-major.
 */

#pragma once

#include <cstddef>
#include <span>

namespace psmrac::kernels {

enum class Isa { kScalar, kAvx2 };

const char* isa_name(Isa isa);
bool isa_supported(Isa isa);
Isa active_isa();
/// Switches the dispatch table; throws NumericalError when unsupported.
void set_isa(Isa isa);

/// Function table of one instruction-set variant.
struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// out = x + alpha * k
  void (*stage)(const double* x, double alpha, const double* k, double* out,
                std::size_t n);
  /// x += h/6 * (k1 + 2 k2 + 2 k3 + k4)
  void (*rk4_combine)(double h, const double* k1, const double* k2,
                      const double* k3, const double* k4, double* x,
                      std::size_t n);
  /// y[j] = sum_i a(i, j) x[i], a column-major rows x cols
  void (*gemv_t)(const double* a, std::size_t rows, std::size_t cols,
                 const double* x, double* y);
  /// a += alpha * x y^T, a column-major rows x cols
  void (*ger)(double alpha, const double* x, std::size_t rows, const double* y,
              std::size_t cols, double* a);
};

const KernelTable& scalar_table();
/// Null when the AVX2 variant was not compiled in.
const KernelTable* avx2_table();
const KernelTable& active();

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace psmrac::kernels
