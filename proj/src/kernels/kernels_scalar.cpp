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

#include "psmrac/kernels.hpp"

namespace psmrac::kernels {
namespace {

double dot_ref(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_ref(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void stage_ref(const double* x, double alpha, const double* k, double* out,
               std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + alpha * k[i];
}

void rk4_combine_ref(double h, const double* k1, const double* k2,
                     const double* k3, const double* k4, double* x,
                     std::size_t n) {
  const double w = h / 6.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
}

void gemv_t_ref(const double* a, std::size_t rows, std::size_t cols,
                const double* x, double* y) {
  for (std::size_t j = 0; j < cols; ++j) y[j] = dot_ref(a + j * rows, x, rows);
}

void ger_ref(double alpha, const double* x, std::size_t rows, const double* y,
             std::size_t cols, double* a) {
  for (std::size_t j = 0; j < cols; ++j) axpy_ref(alpha * y[j], x, a + j * rows, rows);
}

constexpr KernelTable kScalarTable{dot_ref,    axpy_ref,   stage_ref,
                                   rk4_combine_ref, gemv_t_ref, ger_ref};

}  // namespace

const KernelTable& scalar_table() { return kScalarTable; }

}  // namespace psmrac::kernels
