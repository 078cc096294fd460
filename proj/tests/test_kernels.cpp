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

#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "psmrac/kernels.hpp"

namespace psmrac::kernels {
namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> nd;
  std::vector<double> v(n);
  for (auto& x : v) x = nd(rng);
  return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

class KernelEquivalence : public ::testing::TestWithParam<std::size_t> {
 protected:
  void SetUp() override {
    if (avx2_table() == nullptr || !isa_supported(Isa::kAvx2)) {
      GTEST_SKIP() << "AVX2 variant not available on this host";
    }
  }
  const KernelTable& s = scalar_table();
  const KernelTable& v = *avx2_table();
};

TEST_P(KernelEquivalence, Dot) {
  std::mt19937_64 rng(GetParam());
  const auto a = random_vector(rng, GetParam());
  const auto b = random_vector(rng, GetParam());
  const double ref = s.dot(a.data(), b.data(), a.size());
  EXPECT_NEAR(v.dot(a.data(), b.data(), a.size()), ref, 1e-12 * (1.0 + std::abs(ref)));
}

TEST_P(KernelEquivalence, Axpy) {
  std::mt19937_64 rng(GetParam() + 1);
  const auto x = random_vector(rng, GetParam());
  auto y1 = random_vector(rng, GetParam());
  auto y2 = y1;
  s.axpy(0.37, x.data(), y1.data(), x.size());
  v.axpy(0.37, x.data(), y2.data(), x.size());
  EXPECT_LE(max_abs_diff(y1, y2), 1e-14);
}

TEST_P(KernelEquivalence, StageAndCombine) {
  const std::size_t n = GetParam();
  std::mt19937_64 rng(n + 2);
  const auto x = random_vector(rng, n);
  const auto k1 = random_vector(rng, n), k2 = random_vector(rng, n);
  const auto k3 = random_vector(rng, n), k4 = random_vector(rng, n);
  std::vector<double> o1(n), o2(n);
  s.stage(x.data(), 0.0025, k1.data(), o1.data(), n);
  v.stage(x.data(), 0.0025, k1.data(), o2.data(), n);
  EXPECT_LE(max_abs_diff(o1, o2), 1e-15);
  auto x1 = x, x2 = x;
  s.rk4_combine(0.005, k1.data(), k2.data(), k3.data(), k4.data(), x1.data(), n);
  v.rk4_combine(0.005, k1.data(), k2.data(), k3.data(), k4.data(), x2.data(), n);
  EXPECT_LE(max_abs_diff(x1, x2), 1e-14);
}

TEST_P(KernelEquivalence, GemvTransposed) {
  const std::size_t rows = GetParam(), cols = 3;
  std::mt19937_64 rng(rows + 3);
  const auto a = random_vector(rng, rows * cols);
  const auto x = random_vector(rng, rows);
  std::vector<double> y1(cols), y2(cols);
  s.gemv_t(a.data(), rows, cols, x.data(), y1.data());
  v.gemv_t(a.data(), rows, cols, x.data(), y2.data());
  EXPECT_LE(max_abs_diff(y1, y2), 1e-12);
}

TEST_P(KernelEquivalence, Ger) {
  const std::size_t rows = GetParam(), cols = 2;
  std::mt19937_64 rng(rows + 4);
  const auto x = random_vector(rng, rows);
  const auto y = random_vector(rng, cols);
  auto a1 = random_vector(rng, rows * cols);
  auto a2 = a1;
  s.ger(-0.2, x.data(), rows, y.data(), cols, a1.data());
  v.ger(-0.2, x.data(), rows, y.data(), cols, a2.data());
  EXPECT_LE(max_abs_diff(a1, a2), 1e-14);
}

INSTANTIATE_TEST_SUITE_P(Lengths, KernelEquivalence,
                         ::testing::Values(0u, 1u, 3u, 4u, 7u, 8u, 17u, 64u, 1001u));

TEST(KernelScalar, KnownValues) {
  const auto& s = scalar_table();
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  EXPECT_DOUBLE_EQ(s.dot(a.data(), b.data(), 3), 32.0);
  std::vector<double> y{1, 1, 1};
  s.axpy(2.0, a.data(), y.data(), 3);
  EXPECT_EQ(y, (std::vector<double>{3, 5, 7}));
  // column-major 3 x 2: columns (1,2,3) and (4,5,6)
  const std::vector<double> m{1, 2, 3, 4, 5, 6};
  std::vector<double> out(2);
  s.gemv_t(m.data(), 3, 2, a.data(), out.data());
  EXPECT_DOUBLE_EQ(out[0], 14.0);
  EXPECT_DOUBLE_EQ(out[1], 32.0);
  std::vector<double> x{1, 1, 1, 1};
  const std::vector<double> k(4, 6.0);
  s.rk4_combine(1.0, k.data(), k.data(), k.data(), k.data(), x.data(), 4);
  EXPECT_DOUBLE_EQ(x[0], 7.0);
}

TEST(KernelDispatch, SwitchesVariants) {
  const Isa before = active_isa();
  set_isa(Isa::kScalar);
  EXPECT_EQ(&active(), &scalar_table());
  if (isa_supported(Isa::kAvx2)) {
    set_isa(Isa::kAvx2);
    EXPECT_EQ(&active(), avx2_table());
  }
  set_isa(before);
}

}  // namespace
}  // namespace psmrac::kernels
