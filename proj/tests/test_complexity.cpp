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

#include <algorithm>

#include <gtest/gtest.h>

#include "psmrac/complexity.hpp"
#include "psmrac/error.hpp"

namespace psmrac {
namespace {

TEST(Complexity, GtmMinimalOrder) {
  const auto c = count_params(8, 2, 1);
  EXPECT_EQ(c.controller_param_order, 48);
  EXPECT_EQ(c.output_feedback_order, 56);
  EXPECT_EQ(c.N_ps, 1 + 28 + 14 + 2 + 4 + 4);
  EXPECT_EQ(c.N_o, 1 + 48 + 8 + 4);
}

TEST(Complexity, FullStateDegeneration) {
  for (long n = 1; n <= 10; ++n) {
    for (long m = 1; m <= n; ++m) {
      EXPECT_EQ(count_params(n, m, n).N_ps, (m * m - m) / 2 + m * n + 2 * m * m);
    }
  }
}

TEST(Complexity, CaseIBlockSummation) {
  EXPECT_EQ(count_params(8, 2, 3).N_ps, 20 + 30 + 6 + 4 + 1 + 4);
  for (long n = 1; n <= 12; ++n)
    for (long m = 1; m <= n; ++m)
      for (long n0 = 1; n0 <= n; ++n0)
        EXPECT_EQ(count_params(n, m, n0).N_ps, count_params_by_blocks(n, m, n0));
}

TEST(Complexity, DifferenceIsMTimesClosedForm) {
  EXPECT_EQ(closed_form(8, 2, 1), -4);
  for (long n = 2; n <= 20; ++n) {
    for (long m = 1; m <= n; ++m) {
      for (long n0 = 1; n0 <= n; ++n0) {
        const auto c = count_params(n, m, n0);
        EXPECT_EQ(c.N_ps - c.N_o, m * closed_form(n, m, n0));
        EXPECT_EQ(closed_form(n, m, n0), -(n0 - m) * (n0 - (n + 1 - 2 * m)));
      }
    }
  }
}

TEST(Complexity, IntegratorDifference) {
  EXPECT_EQ(count_integrators(8, 2, 1, 2, 4).Nprime_ps, 56);
  for (long n = 2; n <= 15; ++n)
    for (long m = 1; m <= n; ++m)
      for (long n0 = 1; n0 <= n; ++n0)
        for (long nh = 1; nh <= 3; ++nh) {
          const auto c = count_integrators(n, m, n0, nh, 2);
          EXPECT_EQ(c.Nprime_ps - c.Nprime_o, nh * closed_form(n, m, n0));
        }
}

TEST(Complexity, RangeErrors) {
  EXPECT_THROW(count_integrators(8, 2, 1, 0, 0), DimensionError);
  EXPECT_THROW(count_integrators(8, 2, 1, 1, -1), DimensionError);
  EXPECT_THROW(count_params(3, 5, 1), DimensionError);
  EXPECT_THROW(count_params(3, 1, 4), DimensionError);
  EXPECT_THROW(count_params(0, 0, 0), DimensionError);
  EXPECT_THROW(find_min_M(0), DimensionError);
}

TEST(Conditions, SubstitutionAgreesWithCountsOnGrid) {
  for (long n = 2; n <= 20; ++n) {
    for (long m = 1; m <= n; ++m) {
      const auto rep = reduction_conditions(n, m);
      ASSERT_EQ(static_cast<long>(rep.rows.size()), n);
      for (const auto& row : rep.rows) {
        const auto c = count_params(n, m, row.n0);
        EXPECT_EQ(row.reduced, c.N_ps < c.N_o) << n << ' ' << m << ' ' << row.n0;
      }
      const auto c1 = count_params(n, m, 1);
      EXPECT_EQ(rep.minimal_direct, c1.N_ps < c1.N_o);
    }
  }
}

TEST(Conditions, ShortcutGapsAreReported) {
  // n < 3M - 1 with n0 < n + 1 - 2M reduces but the shortcut says no.
  const auto a = reduction_conditions(7, 3);
  EXPECT_TRUE(a.rows[0].reduced);
  EXPECT_FALSE(a.rows[0].prose_prediction);
  EXPECT_FALSE(a.findings.empty());
  // M = 1, n0 = 1: equality, not a strict reduction.
  const auto b = reduction_conditions(8, 1);
  EXPECT_EQ(b.rows[0].f, 0);
  EXPECT_TRUE(b.minimal_prose);
  EXPECT_FALSE(b.minimal_direct);
  // Case where both agree everywhere.
  const auto c = reduction_conditions(8, 2);
  EXPECT_TRUE(c.findings.empty());
}

TEST(MinM, TenStates) {
  const auto r = find_min_M(10);
  EXPECT_EQ(r.best_M, 3);
  EXPECT_EQ(r.best_saving, 8);
  EXPECT_DOUBLE_EQ(r.predicted_M, 3.0);
  EXPECT_DOUBLE_EQ(r.predicted_saving, 8.0);
  for (long m = 1; m <= 5; ++m) EXPECT_GE(r.f_by_M[m - 1], -8);
}

TEST(Sweep, CsvShape) {
  const std::string csv = sweep_n0_csv(8, 2);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
  EXPECT_NE(csv.find("8,2,1,"), std::string::npos);
}

}  // namespace
}  // namespace psmrac
