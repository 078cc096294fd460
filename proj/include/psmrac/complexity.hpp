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
 * @file complexity.hpp
 * @brief Parameter and integrator counts of the partial-state and output
 *        feedback adaptive controllers, and the reduction conditions.
 *
 * With nu = n - M + 1 (worst-case observability index) and
 *   f(n, M, n0) = -n0^2 + (n + 1 - M) n0 - n M - M + 2 M^2
 *               = -(n0 - M)(n0 - (n + 1 - 2M)),
 * the counts satisfy N_ps - N_o = M f and N'_ps - N'_o = n_h f.
 */

#pragma once

#include <string>
#include <vector>

namespace psmrac {

struct ParamCounts {
  long N_ps = 0;
  long N_o = 0;
  /// Entries of the stacked Theta of the partial-state controller.
  long controller_param_order = 0;
  /// Entries of the output-feedback Theta, 2 nu M^2.
  long output_feedback_order = 0;
};

struct IntegratorCounts {
  long Nprime_ps = 0;
  long Nprime_o = 0;
};

long closed_form(long n, long m, long n0);
ParamCounts count_params(long n, long m, long n0);
/// Sum of the block sizes Theta1, Theta2, Theta20, Theta3, theta_i, Psi.
long count_params_by_blocks(long n, long m, long n0);
IntegratorCounts count_integrators(long n, long m, long n0, long n_h, long n_e);

struct ComplexityReport {
  long n = 0, M = 0, n0 = 0, nu_bar = 0, n_h = 0, n_e = 0;
  ParamCounts params;
  IntegratorCounts integrators;
  long f = 0;
  /// N_ps < N_o.
  bool reduced = false;
};

ComplexityReport complexity_report(long n, long m, long n0, long n_h = 1, long n_e = 0);
std::string format_report(const ComplexityReport& r);

struct ConditionRow {
  long n0 = 0;
  long f = 0;
  /// f < 0 by substitution.
  bool reduced = false;
  /// The statement's shortcut: n > 3M-1: n0 < M or n0 > n-2M+1;
  /// n < 3M-1: n0 > M; n = 3M-1 is not covered and predicts no reduction.
  bool prose_prediction = false;
};

struct ConditionReport {
  long n = 0, M = 0;
  std::vector<ConditionRow> rows;
  /// n0 = 1: M < n/2 (prose) versus f(n, M, 1) < 0.
  bool minimal_prose = false;
  bool minimal_direct = false;
  /// Disagreements between the prose shortcuts and substitution.
  std::vector<std::string> findings;
};

ConditionReport reduction_conditions(long n, long m);

struct MinMResult {
  long n = 0;
  long best_M = 0;
  /// -f(n, best_M, 1), the largest saving in f.
  long best_saving = 0;
  /// (n + 2) / 4 and (n - 2)^2 / 8 from the closed-form optimum.
  double predicted_M = 0.0;
  double predicted_saving = 0.0;
  std::vector<long> f_by_M;
};

/// Exhaustive minimisation of f(n, M, 1) over integer M in [1, n].
MinMResult find_min_M(long n);

/// CSV of complexity reports, one row per n0 in [1, n].
std::string sweep_n0_csv(long n, long m, long n_h = 1, long n_e = 0);

}  // namespace psmrac
