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

#include "psmrac/complexity.hpp"

#include <sstream>

#include "psmrac/error.hpp"

namespace psmrac {

namespace {

void check_dims(long n, long m, long n0) {
  if (n < 1 || m < 1 || m > n) {
    throw DimensionError("complexity: need 1 <= M <= n (n = " + std::to_string(n) +
                         ", M = " + std::to_string(m) + ")");
  }
  if (n0 < 1 || n0 > n) {
    throw DimensionError("complexity: need 1 <= n0 <= n (n0 = " + std::to_string(n0) + ")");
  }
}

}  // namespace

long closed_form(long n, long m, long n0) {
  return -n0 * n0 + (n + 1 - m) * n0 - n * m - m + 2 * m * m;
}

ParamCounts count_params(long n, long m, long n0) {
  check_dims(n, m, n0);
  const long k = n - n0;
  const long nu = n - m + 1;
  ParamCounts c;
  c.N_ps = (m * m - m) / 2 + k * m * m + k * m * n0 + m * n0 + m * m + m * m;
  c.N_o = (m * m - m) / 2 + 2 * (nu - 1) * m * m + 2 * m * m + m * m;
  c.controller_param_order = (m * k + n0 * k + n0 + m) * m;
  c.output_feedback_order = 2 * nu * m * m;
  return c;
}

long count_params_by_blocks(long n, long m, long n0) {
  check_dims(n, m, n0);
  const long k = n - n0;
  const long theta1 = m * k * m;
  const long theta2 = n0 * k * m;
  const long theta20 = n0 * m;
  const long theta3 = m * m;
  long theta_i = 0;
  for (long i = 2; i <= m; ++i) theta_i += i - 1;
  const long psi = m * m;
  return theta1 + theta2 + theta20 + theta3 + theta_i + psi;
}

IntegratorCounts count_integrators(long n, long m, long n0, long n_h, long n_e) {
  check_dims(n, m, n0);
  if (n_h < 1) throw DimensionError("complexity: need n_h >= 1");
  if (n_e < 0) throw DimensionError("complexity: need n_e >= 0");
  const long nu = n - m + 1;
  return {n_h * ((m + n0) * (n - n0 + 1) + m) + n_e, n_h * (2 * nu * m + m) + n_e};
}

ComplexityReport complexity_report(long n, long m, long n0, long n_h, long n_e) {
  ComplexityReport r;
  r.n = n;
  r.M = m;
  r.n0 = n0;
  r.nu_bar = n - m + 1;
  r.n_h = n_h;
  r.n_e = n_e;
  r.params = count_params(n, m, n0);
  r.integrators = count_integrators(n, m, n0, n_h, n_e);
  r.f = closed_form(n, m, n0);
  r.reduced = r.params.N_ps < r.params.N_o;
  return r;
}

std::string format_report(const ComplexityReport& r) {
  std::ostringstream out;
  out << "n = " << r.n << "\nM = " << r.M << "\nn0 = " << r.n0 << "\nnu_bar = " << r.nu_bar
      << "\nn_h = " << r.n_h << "\nn_e = " << r.n_e << "\nN_ps = " << r.params.N_ps
      << "\nN_o = " << r.params.N_o << "\nN_ps_minus_N_o = " << r.params.N_ps - r.params.N_o
      << "\nclosed_form_f = " << r.f << "\nNprime_ps = " << r.integrators.Nprime_ps
      << "\nNprime_o = " << r.integrators.Nprime_o
      << "\ncontroller_param_order = " << r.params.controller_param_order
      << "\noutput_feedback_param_order = " << r.params.output_feedback_order
      << "\nreduced = " << (r.reduced ? "true" : "false") << '\n';
  return out.str();
}

ConditionReport reduction_conditions(long n, long m) {
  check_dims(n, m, 1);
  ConditionReport rep;
  rep.n = n;
  rep.M = m;
  for (long n0 = 1; n0 <= n; ++n0) {
    ConditionRow row;
    row.n0 = n0;
    row.f = closed_form(n, m, n0);
    row.reduced = row.f < 0;
    if (n > 3 * m - 1) {
      row.prose_prediction = n0 < m || n0 > n - 2 * m + 1;
    } else if (n < 3 * m - 1) {
      row.prose_prediction = n0 > m;
    }
    if (row.prose_prediction != row.reduced) {
      std::ostringstream os;
      os << "n=" << n << " M=" << m << " n0=" << n0 << ": f=" << row.f
         << (row.reduced ? " (reduction)" : " (no reduction)") << " but the shortcut predicts "
         << (row.prose_prediction ? "reduction" : "no reduction");
      rep.findings.push_back(os.str());
    }
    rep.rows.push_back(row);
  }
  rep.minimal_prose = 2 * m < n;
  rep.minimal_direct = closed_form(n, m, 1) < 0;
  if (rep.minimal_prose != rep.minimal_direct) {
    std::ostringstream os;
    os << "n=" << n << " M=" << m << " n0=1: M < n/2 is "
       << (rep.minimal_prose ? "true" : "false") << " but f=" << closed_form(n, m, 1);
    rep.findings.push_back(os.str());
  }
  return rep;
}

MinMResult find_min_M(long n) {
  if (n < 1) throw DimensionError("complexity: need n >= 1");
  MinMResult r;
  r.n = n;
  long best = 0;
  for (long m = 1; m <= n; ++m) {
    const long f = closed_form(n, m, 1);
    r.f_by_M.push_back(f);
    if (m == 1 || f < best) {
      best = f;
      r.best_M = m;
    }
  }
  r.best_saving = -best;
  r.predicted_M = static_cast<double>(n + 2) / 4.0;
  r.predicted_saving = static_cast<double>((n - 2) * (n - 2)) / 8.0;
  return r;
}

std::string sweep_n0_csv(long n, long m, long n_h, long n_e) {
  std::ostringstream out;
  out << "n,M,n0,N_ps,N_o,f,Nprime_ps,Nprime_o,controller_param_order,"
         "output_feedback_param_order,reduced\n";
  for (long n0 = 1; n0 <= n; ++n0) {
    const auto r = complexity_report(n, m, n0, n_h, n_e);
    out << n << ',' << m << ',' << n0 << ',' << r.params.N_ps << ',' << r.params.N_o << ','
        << r.f << ',' << r.integrators.Nprime_ps << ',' << r.integrators.Nprime_o << ','
        << r.params.controller_param_order << ',' << r.params.output_feedback_order << ','
        << (r.reduced ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace psmrac
