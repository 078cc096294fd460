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

#pragma once

#include <algorithm>
#include <random>

#include <vector>

#include "psmrac/error.hpp"
#include "psmrac/simulate.hpp"

namespace psmrac::testing {

/// Random stable, minimum-phase 4-state 2-output plant with a random
/// two-row C0, a diagonal interactor and ground truth attached.
inline Scenario random_error_model_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  const int n = 4, m = 2, n0 = 2;
  for (;;) {
    StateSpace s;
    s.A = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return nd(rng); });
    s.A -= (s.A.eigenvalues().real().maxCoeff() + 0.5) * Eigen::MatrixXd::Identity(n, n);
    s.B = Eigen::MatrixXd::NullaryExpr(n, m, [&] { return nd(rng); });
    s.C = Eigen::MatrixXd::NullaryExpr(m, n, [&] { return nd(rng); });
    const PartialStateSelector sel{Eigen::MatrixXd::NullaryExpr(n0, n, [&] { return nd(rng); })};
    bool ok = check_observable(s.A, sel.C0).observable;
    for (const auto& z : transmission_zeros(s)) ok = ok && z.real() < -0.1;
    if (!ok) continue;
    try {
      Scenario sc;
      sc.name = "random";
      sc.plant = s;
      sc.sel = sel;
      const RationalMatrix g = transfer_matrix(s);
      sc.xi = find_diagonal_interactor(g, 2.0);
      sc.fspec = default_filter_spec(n, n0, sc.xi.d_m);
      const LDSDecomposition lds = lds_decompose(high_freq_gain(g, sc.xi), {1.0, 1.0});
      sc.gains = AdaptationGains::uniform(m, 5.0, 5.0, lds.D_s);
      sc.reference.tones = {{{1.0, 0.5, 0.0}, {0.3, 2.0, 0.1}}, {{0.7, 0.3, 0.4}}};
      sc.x0 = 0.1 * Eigen::VectorXd::NullaryExpr(n, [&] { return nd(rng); });
      sc.t_end = 40.0;
      sc.dt = 0.002;
      attach_truth(sc);
      return sc;
    } catch (const Error&) {
      continue;
    }
  }
}

inline double nearest_distance(const std::vector<Complex>& set, Complex z) {
  double d = 1e300;
  for (const auto& s : set) d = std::min(d, std::abs(s - z));
  return d;
}

/// Largest distance from a requested pole to the placed spectrum.
inline double placement_error(const ObserverDesign& d, const std::vector<Complex>& poles) {
  const Eigen::VectorXcd ev = d.error_dynamics.eigenvalues();
  const std::vector<Complex> got(ev.data(), ev.data() + ev.size());
  double worst = 0.0;
  for (const auto& p : poles) worst = std::max(worst, nearest_distance(got, p));
  return worst;
}

/// Largest ratio of |x - x_hat| to the envelope |P^{-1}| kappa(V) e^{alpha t} |w_err(0)|
/// with alpha the slowest placed pole and V the eigenvector matrix.
inline double envelope_ratio(const ObserverDesign& d, const ObserverTrajectory& tr) {
  const auto k = d.reduced_order();
  Eigen::EigenSolver<Eigen::MatrixXd> es(d.error_dynamics);
  const Eigen::VectorXd sv = es.eigenvectors().jacobiSvd().singularValues();
  const double kappa = sv(0) / sv(sv.size() - 1);
  const double alpha = es.eigenvalues().real().maxCoeff();
  const double gain = d.P_inv.rightCols(k).norm() * kappa;
  const double w0 = (d.P * (tr.x[0] - tr.x_hat[0])).tail(k).norm();
  double worst = 0.0;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    const double bound = gain * std::exp(alpha * tr.t[i]) * w0;
    worst = std::max(worst, (tr.x[i] - tr.x_hat[i]).norm() / (bound + 1e-12));
  }
  return worst;
}

struct ObserverCheck {
  int n = 0;
  int n0 = 0;
  double pole_error = 0.0;
  double envelope = 0.0;
};

/// One random observable configuration: random (A, b, C0) with n in [2, 6],
/// random stable poles (real or conjugate pairs), a bounded input and a
/// random initial state with zero observer state.
inline ObserverCheck random_observer_check(std::mt19937_64& rng, std::uint64_t seed) {
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<int> nsize(2, 6);
  std::uniform_real_distribution<double> pole(-6.0, -1.0);
  for (;;) {
    const int n = nsize(rng);
    const int n0 = std::uniform_int_distribution<int>(1, n - 1)(rng);
    StateSpace s{Eigen::MatrixXd::NullaryExpr(n, n, [&] { return nd(rng); }),
                 Eigen::MatrixXd::NullaryExpr(n, 1, [&] { return nd(rng); }),
                 Eigen::MatrixXd::NullaryExpr(1, n, [&] { return nd(rng); })};
    const PartialStateSelector sel{Eigen::MatrixXd::NullaryExpr(n0, n, [&] { return nd(rng); })};
    if (!check_observable(s.A, sel.C0).observable) continue;
    const int k = n - n0;
    std::vector<Complex> poles;
    while (static_cast<int>(poles.size()) < k) {
      if (k - static_cast<int>(poles.size()) >= 2 && nd(rng) > 0.5) {
        const Complex p(pole(rng), -pole(rng));
        poles.push_back(p);
        poles.push_back(std::conj(p));
      } else {
        poles.emplace_back(pole(rng), 0.0);
      }
    }
    const ObserverDesign d = design_reduced_observer(s, sel, poles, seed);
    const Eigen::VectorXd x0 = Eigen::VectorXd::NullaryExpr(n, [&] { return nd(rng); });
    const auto u = [](double t) { return Eigen::VectorXd::Constant(1, std::sin(t)).eval(); };
    const auto tr = simulate_observer(d, s, sel, u, x0, Eigen::VectorXd::Zero(k), 2.0, 0.002);
    return {n, n0, placement_error(d, poles), envelope_ratio(d, tr)};
  }
}

/// Largest |eps - eps_model| / (1 + |eps|) for t >= t_from.
inline double error_model_gap(const Trajectory& tr, double t_from) {
  double worst = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (tr.t[i] < t_from) continue;
    const double d = (tr.eps[i] - tr.eps_model[i]).cwiseAbs().maxCoeff();
    worst = std::max(worst, d / (1.0 + tr.eps[i].cwiseAbs().maxCoeff()));
  }
  return worst;
}

}  // namespace psmrac::testing
