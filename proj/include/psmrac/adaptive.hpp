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
 * @file adaptive.hpp
 * @brief Regressor filters, estimation error, normalised gradient laws and
 *        the Lyapunov diagnostic of the partial-state feedback MRAC.
 */

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "psmrac/interactor.hpp"
#include "psmrac/matching.hpp"
#include "psmrac/polymatrix.hpp"

namespace psmrac {

/// Bank of identical controllable-canonical chains, one per channel, for a
/// monic denominator den of degree k. State z[c*k + j] = s^j/den [v_c].
class ChainFilter {
 public:
  ChainFilter() = default;
  ChainFilter(Polynomial den, int channels);

  int order() const { return order_; }
  int channels() const { return channels_; }
  int state_size() const { return order_ * channels_; }
  const Polynomial& denominator() const { return den_; }

  /// dz = A z + B v.
  void derivative(const double* z, const double* v, double* dz) const;
  /// s^j/den [v_c] for j < k.
  double power(const double* z, int channel, int j) const { return z[channel * order_ + j]; }
  /// N(s)/den [v_c] for deg N <= k; the degree-k term uses the feedthrough.
  double apply(const double* z, const double* v, int channel, const Polynomial& num) const;
  /// Companion matrix of one channel (its spectrum is the root set of den).
  Eigen::MatrixXd channel_matrix() const;

 private:
  Polynomial den_;
  std::vector<double> a_;
  int order_ = 0;
  int channels_ = 0;
};

struct AdaptationGains {
  /// Gain of the Psi law.
  Eigen::MatrixXd Gamma;
  /// Gamma_theta_i for i = 2..M, of size (i-1) x (i-1).
  std::vector<Eigen::MatrixXd> Gamma_theta;
  Eigen::MatrixXd D_s;

  /// Gamma = g I, Gamma_theta_i = g_theta I.
  static AdaptationGains uniform(int m, double g, double g_theta, const Eigen::MatrixXd& d_s);
  void validate(int m) const;
};

/// Estimated (or true) adaptive parameters.
struct AdaptiveParams {
  /// Stacked Theta, omega_dim x M.
  Eigen::MatrixXd Theta;
  /// theta_i for i = 2..M (index i-2), each of length i-1.
  std::vector<Eigen::VectorXd> theta;
  Eigen::MatrixXd Psi;

  static AdaptiveParams zeros(int omega_dim, int m);
  int flat_size() const;
  void pack(double* out) const;
  void unpack(const double* in);
};

/// Ground truth for the error model and the Lyapunov function.
struct TruthParams {
  AdaptiveParams params;
  Eigen::MatrixXd S;
};

/// Theta* from matching, Psi* = D_s S, theta*_i from the rows of
/// L_s^{-1} - I.
TruthParams make_truth(const ControllerParams& theta_star, const LDSDecomposition& lds);

struct RegressorSnapshot {
  Eigen::VectorXd omega;
  Eigen::VectorXd zeta;
  Eigen::VectorXd xi_sig;
  Eigen::VectorXd ebar;
  std::vector<Eigen::VectorXd> eta;
  Eigen::VectorXd epsilon;
  double m2 = 1.0;
};

struct AdaptationRates {
  Eigen::MatrixXd dTheta;
  std::vector<Eigen::VectorXd> dtheta;
  Eigen::MatrixXd dPsi;
};

/// Controller filter states and the signals derived from them. The filter
/// state is a flat vector laid out as [omega1 | omega2 | zeta | h u | ebar].
class AdaptiveController {
 public:
  AdaptiveController(int m, int n0, const InteractorBundle& xi, const FilterSpec& fspec);

  int m() const { return m_; }
  int n0() const { return n0_; }
  int k() const { return k_; }
  int omega_dim() const { return m_ * k_ + n0_ * k_ + n0_ + m_; }
  int state_size() const;

  const ChainFilter& omega1_filter() const { return w1_; }
  const ChainFilter& omega2_filter() const { return w2_; }
  const ChainFilter& zeta_filter() const { return zeta_; }
  const ChainFilter& hu_filter() const { return hu_; }
  const ChainFilter& ebar_filter() const { return eb_; }

  /// omega = [omega1; omega2; y0; r].
  Eigen::VectorXd omega(const double* z, const Eigen::VectorXd& y0,
                        const Eigen::VectorXd& r) const;
  /// xi_m(s) h(s) [e], proper, with feedthrough of e.
  Eigen::VectorXd ebar(const double* z, const Eigen::VectorXd& e) const;
  /// Filter state derivative for inputs u, y0, omega, e.
  void derivative(const double* z, const Eigen::VectorXd& u, const Eigen::VectorXd& y0,
                  const Eigen::VectorXd& omega, const Eigen::VectorXd& e, double* dz) const;
  /// zeta, xi, ebar, eta, epsilon, m^2 at the current state.
  RegressorSnapshot estimation_error(const double* z, const AdaptiveParams& p,
                                     const Eigen::VectorXd& omega,
                                     const Eigen::VectorXd& e) const;

 private:
  int m_;
  int n0_;
  int k_;
  ChainFilter w1_, w2_, zeta_, hu_, eb_;
  PolyMatrix xi_;
};

/// u = Theta^T omega.
Eigen::VectorXd control_output(const Eigen::MatrixXd& theta, const Eigen::VectorXd& omega);

/// theta_i' = -G_i eps_i eta_i / m^2, Theta' = -zeta eps^T D_s / m^2,
/// Psi' = -Gamma eps xi^T / m^2.
AdaptationRates adaptation_derivatives(const RegressorSnapshot& snap,
                                       const AdaptationGains& gains);

/// 1/2 (sum theta~^T G_i^{-1} theta~ + tr(Psi~^T Gamma^{-1} Psi~) + tr(Theta~ S Theta~^T)).
double lyapunov_value(const AdaptiveParams& est, const TruthParams& truth,
                      const AdaptationGains& gains);

/// epsilon from the parameter errors: D_s S Theta~^T zeta + theta~_i^T eta_i + Psi~ xi.
Eigen::VectorXd error_model(const RegressorSnapshot& snap, const AdaptiveParams& est,
                            const TruthParams& truth, const Eigen::MatrixXd& d_s);

}  // namespace psmrac
