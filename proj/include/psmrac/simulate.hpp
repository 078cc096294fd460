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
 * @file simulate.hpp
 * @brief Fixed-step RK4 closed loop: plant, reference model and adaptive
 *        controller integrated as one augmented ODE.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "psmrac/adaptive.hpp"
#include "psmrac/interactor.hpp"
#include "psmrac/matching.hpp"
#include "psmrac/plant.hpp"

namespace psmrac {

/// r_i(t) = offset_i + sum_j amplitude_j sin(frequency_j t + phase_j).
struct ReferenceSignal {
  struct Tone {
    double amplitude = 0.0;
    double frequency = 0.0;  // rad/s
    double phase = 0.0;      // rad
  };
  std::vector<std::vector<Tone>> tones;
  std::vector<double> offsets;

  int channels() const { return static_cast<int>(tones.size()); }
  Eigen::VectorXd operator()(double t) const;
  /// |offset_i| + sum_j |amplitude_j|.
  Eigen::VectorXd amplitude() const;
};

/// x' = A x + B r, y_m = C x with transfer xi_m^{-1}(s).
struct ReferenceModel {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd C;
  int order() const { return static_cast<int>(A.rows()); }
};

/// Per-channel chains of 1/d_i for diagonal xi_m, otherwise one chain per
/// column of adj(xi_m)/det(xi_m).
ReferenceModel reference_model_realization(const InteractorBundle& xi);

enum class ThetaInit { kZero, kTruth, kTruthPerturbed };

struct Scenario {
  std::string name;
  StateSpace plant;
  PartialStateSelector sel;
  InteractorBundle xi;
  FilterSpec fspec;
  AdaptationGains gains;
  ReferenceSignal reference;
  Eigen::VectorXd x0;
  /// Reference-model state; empty means zero.
  Eigen::VectorXd ym_state0;
  ThetaInit theta_init = ThetaInit::kZero;
  /// Relative size of the Theta(0) perturbation for kTruthPerturbed.
  double theta_perturbation = 0.1;
  std::uint64_t seed = 1;
  /// Psi(0) = psi0_factor * 0.5 * diag(sign d*_i).
  double psi0_factor = 1.0;
  double t_end = 400.0;
  double dt = 0.005;
  int decimation = 100;
  double divergence_threshold = 1e6;
  /// Ground truth, required for kTruth* init and the Lyapunov monitor.
  std::optional<TruthParams> truth;
  std::optional<ControllerParams> theta_star;

  void validate() const;
};

/// Solves matching and the LDS factorisation and stores the truth.
void attach_truth(Scenario& sc);

struct RunMode {
  enum class Kind { kAdaptive, kFrozen };
  Kind kind = Kind::kAdaptive;
  /// Used in frozen mode.
  std::optional<ControllerParams> frozen;
  /// Frozen mode: theta_i and Psi used for the estimation error (zero if unset).
  std::optional<AdaptiveParams> frozen_full;

  static RunMode adaptive() { return {}; }
  static RunMode frozen_at(const ControllerParams& p) { return {Kind::kFrozen, p, {}}; }
  static RunMode frozen_full_at(const ControllerParams& p, const AdaptiveParams& full) {
    return {Kind::kFrozen, p, full};
  }
};

struct Trajectory {
  int n = 0;
  int m = 0;
  std::vector<double> t;
  std::vector<Eigen::VectorXd> x, y, ym, e, u, eps;
  /// Parameter-error form of epsilon, when truth is available.
  std::vector<Eigen::VectorXd> eps_model;
  std::vector<double> m2;
  /// Lyapunov function when truth is available, NaN otherwise.
  std::vector<double> V;
  std::vector<double> theta_t;
  std::vector<Eigen::MatrixXd> theta;
  bool diverged = false;
  long diverged_step = -1;
  std::string message;

  std::size_t size() const { return t.size(); }
};

Trajectory run_closed_loop(const Scenario& sc, const RunMode& mode);

/// GTM preset tuning: Lambda = (s + 1)^{n-n0} keeps omega1, omega2 at unit
/// DC gain, and gamma_i sets the rate of the Theta law.
inline constexpr double kGtmLambdaPole = 1.0;
inline constexpr double kGtmGamma = 300.0;

/// Six GTM presets, Cases I-VI, with truth attached.
std::vector<Scenario> case_presets();
/// Case by index 1..6.
Scenario case_preset(int index);

struct Metrics {
  bool valid = false;
  std::vector<double> final_mean_abs_e;
  std::vector<double> relative_error;
  double sup_x = 0.0;
  double sup_u = 0.0;
  double sup_e = 0.0;
  double sup_theta = 0.0;
  double v0 = 0.0;
  double v_final = 0.0;
  int v_violations = 0;
  double v_worst_increase = 0.0;
  /// sum of |eps|^2/m^2 over the second half over the first half.
  double l2_tail_ratio = 0.0;
  std::size_t samples = 0;
};

/// Window statistics over the last window_fraction of samples; relative
/// errors divide by the given per-channel amplitudes. V increases larger
/// than v_tol * V(0) between samples count as violations. The metrics are
/// invalid if the run diverged or a stored x, u or e exceeds signal_bound.
Metrics compute_metrics(const Trajectory& tr, double window_fraction,
                        const Eigen::VectorXd& amplitude, double v_tol = 1e-4,
                        double signal_bound = 1e6);

/// All final-window relative errors below tol and the run not diverged.
bool tracking_ok(const Metrics& m, double tol = 0.05);

/// Columns t, x1..xn, y1..yM, ym1..ymM, e1..eM, u1..uM, eps1..epsM, m2, V.
void write_trajectory_csv(const std::string& path, const Trajectory& tr);
Trajectory read_trajectory_csv(const std::string& path);
std::string format_metrics(const Metrics& m);

}  // namespace psmrac
