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
 * @file plant.hpp
 * @brief LTI plant model, structural checks and the reduced-order observer
 *        built on a partial-state measurement y0 = C0 x.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "psmrac/polymatrix.hpp"

namespace psmrac {

/// Square M-input M-output plant x' = A x + B u, y = C x.
struct StateSpace {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd C;

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.cols()); }
  /// Throws DimensionError unless A is n x n, B n x M, C M x n, n >= M >= 1.
  void validate() const;
};

/// Measured partial state y0 = C0 x.
struct PartialStateSelector {
  Eigen::MatrixXd C0;

  int n0() const { return static_cast<int>(C0.rows()); }
  /// Rows e_i^T for the given zero-based state indices.
  static PartialStateSelector from_states(int n, const std::vector<int>& states);
};

/// Numerical rank with threshold rel_tol * sigma_max.
int numerical_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-9);

struct ObservabilityReport {
  bool observable = false;
  int rank = 0;
  /// Singular values of the block-normalised observability stack.
  Eigen::VectorXd singular_values;
  /// sigma_min / sigma_max of the block-normalised stack.
  double normalized_ratio = 0.0;
  /// sigma_min / sigma_max of the raw stack [C0; C0 A; ...].
  double raw_ratio = 0.0;
};

/// Rank test of [C0; C0 A; ...; C0 A^{n-1}] with every block scaled to unit
/// Frobenius norm; the threshold is 1e-9 * sigma_max.
ObservabilityReport check_observable(const Eigen::MatrixXd& a,
                                     const Eigen::MatrixXd& c0);

/// P = [C0; T] with T an orthonormal basis of the complement of the row space
/// of C0, so that C0 P^{-1} = [I, 0].
Eigen::MatrixXd build_transform(const Eigen::MatrixXd& c0);

struct ObserverDesign {
  Eigen::MatrixXd P;
  Eigen::MatrixXd P_inv;
  Eigen::MatrixXd A11, A12, A21, A22;
  Eigen::MatrixXd B1, B2;
  /// (n - n0) x n0 observer gain.
  Eigen::MatrixXd L_r;
  /// A22 - L_r A12; the error dynamics of the reduced observer.
  Eigen::MatrixXd error_dynamics;
  /// w' = error_dynamics w + input_gain u + output_gain y0
  Eigen::MatrixXd input_gain;
  Eigen::MatrixXd output_gain;
  /// det(sI - A22 + L_r A12)
  Polynomial lambda_obs;
  /// w = N1/Lambda [u] + N2/Lambda [y0] + decaying term
  PolyMatrix N1;
  PolyMatrix N2;
  std::vector<Complex> poles;
  /// sigma_min/sigma_max of the Sylvester solution used for placement.
  double placement_conditioning = 0.0;
  int attempts = 0;

  int reduced_order() const { return static_cast<int>(A22.rows()); }
  /// x-hat = P^{-1} [y0; w + L_r y0]
  Eigen::VectorXd estimate(const Eigen::VectorXd& y0, const Eigen::VectorXd& w) const;
  /// The w(0) giving zero initial estimation error for plant state x0.
  Eigen::VectorXd exact_initial_w(const Eigen::VectorXd& x0) const;
};

/// {-4, -4.5, -5, ...}: count poles spaced by 0.5.
std::vector<Complex> default_observer_poles(int count);

/// Reduced-order observer with eig(A22 - L_r A12) = poles, placed through
/// the Sylvester equation A22^T X - X F = A12^T Q (random Q, up to five
/// draws from a generator seeded with `seed`).
ObserverDesign design_reduced_observer(const StateSpace& sys,
                                       const PartialStateSelector& sel,
                                       const std::vector<Complex>& poles,
                                       std::uint64_t seed = 0x5eed);

struct ObserverTrajectory {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> x;
  std::vector<Eigen::VectorXd> x_hat;
};

using InputSignal = std::function<Eigen::VectorXd(double)>;

/// Plant and observer integrated jointly with fixed-step RK4.
ObserverTrajectory simulate_observer(const ObserverDesign& design,
                                     const StateSpace& sys,
                                     const PartialStateSelector& sel,
                                     const InputSignal& u,
                                     const Eigen::VectorXd& x0,
                                     const Eigen::VectorXd& w0, double t_end,
                                     double dt);

/// Zeros of det G(s): the Rosenbrock determinant sampled on the unit circle
/// and interpolated.
std::vector<Complex> transmission_zeros(const StateSpace& sys);

/// C adj(sI - A) B / det(sI - A).
RationalMatrix transfer_matrix(const StateSpace& sys);

/// Linearised NASA GTM: x = [u_b, w_b, q_b, theta, v_b, r_b, p_b, phi],
/// u = [elevator, aileron], y = [theta, phi].
StateSpace gtm_model();

/// Whitespace-separated rows, '#' starts a comment. Blank lines are ignored.
Eigen::MatrixXd parse_matrix(const std::string& text);
Eigen::MatrixXd read_matrix_file(const std::string& path);

/// Plant file: blocks introduced by lines "A:", "B:" and "C:" each followed by
/// matrix rows in the parse_matrix format.
StateSpace parse_plant(const std::string& text);
StateSpace read_plant_file(const std::string& path);
std::string format_plant(const StateSpace& sys);

}  // namespace psmrac
