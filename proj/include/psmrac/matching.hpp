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
 * @file matching.hpp
 * @brief Nominal controller parameters from the plant-model matching
 *        identity, evaluated by frequency sampling.
 *
 * The regressor is omega = [omega1; omega2; y0; r] with
 *   omega1 = [u/L; s u/L; ...; s^{k-1} u/L],  omega2 likewise over y0,
 * where L = Lambda(s), k = n - n0, and blocks are ordered by power of s.
 */

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "psmrac/interactor.hpp"
#include "psmrac/plant.hpp"
#include "psmrac/polymatrix.hpp"

namespace psmrac {

struct FilterSpec {
  /// Monic stable, degree n - n0.
  Polynomial Lambda;
  /// h(s) = 1/f(s); monic stable, degree d_m.
  Polynomial f;

  int k() const { return Lambda.degree(); }
  void validate(int n, int n0, int d_m) const;
};

/// Lambda = (s + lambda_pole)^{n-n0}, f = (s + f_pole)^{d_m}.
FilterSpec default_filter_spec(int n, int n0, int d_m, double lambda_pole = 3.0,
                               double f_pole = 5.0);

/// Throws AssumptionError unless every root has Re < 0.
void require_stable(const Polynomial& p, const std::string& what);

struct ControllerParams {
  Eigen::MatrixXd Theta1;   // M k x M
  Eigen::MatrixXd Theta2;   // n0 k x M
  Eigen::MatrixXd Theta20;  // n0 x M
  Eigen::MatrixXd Theta3;   // M x M

  static ControllerParams zeros(int m, int n0, int k);
  int m() const { return static_cast<int>(Theta3.rows()); }
  int n0() const { return static_cast<int>(Theta20.rows()); }
  int k() const { return n0() > 0 ? static_cast<int>(Theta2.rows()) / n0() : 0; }
  /// M k + n0 k + n0 + M.
  int omega_dim() const;
  /// [Theta1; Theta2; Theta20; Theta3^T], so that u = stacked^T omega.
  Eigen::MatrixXd stacked() const;
  static ControllerParams from_stacked(const Eigen::MatrixXd& theta, int m, int n0, int k);
};

struct MatchSolution {
  ControllerParams params;
  /// max |lhs - rhs| / (1 + max |rhs|) at held-out points.
  double residual = 0.0;
  /// Smallest retained singular value over the largest, column-scaled system.
  double sigma_ratio = 0.0;
  /// Dimension of the numerical null space of the sampled system.
  int nullity = 0;
  std::vector<Complex> sample_points;

  bool matched() const { return residual < 1e-6; }
};

/// Theta3 = K_p^{-1}; (Theta1, Theta2, Theta20) from the sampled identity
///   Theta1^T A1/L + Theta2^T A2 G0/L + Theta20^T G0 = I - Theta3 xi_m G,
/// minimum-norm when the sampled system is rank deficient.
MatchSolution solve_matching(const StateSpace& sys, const PartialStateSelector& sel,
                             const InteractorBundle& xi, const FilterSpec& fspec);

/// Relative residual of the identity at the given points.
double matching_residual(const ControllerParams& params, const StateSpace& sys,
                         const PartialStateSelector& sel, const InteractorBundle& xi,
                         const FilterSpec& fspec, const std::vector<Complex>& points);

struct MatchingVerification {
  double tail_error = 0.0;
  double max_error = 0.0;
  double reference_amplitude = 0.0;
  bool bounded = false;
  bool passed = false;
};

/// Frozen-parameter closed-loop run with a two-tone reference; passes when
/// the sup of |y - y_m| over the last quarter is below 1e-3 of the reference
/// amplitude. Implemented in simulate.cpp.
MatchingVerification verify_matching(const MatchSolution& sol, const StateSpace& sys,
                                     const PartialStateSelector& sel,
                                     const InteractorBundle& xi, const FilterSpec& fspec,
                                     double t_end, double dt);

/// Plain-text parameter file: a header line "M n0 k" followed by the rows
/// of the stacked matrix.
std::string format_params(const ControllerParams& p);
ControllerParams parse_params(const std::string& text);
void write_params_file(const std::string& path, const ControllerParams& p);
ControllerParams read_params_file(const std::string& path);

}  // namespace psmrac
