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
 * @file interactor.hpp
 * @brief Modified left interactor, high-frequency gain and the LDS
 *        factorisation K_p = L_s D_s S.
 */

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "psmrac/polymatrix.hpp"

namespace psmrac {

/// Lower-triangular xi_m(s) with monic stable diagonal entries.
struct InteractorBundle {
  PolyMatrix xi_m;
  int d_m = 0;
  std::vector<int> diag_degrees;

  int m() const { return xi_m.rows(); }
  bool is_diagonal() const;

  /// diag{(s + a)^{l_i}}.
  static InteractorBundle diagonal(double a, const std::vector<int>& degrees);
  /// Takes a user-supplied lower-triangular xi_m; validates it.
  static InteractorBundle from_matrix(PolyMatrix xi);
  /// Throws AssumptionError if the structural conditions fail.
  void validate() const;
};

struct HighFrequencyGain {
  Eigen::MatrixXd Kp;
  /// Leading principal minors Delta_1..Delta_M.
  std::vector<double> minors;
  std::vector<int> signs;
  /// d*_i = Delta_i / Delta_{i-1}, Delta_0 = 1.
  std::vector<double> d_star;

  bool minors_nonzero(double tol = 1e-12) const;
};

/// Leading minors by elimination without pivoting. A zero pivot ends the
/// recursion and the remaining minors are reported as zero.
std::vector<double> leading_minors(const Eigen::MatrixXd& k);

/// lim_{s->inf} xi_m(s) G(s).
HighFrequencyGain high_freq_gain(const RationalMatrix& g, const InteractorBundle& xi);

/// Smallest diag{(s + a)^{l_i}} with a finite nonsingular limit.
InteractorBundle find_diagonal_interactor(const RationalMatrix& g, double a);

struct LDSDecomposition {
  Eigen::MatrixXd L_s;
  Eigen::MatrixXd D_s;
  Eigen::MatrixXd S;
  std::vector<double> gamma;
  /// L_s^{-1} - I, strictly lower triangular.
  Eigen::MatrixXd Theta0_star;
  double reconstruction_error = 0.0;
};

/// Doolittle K_p = L D U without pivoting, then D_s = diag(sign(d*_i) gamma_i),
/// S = U^T D_s^{-1} D U and L_s = L D_s U^{-T} D_s^{-1}.
LDSDecomposition lds_decompose(const HighFrequencyGain& kp,
                               const std::vector<double>& gamma);

}  // namespace psmrac
