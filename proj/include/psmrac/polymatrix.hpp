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
 * @file polymatrix.hpp
 * @brief Real polynomials, polynomial matrices and rational transfer matrices.
 *
 * Polynomials store coefficients in ascending order (coeffs[k] multiplies
 * s^k) and are trimmed after every arithmetic operation: a trailing
 * coefficient counts as zero when |c| < 1e-12 * (1 + max|coeffs|).
 */

#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace psmrac {

using Complex = std::complex<double>;

class Polynomial {
 public:
  static constexpr double kTrimTolerance = 1e-12;

  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);
  Polynomial(std::initializer_list<double> coeffs)
      : Polynomial(std::vector<double>(coeffs)) {}

  static Polynomial constant(double c);
  static Polynomial monomial(int degree, double c = 1.0);
  /// (s + a)^k
  static Polynomial linear_power(double a, int k);
  /// Monic real polynomial with the given roots; complex roots must come in
  /// conjugate pairs.
  static Polynomial from_roots(std::span<const Complex> roots);

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_monic() const { return !is_zero() && coeffs_.back() == 1.0; }
  double leading() const { return is_zero() ? 0.0 : coeffs_.back(); }
  const std::vector<double>& coeffs() const { return coeffs_; }
  /// Coefficient of s^k, zero beyond the degree.
  double operator[](int k) const {
    return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k] : 0.0;
  }

  Complex operator()(Complex s) const;
  double operator()(double s) const;

  Polynomial derivative() const;
  Polynomial monic() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(double c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) {
    return a += b;
  }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) {
    return a -= b;
  }
  friend Polynomial operator*(Polynomial a, double c) { return a *= c; }
  friend Polynomial operator*(double c, Polynomial a) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim();
  std::vector<double> coeffs_;
};

/// Quotient and remainder of a / b.
std::pair<Polynomial, Polynomial> divmod(const Polynomial& a,
                                         const Polynomial& b);

/// All degree(p) roots (with multiplicity), from the eigenvalues of the
/// companion matrix followed by Newton polishing. Throws NumericalError for
/// the zero polynomial and for constants.
std::vector<Complex> poly_roots(const Polynomial& p);

/// Normalised residual |p(z)| / (|lead| * max(1,|z|)^deg) used to audit roots.
double root_residual(const Polynomial& p, Complex z);

class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(int rows, int cols);

  static PolyMatrix identity(int n);
  static PolyMatrix diagonal(const std::vector<Polynomial>& diag);
  /// Constant polynomial matrix.
  static PolyMatrix from_matrix(const Eigen::MatrixXd& m);
  /// sum_k coeffs[k] s^k with coeffs all of the same shape.
  static PolyMatrix from_coefficients(const std::vector<Eigen::MatrixXd>& c);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Polynomial& operator()(int i, int j) { return entries_[i * cols_ + j]; }
  const Polynomial& operator()(int i, int j) const {
    return entries_[i * cols_ + j];
  }

  /// Largest entry degree (-1 when every entry is zero).
  int max_degree() const;
  bool is_lower_triangular() const;
  /// Real matrix multiplying s^k.
  Eigen::MatrixXd coefficient(int k) const;
  Eigen::MatrixXcd eval(Complex s) const;
  PolyMatrix transpose() const;

  friend PolyMatrix operator*(const PolyMatrix& p, const PolyMatrix& q);
  friend PolyMatrix operator+(const PolyMatrix& p, const PolyMatrix& q);
  friend PolyMatrix operator*(const PolyMatrix& p, double c);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Polynomial> entries_;
};

PolyMatrix polymat_mul(const PolyMatrix& p, const PolyMatrix& q);

/// Polynomial numerator over a scalar monic denominator.
struct RationalMatrix {
  PolyMatrix numerator;
  Polynomial denominator;

  int rows() const { return numerator.rows(); }
  int cols() const { return numerator.cols(); }
  bool strictly_proper() const;
  bool proper() const;
};

/// Throws NumericalError carrying s when s is (numerically) a pole.
Eigen::MatrixXcd eval_rational(const RationalMatrix& g, Complex s);

/// Output of the Faddeev-LeVerrier recursion for (sI - A)^{-1}.
struct Resolvent {
  /// adj(sI - A) = sum_k adjugate[k] s^k, k = 0..n-1.
  std::vector<Eigen::MatrixXd> adjugate;
  /// det(sI - A), monic of degree n.
  Polynomial characteristic;
  /// max |A*M_n + c_0 I| / (1 + max |c_0|, |A|*|M_n|): the terminating
  /// identity of the recursion.
  double closure_residual = 0.0;
};

Resolvent faddeev_leverrier(const Eigen::MatrixXd& a);

/// C adj(sI - A) B / det(sI - A). C may have any number of rows.
RationalMatrix faddeev_resolvent(const Eigen::MatrixXd& a,
                                 const Eigen::MatrixXd& b,
                                 const Eigen::MatrixXd& c);

/// C (sI - A)^{-1} B by a dense complex solve; the oracle for the
/// resolvent path and the evaluator used by the matching solver.
Eigen::MatrixXcd transfer_at(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                             const Eigen::MatrixXd& c, Complex s);

}  // namespace psmrac
