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

#include "psmrac/polymatrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "psmrac/error.hpp"

namespace psmrac {

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  trim();
}

void Polynomial::trim() {
  double scale = 0.0;
  for (double c : coeffs_) scale = std::max(scale, std::abs(c));
  const double tol = kTrimTolerance * (1.0 + scale);
  while (!coeffs_.empty() && std::abs(coeffs_.back()) < tol) coeffs_.pop_back();
}

Polynomial Polynomial::constant(double c) { return Polynomial({c}); }

Polynomial Polynomial::monomial(int degree, double c) {
  std::vector<double> v(static_cast<size_t>(degree) + 1, 0.0);
  v.back() = c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::linear_power(double a, int k) {
  Polynomial p = constant(1.0);
  const Polynomial factor({a, 1.0});
  for (int i = 0; i < k; ++i) p = p * factor;
  return p;
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots) {
  std::vector<Complex> c{1.0};
  for (const Complex& r : roots) {
    std::vector<Complex> next(c.size() + 1, 0.0);
    for (size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  std::vector<double> real(c.size());
  double scale = 0.0;
  for (size_t k = 0; k < c.size(); ++k) {
    real[k] = c[k].real();
    scale = std::max(scale, std::abs(c[k]));
  }
  for (const Complex& v : c) {
    if (std::abs(v.imag()) > 1e-9 * (1.0 + scale)) {
      throw NumericalError("from_roots: roots are not closed under conjugation");
    }
  }
  return Polynomial(std::move(real));
}

Complex Polynomial::operator()(Complex s) const {
  Complex acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

double Polynomial::operator()(double s) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (degree() < 1) return {};
  std::vector<double> d(coeffs_.size() - 1);
  for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * k;
  return Polynomial(std::move(d));
}

Polynomial Polynomial::monic() const {
  if (is_zero()) throw NumericalError("monic: zero polynomial");
  std::vector<double> c = coeffs_;
  const double lead = c.back();
  for (double& v : c) v /= lead;
  c.back() = 1.0;
  return Polynomial(std::move(c));
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
  for (size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
  for (size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(double c) {
  for (double& v : coeffs_) v *= c;
  trim();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (size_t j = 0; j < b.coeffs_.size(); ++j) {
      c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return Polynomial(std::move(c));
}

std::pair<Polynomial, Polynomial> divmod(const Polynomial& a,
                                         const Polynomial& b) {
  if (b.is_zero()) throw NumericalError("divmod: division by zero polynomial");
  if (a.degree() < b.degree()) return {Polynomial{}, a};
  std::vector<double> rem = a.coeffs();
  const int db = b.degree();
  std::vector<double> quot(static_cast<size_t>(a.degree() - db) + 1, 0.0);
  for (int k = a.degree() - db; k >= 0; --k) {
    const double q = rem[k + db] / b.leading();
    quot[k] = q;
    for (int j = 0; j <= db; ++j) rem[k + j] -= q * b[j];
    rem[k + db] = 0.0;
  }
  rem.resize(static_cast<size_t>(db));
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

double root_residual(const Polynomial& p, Complex z) {
  const double scale =
      std::abs(p.leading()) * std::pow(std::max(1.0, std::abs(z)), p.degree());
  return std::abs(p(z)) / scale;
}

std::vector<Complex> poly_roots(const Polynomial& p) {
  if (p.is_zero()) throw NumericalError("poly_roots: roots undefined for the zero polynomial");
  const int d = p.degree();
  if (d < 1) throw NumericalError("poly_roots: constant polynomial has no roots");

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) companion(i, d - 1) = -p[i] / p.leading();

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("poly_roots: eigenvalue iteration did not converge");
  }
  const Polynomial dp = p.derivative();
  std::vector<Complex> roots;
  roots.reserve(d);
  for (int i = 0; i < d; ++i) {
    Complex z = solver.eigenvalues()[i];
    // Newton polishing; kept only while it lowers the residual.
    for (int it = 0; it < 3; ++it) {
      const Complex dz = dp(z);
      if (std::abs(dz) == 0.0) break;
      const Complex cand = z - p(z) / dz;
      if (root_residual(p, cand) >= root_residual(p, z)) break;
      z = cand;
    }
    roots.push_back(z);
  }
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

// ---------------------------------------------------------------------------
// PolyMatrix

PolyMatrix::PolyMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), entries_(static_cast<size_t>(rows) * cols) {
  if (rows < 0 || cols < 0) throw DimensionError("PolyMatrix: negative dimension");
}

PolyMatrix PolyMatrix::identity(int n) {
  PolyMatrix p(n, n);
  for (int i = 0; i < n; ++i) p(i, i) = Polynomial::constant(1.0);
  return p;
}

PolyMatrix PolyMatrix::diagonal(const std::vector<Polynomial>& diag) {
  const int n = static_cast<int>(diag.size());
  PolyMatrix p(n, n);
  for (int i = 0; i < n; ++i) p(i, i) = diag[i];
  return p;
}

PolyMatrix PolyMatrix::from_matrix(const Eigen::MatrixXd& m) {
  return from_coefficients({m});
}

PolyMatrix PolyMatrix::from_coefficients(const std::vector<Eigen::MatrixXd>& c) {
  if (c.empty()) return {};
  const int r = static_cast<int>(c.front().rows());
  const int k = static_cast<int>(c.front().cols());
  PolyMatrix p(r, k);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < k; ++j) {
      std::vector<double> v(c.size());
      for (size_t d = 0; d < c.size(); ++d) {
        if (c[d].rows() != r || c[d].cols() != k) {
          throw DimensionError("PolyMatrix::from_coefficients: shape mismatch");
        }
        v[d] = c[d](i, j);
      }
      p(i, j) = Polynomial(std::move(v));
    }
  }
  return p;
}

int PolyMatrix::max_degree() const {
  int d = -1;
  for (const auto& e : entries_) d = std::max(d, e.degree());
  return d;
}

bool PolyMatrix::is_lower_triangular() const {
  for (int i = 0; i < rows_; ++i) {
    for (int j = i + 1; j < cols_; ++j) {
      if (!(*this)(i, j).is_zero()) return false;
    }
  }
  return true;
}

Eigen::MatrixXd PolyMatrix::coefficient(int k) const {
  Eigen::MatrixXd m(rows_, cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j)[k];
  }
  return m;
}

Eigen::MatrixXcd PolyMatrix::eval(Complex s) const {
  Eigen::MatrixXcd m(rows_, cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j)(s);
  }
  return m;
}

PolyMatrix PolyMatrix::transpose() const {
  PolyMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

PolyMatrix operator*(const PolyMatrix& p, const PolyMatrix& q) {
  if (p.cols_ != q.rows_) {
    std::ostringstream os;
    os << "polymat_mul: inner dimensions differ (" << p.rows_ << "x" << p.cols_
       << " times " << q.rows_ << "x" << q.cols_ << ")";
    throw DimensionError(os.str());
  }
  PolyMatrix out(p.rows_, q.cols_);
  for (int i = 0; i < p.rows_; ++i) {
    for (int j = 0; j < q.cols_; ++j) {
      Polynomial acc;
      for (int k = 0; k < p.cols_; ++k) acc += p(i, k) * q(k, j);
      out(i, j) = std::move(acc);
    }
  }
  return out;
}

PolyMatrix operator+(const PolyMatrix& p, const PolyMatrix& q) {
  if (p.rows_ != q.rows_ || p.cols_ != q.cols_) {
    throw DimensionError("PolyMatrix addition: shape mismatch");
  }
  PolyMatrix out = p;
  for (size_t k = 0; k < out.entries_.size(); ++k) out.entries_[k] += q.entries_[k];
  return out;
}

PolyMatrix operator*(const PolyMatrix& p, double c) {
  PolyMatrix out = p;
  for (auto& e : out.entries_) e *= c;
  return out;
}

PolyMatrix polymat_mul(const PolyMatrix& p, const PolyMatrix& q) { return p * q; }

// ---------------------------------------------------------------------------
// RationalMatrix

bool RationalMatrix::strictly_proper() const {
  return numerator.max_degree() < denominator.degree();
}

bool RationalMatrix::proper() const {
  return numerator.max_degree() <= denominator.degree();
}

Eigen::MatrixXcd eval_rational(const RationalMatrix& g, Complex s) {
  const Complex den = g.denominator(s);
  double scale = 0.0;
  for (double c : g.denominator.coeffs()) scale += std::abs(c);
  scale *= std::pow(std::max(1.0, std::abs(s)), g.denominator.degree());
  if (std::abs(den) <= 1e-12 * scale) {
    std::ostringstream os;
    os << "eval_rational: s = " << s << " is a pole of the transfer matrix";
    throw NumericalError(os.str());
  }
  return g.numerator.eval(s) / den;
}

Resolvent faddeev_leverrier(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  if (n < 1 || a.cols() != n) {
    throw DimensionError("faddeev_leverrier: A must be square with n >= 1");
  }
  Resolvent r;
  r.adjugate.assign(static_cast<size_t>(n), Eigen::MatrixXd());
  std::vector<double> c(static_cast<size_t>(n) + 1, 0.0);
  c[n] = 1.0;

  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd mk = eye;
  r.adjugate[n - 1] = mk;
  c[n - 1] = -a.trace();
  for (Eigen::Index k = 2; k <= n; ++k) {
    mk = a * mk + c[n - k + 1] * eye;
    r.adjugate[n - k] = mk;
    c[n - k] = -(a * mk).trace() / static_cast<double>(k);
  }
  const Eigen::MatrixXd closure = a * mk + c[0] * eye;
  const double scale = std::abs(c[0]) + a.norm() * mk.norm();
  r.closure_residual = closure.cwiseAbs().maxCoeff() / (1.0 + scale);
  r.characteristic = Polynomial(std::move(c));
  return r;
}

RationalMatrix faddeev_resolvent(const Eigen::MatrixXd& a,
                                 const Eigen::MatrixXd& b,
                                 const Eigen::MatrixXd& c) {
  if (a.rows() != a.cols()) throw DimensionError("faddeev_resolvent: A is not square");
  if (b.rows() != a.rows()) {
    throw DimensionError("faddeev_resolvent: B has " + std::to_string(b.rows()) +
                         " rows, expected n = " + std::to_string(a.rows()));
  }
  if (c.cols() != a.rows()) {
    throw DimensionError("faddeev_resolvent: C has " + std::to_string(c.cols()) +
                         " columns, expected n = " + std::to_string(a.rows()));
  }
  const Resolvent res = faddeev_leverrier(a);
  std::vector<Eigen::MatrixXd> num;
  num.reserve(res.adjugate.size());
  for (const auto& m : res.adjugate) num.push_back(c * m * b);
  return {PolyMatrix::from_coefficients(num), res.characteristic};
}

Eigen::MatrixXcd transfer_at(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                             const Eigen::MatrixXd& c, Complex s) {
  Eigen::MatrixXcd lhs = -a.cast<Complex>();
  lhs.diagonal().array() += s;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(lhs);
  return c.cast<Complex>() * lu.solve(b.cast<Complex>());
}

}  // namespace psmrac
