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

#include "psmrac/interactor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "psmrac/error.hpp"

namespace psmrac {

bool InteractorBundle::is_diagonal() const {
  for (int i = 0; i < xi_m.rows(); ++i) {
    for (int j = 0; j < i; ++j) {
      if (!xi_m(i, j).is_zero()) return false;
    }
  }
  return true;
}

InteractorBundle InteractorBundle::diagonal(double a, const std::vector<int>& degrees) {
  if (!(a > 0.0)) throw AssumptionError("interactor: pole location a must be > 0");
  std::vector<Polynomial> diag;
  for (int l : degrees) {
    if (l < 1) throw AssumptionError("interactor: diagonal degrees must be >= 1");
    diag.push_back(Polynomial::linear_power(a, l));
  }
  return from_matrix(PolyMatrix::diagonal(diag));
}

InteractorBundle InteractorBundle::from_matrix(PolyMatrix xi) {
  InteractorBundle b;
  b.xi_m = std::move(xi);
  b.d_m = b.xi_m.max_degree();
  for (int i = 0; i < b.xi_m.rows(); ++i) b.diag_degrees.push_back(b.xi_m(i, i).degree());
  b.validate();
  return b;
}

void InteractorBundle::validate() const {
  const int m = xi_m.rows();
  if (m < 1 || xi_m.cols() != m) throw DimensionError("interactor: xi_m must be square");
  if (!xi_m.is_lower_triangular()) {
    throw AssumptionError("interactor: xi_m must be lower triangular");
  }
  for (int i = 0; i < m; ++i) {
    const Polynomial& d = xi_m(i, i);
    if (d.degree() < 1) {
      throw AssumptionError("interactor: diagonal entry " + std::to_string(i + 1) +
                            " must have degree >= 1");
    }
    if (!d.is_monic()) {
      throw AssumptionError("interactor: diagonal entry " + std::to_string(i + 1) +
                            " is not monic");
    }
    for (const auto& r : poly_roots(d)) {
      if (!(r.real() < 0.0)) {
        throw AssumptionError("interactor: diagonal entry " + std::to_string(i + 1) +
                              " has a root with Re >= 0");
      }
    }
    // xi_m^{-1} proper: off-diagonal entries may not exceed the row's
    // diagonal degree.
    for (int j = 0; j < i; ++j) {
      if (xi_m(i, j).degree() >= d.degree()) {
        throw AssumptionError("interactor: entry (" + std::to_string(i + 1) + "," +
                              std::to_string(j + 1) +
                              ") must have degree below the diagonal");
      }
    }
  }
}

bool HighFrequencyGain::minors_nonzero(double tol) const {
  double scale = 1.0;
  for (double v : minors) scale = std::max(scale, std::abs(v));
  return std::all_of(minors.begin(), minors.end(),
                     [&](double v) { return std::abs(v) > tol * scale; });
}

std::vector<double> leading_minors(const Eigen::MatrixXd& k) {
  const auto m = k.rows();
  if (k.cols() != m) throw DimensionError("leading_minors: matrix must be square");
  Eigen::MatrixXd w = k;
  std::vector<double> out;
  double prod = 1.0;
  const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < m; ++i) {
    const double piv = w(i, i);
    if (std::abs(piv) <= 1e-14 * scale) {
      out.resize(static_cast<size_t>(m), 0.0);
      return out;
    }
    prod *= piv;
    out.push_back(prod);
    for (Eigen::Index r = i + 1; r < m; ++r) {
      const double f = w(r, i) / piv;
      w.row(r).tail(m - i) -= f * w.row(i).tail(m - i);
    }
  }
  return out;
}

HighFrequencyGain high_freq_gain(const RationalMatrix& g, const InteractorBundle& xi) {
  const int m = xi.m();
  if (g.rows() != m || g.cols() != m) {
    throw DimensionError("high_freq_gain: G is " + std::to_string(g.rows()) + "x" +
                         std::to_string(g.cols()) + " but xi_m is " + std::to_string(m) +
                         "x" + std::to_string(m));
  }
  if (!g.strictly_proper()) throw AssumptionError("high_freq_gain: G must be strictly proper");
  const PolyMatrix prod = xi.xi_m * g.numerator;
  const int d = g.denominator.degree();
  double scale = 0.0;
  for (int k = 0; k <= prod.max_degree(); ++k) {
    scale = std::max(scale, prod.coefficient(k).cwiseAbs().maxCoeff());
  }
  for (int k = d + 1; k <= prod.max_degree(); ++k) {
    if (prod.coefficient(k).cwiseAbs().maxCoeff() > 1e-10 * scale) {
      throw AssumptionError("high_freq_gain: limit is infinite (interactor degrees too low)");
    }
  }
  HighFrequencyGain h;
  h.Kp = prod.coefficient(d) / g.denominator.leading();
  const double nrm = std::max(h.Kp.norm(), 1e-300);
  if (std::abs(h.Kp.determinant()) <= 1e-10 * std::pow(nrm, m)) {
    throw AssumptionError(
        "high_freq_gain: limit is singular (interactor degrees too high or G "
        "rank-deficient)");
  }
  h.minors = leading_minors(h.Kp);
  double prev = 1.0;
  for (double v : h.minors) {
    h.signs.push_back(v > 0.0 ? 1 : (v < 0.0 ? -1 : 0));
    h.d_star.push_back(prev != 0.0 ? v / prev : 0.0);
    prev = v;
  }
  return h;
}

InteractorBundle find_diagonal_interactor(const RationalMatrix& g, double a) {
  const int m = g.rows();
  if (g.cols() != m) throw DimensionError("find_diagonal_interactor: G must be square");
  if (!g.strictly_proper()) {
    throw AssumptionError("find_diagonal_interactor: G must be strictly proper");
  }
  // Row i of diag{(s+a)^{l_i}} G has a finite limit iff l_i does not exceed
  // the row's relative degree, and a nonzero one only at equality, so the
  // row relative degrees are the only candidate tuple.
  const int d = g.denominator.degree();
  std::vector<int> degrees;
  for (int i = 0; i < m; ++i) {
    int top = -1;
    for (int j = 0; j < m; ++j) top = std::max(top, g.numerator(i, j).degree());
    if (top < 0) {
      throw AssumptionError("find_diagonal_interactor: G has a zero row (rank deficient)");
    }
    degrees.push_back(d - top);
  }
  InteractorBundle b = InteractorBundle::diagonal(a, degrees);
  try {
    high_freq_gain(g, b);
  } catch (const AssumptionError&) {
    std::ostringstream os;
    os << "find_diagonal_interactor: no diagonal interactor exists (row relative "
          "degrees";
    for (int l : degrees) os << ' ' << l;
    os << " give a singular limit); supply a lower-triangular xi_m manually";
    throw AssumptionError(os.str());
  }
  return b;
}

LDSDecomposition lds_decompose(const HighFrequencyGain& kp,
                               const std::vector<double>& gamma) {
  const auto m = kp.Kp.rows();
  if (kp.Kp.cols() != m) throw DimensionError("lds_decompose: K_p must be square");
  if (static_cast<Eigen::Index>(gamma.size()) != m) {
    throw DimensionError("lds_decompose: need one gamma per output");
  }
  for (double g : gamma) {
    if (!(g > 0.0)) throw AssumptionError("lds_decompose: gamma_i must be > 0");
  }
  const double scale = std::max(1.0, kp.Kp.cwiseAbs().maxCoeff());
  Eigen::MatrixXd l = Eigen::MatrixXd::Identity(m, m);
  Eigen::MatrixXd u = kp.Kp;
  Eigen::VectorXd dvec(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double piv = u(i, i);
    if (std::abs(piv) <= 1e-12 * scale) {
      throw AssumptionError("Assumption A4 violated at index " + std::to_string(i + 1) +
                            " (leading principal minor is zero)");
    }
    for (Eigen::Index r = i + 1; r < m; ++r) {
      const double f = u(r, i) / piv;
      l(r, i) = f;
      u.row(r) -= f * u.row(i);
      u(r, i) = 0.0;
    }
    dvec(i) = piv;
    u.row(i) /= piv;
  }
  LDSDecomposition out;
  out.gamma = gamma;
  Eigen::VectorXd ds(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    ds(i) = (dvec(i) > 0.0 ? 1.0 : -1.0) * gamma[static_cast<size_t>(i)];
  }
  out.D_s = ds.asDiagonal();
  const Eigen::MatrixXd ds_inv = ds.cwiseInverse().asDiagonal();
  out.S = u.transpose() * ds_inv * dvec.asDiagonal() * u;
  out.S = (0.5 * (out.S + out.S.transpose())).eval();
  const Eigen::MatrixXd u_inv_t =
      u.transpose().triangularView<Eigen::UnitLower>().solve(Eigen::MatrixXd::Identity(m, m));
  out.L_s = l * out.D_s * u_inv_t * ds_inv;
  out.L_s.triangularView<Eigen::StrictlyUpper>().setZero();
  out.L_s.diagonal().setOnes();
  out.Theta0_star =
      out.L_s.triangularView<Eigen::UnitLower>().solve(Eigen::MatrixXd::Identity(m, m)) -
      Eigen::MatrixXd::Identity(m, m);
  out.reconstruction_error =
      (out.L_s * out.D_s * out.S - kp.Kp).cwiseAbs().maxCoeff() / scale;
  Eigen::LLT<Eigen::MatrixXd> llt(out.S);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("lds_decompose: S is not positive definite");
  }
  if (!(out.reconstruction_error < 1e-10)) {
    std::ostringstream os;
    os << "lds_decompose: reconstruction error " << out.reconstruction_error;
    throw NumericalError(os.str());
  }
  return out;
}

}  // namespace psmrac
