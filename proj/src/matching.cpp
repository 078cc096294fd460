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

#include "psmrac/matching.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "psmrac/error.hpp"

namespace psmrac {

void require_stable(const Polynomial& p, const std::string& what) {
  if (p.is_zero()) throw AssumptionError(what + " is the zero polynomial");
  if (p.degree() < 1) return;
  for (const auto& r : poly_roots(p)) {
    if (!(r.real() < 0.0)) throw AssumptionError(what + " has a root with Re >= 0");
  }
}

void FilterSpec::validate(int n, int n0, int d_m) const {
  if (Lambda.degree() != n - n0) {
    throw ConfigError("Lambda must have degree n - n0 = " + std::to_string(n - n0) +
                      ", got " + std::to_string(Lambda.degree()));
  }
  if (!Lambda.is_monic()) throw ConfigError("Lambda must be monic");
  require_stable(Lambda, "Lambda");
  if (f.degree() != d_m) {
    throw ConfigError("f must have degree d_m = " + std::to_string(d_m) + ", got " +
                      std::to_string(f.degree()));
  }
  if (!f.is_monic()) throw ConfigError("f must be monic");
  require_stable(f, "f");
}

FilterSpec default_filter_spec(int n, int n0, int d_m, double lambda_pole,
                               double f_pole) {
  return {Polynomial::linear_power(lambda_pole, n - n0),
          Polynomial::linear_power(f_pole, d_m)};
}

ControllerParams ControllerParams::zeros(int m, int n0, int k) {
  return {Eigen::MatrixXd::Zero(m * k, m), Eigen::MatrixXd::Zero(n0 * k, m),
          Eigen::MatrixXd::Zero(n0, m), Eigen::MatrixXd::Zero(m, m)};
}

int ControllerParams::omega_dim() const {
  return static_cast<int>(Theta1.rows() + Theta2.rows() + Theta20.rows() + Theta3.rows());
}

Eigen::MatrixXd ControllerParams::stacked() const {
  Eigen::MatrixXd out(omega_dim(), m());
  out << Theta1, Theta2, Theta20, Theta3.transpose();
  return out;
}

ControllerParams ControllerParams::from_stacked(const Eigen::MatrixXd& theta, int m,
                                                int n0, int k) {
  const int rows = m * k + n0 * k + n0 + m;
  if (theta.rows() != rows || theta.cols() != m) {
    throw DimensionError("controller parameters: expected " + std::to_string(rows) + "x" +
                         std::to_string(m) + ", got " + std::to_string(theta.rows()) +
                         "x" + std::to_string(theta.cols()));
  }
  ControllerParams p;
  p.Theta1 = theta.topRows(m * k);
  p.Theta2 = theta.middleRows(m * k, n0 * k);
  p.Theta20 = theta.middleRows(m * k + n0 * k, n0);
  p.Theta3 = theta.bottomRows(m).transpose();
  return p;
}

namespace {

struct SampleTerms {
  Eigen::MatrixXcd r;  // rows of the unknown side, p x M
  Eigen::MatrixXcd t;  // right side, M x M
};

// R(s) = [s^j/L I_M ...; s^j/L G0 ...; G0] and T(s) = I - Theta3 xi_m G.
SampleTerms sample_terms(const StateSpace& sys, const Eigen::MatrixXd& c0,
                         const InteractorBundle& xi, const FilterSpec& fspec,
                         const Eigen::MatrixXd& theta3, Complex s) {
  const int m = sys.m();
  const auto n0 = c0.rows();
  const int k = fspec.k();
  const Eigen::MatrixXcd g = transfer_at(sys.A, sys.B, sys.C, s);
  const Eigen::MatrixXcd g0 = transfer_at(sys.A, sys.B, c0, s);
  const Complex lam = fspec.Lambda(s);
  SampleTerms out;
  out.r.resize(m * k + n0 * k + n0, m);
  Complex pw = 1.0 / lam;
  for (int j = 0; j < k; ++j) {
    out.r.middleRows(j * m, m) = pw * Eigen::MatrixXcd::Identity(m, m);
    out.r.middleRows(m * k + j * n0, n0) = pw * g0;
    pw *= s;
  }
  out.r.bottomRows(n0) = g0;
  out.t = Eigen::MatrixXcd::Identity(m, m) - theta3.cast<Complex>() * xi.xi_m.eval(s) * g;
  return out;
}

// Keeps sample points clear of plant poles and roots of Lambda.
Complex clear_point(Complex s, const Eigen::VectorXcd& poles, const FilterSpec& fspec) {
  for (int attempt = 0; attempt < 10; ++attempt) {
    bool ok = true;
    for (Eigen::Index i = 0; i < poles.size(); ++i) {
      if (std::abs(s - poles(i)) < 1e-6 * (1.0 + std::abs(s))) ok = false;
    }
    if (fspec.k() > 0 && std::abs(fspec.Lambda(s)) < 1e-10) ok = false;
    if (ok) return s;
    s += Complex(0.1, 0.0);
  }
  std::ostringstream os;
  os << "solve_matching: could not move sample point " << s << " off a pole";
  throw NumericalError(os.str());
}

std::vector<Complex> sample_grid(int count, double shift, double offset_frac,
                                 const Eigen::VectorXcd& poles, const FilterSpec& fspec) {
  std::vector<Complex> pts;
  const double lo = std::log10(1e-2);
  const double hi = std::log10(1e3);
  for (int i = 0; i < count; ++i) {
    const double frac = (static_cast<double>(i) + offset_frac) / static_cast<double>(count);
    const double w = std::pow(10.0, lo + (hi - lo) * frac);
    pts.push_back(clear_point(Complex(shift, w), poles, fspec));
  }
  return pts;
}

}  // namespace

double matching_residual(const ControllerParams& params, const StateSpace& sys,
                         const PartialStateSelector& sel, const InteractorBundle& xi,
                         const FilterSpec& fspec, const std::vector<Complex>& points) {
  const int m = sys.m();
  Eigen::MatrixXd phi(params.Theta1.rows() + params.Theta2.rows() + params.Theta20.rows(),
                      m);
  phi << params.Theta1, params.Theta2, params.Theta20;
  double worst = 0.0;
  double scale = 0.0;
  for (const auto& s : points) {
    const SampleTerms st = sample_terms(sys, sel.C0, xi, fspec, params.Theta3, s);
    const Eigen::MatrixXcd lhs = phi.cast<Complex>().transpose() * st.r;
    worst = std::max(worst, (lhs - st.t).cwiseAbs().maxCoeff());
    scale = std::max(scale, st.t.cwiseAbs().maxCoeff());
  }
  return worst / (1.0 + scale);
}

MatchSolution solve_matching(const StateSpace& sys, const PartialStateSelector& sel,
                             const InteractorBundle& xi, const FilterSpec& fspec) {
  sys.validate();
  const int n = sys.n();
  const int m = sys.m();
  const int n0 = sel.n0();
  if (sel.C0.cols() != n) throw DimensionError("solve_matching: C0 must have n columns");
  if (xi.m() != m) throw DimensionError("solve_matching: xi_m size differs from M");
  fspec.validate(n, n0, xi.d_m);
  const int k = fspec.k();

  const HighFrequencyGain hfg = high_freq_gain(transfer_matrix(sys), xi);
  const Eigen::MatrixXd theta3 = hfg.Kp.inverse();
  const Eigen::VectorXcd poles = sys.A.eigenvalues();

  std::vector<Complex> pts = sample_grid(2 * n, 0.0, 0.0, poles, fspec);
  const auto shifted = sample_grid(2 * n, 1.0, 0.0, poles, fspec);
  pts.insert(pts.end(), shifted.begin(), shifted.end());

  const int p = m * k + n0 * k + n0;
  const auto npts = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd lhs(2 * m * npts, p);
  Eigen::MatrixXd rhs(2 * m * npts, m);
  for (Eigen::Index i = 0; i < npts; ++i) {
    const SampleTerms st = sample_terms(sys, sel.C0, xi, fspec, theta3, pts[i]);
    const Eigen::MatrixXcd rt = st.r.transpose();
    const Eigen::MatrixXcd tt = st.t.transpose();
    lhs.middleRows(2 * m * i, m) = rt.real();
    lhs.middleRows(2 * m * i + m, m) = rt.imag();
    rhs.middleRows(2 * m * i, m) = tt.real();
    rhs.middleRows(2 * m * i + m, m) = tt.imag();
  }

  Eigen::VectorXd colscale = lhs.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < p; ++j) {
    if (colscale(j) == 0.0) colscale(j) = 1.0;
  }
  const Eigen::MatrixXd scaled = lhs * colscale.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cut = 1e-12 * (sv.size() > 0 ? sv(0) : 0.0);
  MatchSolution sol;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  double smallest = sv.size() > 0 ? sv(0) : 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) {
      inv(i) = 1.0 / sv(i);
      smallest = sv(i);
    } else {
      ++sol.nullity;
    }
  }
  sol.nullity += static_cast<int>(p - sv.size());
  sol.sigma_ratio = sv.size() > 0 && sv(0) > 0.0 ? smallest / sv(0) : 0.0;
  const Eigen::MatrixXd y =
      svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose() * rhs;
  const Eigen::MatrixXd phi = colscale.cwiseInverse().asDiagonal() * y;

  sol.params.Theta1 = phi.topRows(m * k);
  sol.params.Theta2 = phi.middleRows(m * k, n0 * k);
  sol.params.Theta20 = phi.bottomRows(n0);
  sol.params.Theta3 = theta3;
  sol.sample_points = pts;

  std::vector<Complex> fresh = sample_grid(n, 0.0, 0.5, poles, fspec);
  const auto fresh_shifted = sample_grid(n, 0.5, 0.5, poles, fspec);
  fresh.insert(fresh.end(), fresh_shifted.begin(), fresh_shifted.end());
  sol.residual = matching_residual(sol.params, sys, sel, xi, fspec, fresh);
  return sol;
}

std::string format_params(const ControllerParams& p) {
  std::ostringstream out;
  out.precision(17);
  out << "# stacked [Theta1; Theta2; Theta20; Theta3^T], header: M n0 k\n";
  out << p.m() << ' ' << p.n0() << ' ' << p.k() << '\n';
  const Eigen::MatrixXd th = p.stacked();
  for (Eigen::Index i = 0; i < th.rows(); ++i) {
    for (Eigen::Index j = 0; j < th.cols(); ++j) out << (j ? " " : "") << th(i, j);
    out << '\n';
  }
  return out.str();
}

ControllerParams parse_params(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string body;
  int lineno = 0;
  int header_line = 0;
  std::vector<long> header;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (header.empty()) {
      std::istringstream hs(line);
      long v = 0;
      while (hs >> v) header.push_back(v);
      if (!hs.eof() || header.size() != 3) {
        throw ConfigError("parameter file line " + std::to_string(lineno) +
                          ": header must be 'M n0 k'");
      }
      header_line = lineno;
      continue;
    }
    body += line + '\n';
  }
  if (header.empty()) throw ConfigError("parameter file: missing header");
  const long m = header[0];
  const long n0 = header[1];
  const long k = header[2];
  if (m < 1 || n0 < 1 || k < 0) {
    throw ConfigError("parameter file line " + std::to_string(header_line) +
                      ": invalid dimensions");
  }
  const Eigen::MatrixXd th = parse_matrix(body);
  try {
    return ControllerParams::from_stacked(th, static_cast<int>(m), static_cast<int>(n0),
                                          static_cast<int>(k));
  } catch (const DimensionError& e) {
    throw ConfigError(std::string("parameter file: ") + e.what());
  }
}

void write_params_file(const std::string& path, const ControllerParams& p) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << format_params(p);
}

ControllerParams read_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_params(ss.str());
}

}  // namespace psmrac
