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

#include "psmrac/plant.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "psmrac/error.hpp"

namespace psmrac {

void StateSpace::validate() const {
  const auto n = A.rows();
  if (n < 1 || A.cols() != n) throw DimensionError("plant: A must be square, n >= 1");
  if (B.rows() != n) throw DimensionError("plant: B must have n rows");
  if (C.cols() != n) throw DimensionError("plant: C must have n columns");
  if (C.rows() != B.cols()) {
    throw DimensionError("plant: C has " + std::to_string(C.rows()) +
                         " rows but B has " + std::to_string(B.cols()) +
                         " columns; the plant must be square");
  }
  if (B.cols() < 1 || B.cols() > n) throw DimensionError("plant: need n >= M >= 1");
}

PartialStateSelector PartialStateSelector::from_states(int n,
                                                       const std::vector<int>& states) {
  PartialStateSelector sel{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(states.size()), n)};
  for (size_t i = 0; i < states.size(); ++i) {
    if (states[i] < 0 || states[i] >= n) {
      throw DimensionError("selector: state index " + std::to_string(states[i]) +
                           " out of range");
    }
    sel.C0(static_cast<Eigen::Index>(i), states[i]) = 1.0;
  }
  return sel;
}

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * sv(0)) ++r;
  }
  return r;
}

ObservabilityReport check_observable(const Eigen::MatrixXd& a,
                                     const Eigen::MatrixXd& c0) {
  const auto n = a.rows();
  if (a.cols() != n || c0.cols() != n) {
    throw DimensionError("check_observable: C0 must have n columns");
  }
  const auto p = c0.rows();
  Eigen::MatrixXd raw(p * n, n);
  Eigen::MatrixXd scaled(p * n, n);
  Eigen::MatrixXd block = c0;
  for (Eigen::Index k = 0; k < n; ++k) {
    raw.middleRows(k * p, p) = block;
    const double nrm = block.norm();
    scaled.middleRows(k * p, p) = nrm > 0.0 ? Eigen::MatrixXd(block / nrm) : block;
    block = block * a;
  }
  ObservabilityReport rep;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_scaled(scaled);
  rep.singular_values = svd_scaled.singularValues();
  const auto& sv = rep.singular_values;
  rep.rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > 1e-9 * sv(0)) ++rep.rank;
  }
  rep.observable = rep.rank == n;
  rep.normalized_ratio = sv.size() >= n && sv(0) > 0 ? sv(n - 1) / sv(0) : 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_raw(raw);
  const auto& rv = svd_raw.singularValues();
  rep.raw_ratio = rv.size() >= n && rv(0) > 0 ? rv(n - 1) / rv(0) : 0.0;
  return rep;
}

Eigen::MatrixXd build_transform(const Eigen::MatrixXd& c0) {
  const auto n0 = c0.rows();
  const auto n = c0.cols();
  if (n0 < 1 || n0 > n) throw DimensionError("build_transform: need 1 <= n0 <= n");
  if (numerical_rank(c0) != n0) {
    throw AssumptionError("build_transform: C0 is rank deficient (rank < n0)");
  }
  Eigen::MatrixXd p(n, n);
  p.topRows(n0) = c0;
  if (n0 < n) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(c0, Eigen::ComputeFullV);
    p.bottomRows(n - n0) = svd.matrixV().rightCols(n - n0).transpose();
  }
  return p;
}

Eigen::VectorXd ObserverDesign::estimate(const Eigen::VectorXd& y0,
                                         const Eigen::VectorXd& w) const {
  Eigen::VectorXd xbar(P.rows());
  xbar.head(y0.size()) = y0;
  if (w.size() > 0) xbar.tail(w.size()) = w + L_r * y0;
  return P_inv * xbar;
}

Eigen::VectorXd ObserverDesign::exact_initial_w(const Eigen::VectorXd& x0) const {
  const Eigen::VectorXd xbar = P * x0;
  const auto n0 = A11.rows();
  const auto k = A22.rows();
  return xbar.tail(k) - L_r * xbar.head(n0);
}

std::vector<Complex> default_observer_poles(int count) {
  std::vector<Complex> poles;
  for (int i = 0; i < count; ++i) poles.emplace_back(-4.0 - 0.5 * i, 0.0);
  return poles;
}

namespace {

// Real block-diagonal matrix with the requested spectrum.
Eigen::MatrixXd spectrum_matrix(const std::vector<Complex>& poles) {
  const auto k = static_cast<Eigen::Index>(poles.size());
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(k, k);
  std::vector<bool> used(poles.size(), false);
  Eigen::Index row = 0;
  for (size_t i = 0; i < poles.size(); ++i) {
    if (used[i]) continue;
    const Complex p = poles[i];
    used[i] = true;
    if (std::abs(p.imag()) <= 1e-12 * (1.0 + std::abs(p))) {
      f(row, row) = p.real();
      row += 1;
      continue;
    }
    size_t mate = poles.size();
    for (size_t j = i + 1; j < poles.size(); ++j) {
      if (!used[j] && std::abs(poles[j] - std::conj(p)) <= 1e-9 * (1.0 + std::abs(p))) {
        mate = j;
        break;
      }
    }
    if (mate == poles.size()) {
      throw NumericalError("observer poles are not closed under conjugation");
    }
    used[mate] = true;
    f(row, row) = p.real();
    f(row, row + 1) = p.imag();
    f(row + 1, row) = -p.imag();
    f(row + 1, row + 1) = p.real();
    row += 2;
  }
  return f;
}

// Solves A X - X F = R through the Kronecker form
// (I (x) A - F^T (x) I) vec X = vec R.
Eigen::MatrixXd solve_sylvester(const Eigen::MatrixXd& a, const Eigen::MatrixXd& f,
                                const Eigen::MatrixXd& r) {
  const auto k = a.rows();
  const auto m = f.rows();
  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(k * m, k * m);
  for (Eigen::Index j = 0; j < m; ++j) {
    big.block(j * k, j * k, k, k) += a;
    for (Eigen::Index i = 0; i < m; ++i) {
      big.block(j * k, i * k, k, k) -= f(i, j) * Eigen::MatrixXd::Identity(k, k);
    }
  }
  Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(r.data(), r.size());
  Eigen::VectorXd x = big.fullPivLu().solve(rhs);
  return Eigen::Map<Eigen::MatrixXd>(x.data(), k, m);
}

// Largest distance from a target pole to the nearest unused eigenvalue.
double spectrum_error(const Eigen::MatrixXd& m, const std::vector<Complex>& poles) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  std::vector<Complex> eig(es.eigenvalues().begin(), es.eigenvalues().end());
  std::vector<bool> used(eig.size(), false);
  double worst = 0.0;
  for (const auto& p : poles) {
    size_t best = eig.size();
    double dist = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < eig.size(); ++i) {
      if (!used[i] && std::abs(eig[i] - p) < dist) {
        dist = std::abs(eig[i] - p);
        best = i;
      }
    }
    if (best == eig.size()) return std::numeric_limits<double>::infinity();
    used[best] = true;
    worst = std::max(worst, dist);
  }
  return worst;
}

PolyMatrix adjugate_times(const Resolvent& res, const Eigen::MatrixXd& g) {
  std::vector<Eigen::MatrixXd> coeffs;
  coeffs.reserve(res.adjugate.size());
  for (const auto& mk : res.adjugate) coeffs.push_back(mk * g);
  if (coeffs.empty()) coeffs.push_back(Eigen::MatrixXd::Zero(0, g.cols()));
  return PolyMatrix::from_coefficients(coeffs);
}

}  // namespace

ObserverDesign design_reduced_observer(const StateSpace& sys,
                                       const PartialStateSelector& sel,
                                       const std::vector<Complex>& poles,
                                       std::uint64_t seed) {
  sys.validate();
  const int n = sys.n();
  const int n0 = sel.n0();
  if (sel.C0.cols() != n) throw DimensionError("observer: C0 must have n columns");
  if (n0 < 1 || n0 > n) throw DimensionError("observer: need 1 <= n0 <= n");
  const int k = n - n0;
  if (static_cast<int>(poles.size()) != k) {
    throw DimensionError("observer: expected " + std::to_string(k) + " poles, got " +
                         std::to_string(poles.size()));
  }
  for (const auto& p : poles) {
    if (!(p.real() < 0.0)) throw NumericalError("observer: poles must satisfy Re < 0");
  }
  const auto obs = check_observable(sys.A, sel.C0);
  if (!obs.observable) {
    throw AssumptionError("observer: (C0, A) is not observable (rank " +
                          std::to_string(obs.rank) + " < " + std::to_string(n) + ")");
  }

  ObserverDesign d;
  d.P = build_transform(sel.C0);
  d.P_inv = d.P.inverse();
  const Eigen::MatrixXd abar = d.P * sys.A * d.P_inv;
  const Eigen::MatrixXd bbar = d.P * sys.B;
  d.A11 = abar.topLeftCorner(n0, n0);
  d.A12 = abar.topRightCorner(n0, k);
  d.A21 = abar.bottomLeftCorner(k, n0);
  d.A22 = abar.bottomRightCorner(k, k);
  d.B1 = bbar.topRows(n0);
  d.B2 = bbar.bottomRows(k);
  d.poles = poles;

  if (k == 0) {
    d.L_r = Eigen::MatrixXd::Zero(0, n0);
    d.error_dynamics = Eigen::MatrixXd::Zero(0, 0);
    d.input_gain = Eigen::MatrixXd::Zero(0, sys.m());
    d.output_gain = Eigen::MatrixXd::Zero(0, n0);
    d.lambda_obs = Polynomial::constant(1.0);
    d.N1 = PolyMatrix(0, sys.m());
    d.N2 = PolyMatrix(0, n0);
    d.placement_conditioning = 1.0;
    return d;
  }

  const Eigen::MatrixXd f = spectrum_matrix(poles);
  double pole_scale = 1.0;
  for (const auto& p : poles) pole_scale = std::max(pole_scale, std::abs(p));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  bool placed = false;
  std::ostringstream report;
  for (int attempt = 1; attempt <= 5 && !placed; ++attempt) {
    d.attempts = attempt;
    Eigen::MatrixXd q(n0, k);
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      for (Eigen::Index i = 0; i < q.rows(); ++i) q(i, j) = gauss(rng);
    }
    const Eigen::MatrixXd x = solve_sylvester(d.A22.transpose(), f, d.A12.transpose() * q);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(x);
    const auto& sv = svd.singularValues();
    const double cond = sv(0) > 0.0 ? sv(k - 1) / sv(0) : 0.0;
    if (!std::isfinite(cond) || cond < 1e-15) {
      report << " attempt " << attempt << ": sigma ratio " << cond << ";";
      continue;
    }
    const Eigen::MatrixXd l = x.transpose().partialPivLu().solve(q.transpose());
    const double err = spectrum_error(d.A22 - l * d.A12, poles);
    if (!(err <= 1e-6 * pole_scale)) {
      report << " attempt " << attempt << ": sigma ratio " << cond
             << ", pole error " << err << ";";
      continue;
    }
    d.placement_conditioning = cond;
    d.L_r = l;
    placed = true;
  }
  if (!placed) {
    throw NumericalError("observer: pole placement failed after 5 attempts:" +
                         report.str());
  }

  d.error_dynamics = d.A22 - d.L_r * d.A12;
  d.input_gain = d.B2 - d.L_r * d.B1;
  d.output_gain = d.error_dynamics * d.L_r + d.A21 - d.L_r * d.A11;
  const Resolvent res = faddeev_leverrier(d.error_dynamics);
  d.lambda_obs = res.characteristic;
  d.N1 = adjugate_times(res, d.input_gain);
  d.N2 = adjugate_times(res, d.output_gain);
  return d;
}

ObserverTrajectory simulate_observer(const ObserverDesign& design,
                                     const StateSpace& sys,
                                     const PartialStateSelector& sel,
                                     const InputSignal& u,
                                     const Eigen::VectorXd& x0,
                                     const Eigen::VectorXd& w0, double t_end,
                                     double dt) {
  if (!(dt > 0.0) || !(t_end >= 0.0)) throw ConfigError("simulate_observer: bad dt/t_end");
  const auto n = sys.A.rows();
  const auto k = design.error_dynamics.rows();
  if (x0.size() != n || w0.size() != k) {
    throw DimensionError("simulate_observer: initial state dimensions");
  }
  auto rhs = [&](double t, const Eigen::VectorXd& z) {
    const Eigen::VectorXd uu = u(t);
    Eigen::VectorXd dz(n + k);
    const Eigen::VectorXd x = z.head(n);
    dz.head(n) = sys.A * x + sys.B * uu;
    if (k > 0) {
      dz.tail(k) = design.error_dynamics * z.tail(k) + design.input_gain * uu +
                   design.output_gain * (sel.C0 * x);
    }
    return dz;
  };
  ObserverTrajectory out;
  Eigen::VectorXd z(n + k);
  z << x0, w0;
  const auto steps = static_cast<long>(std::llround(t_end / dt));
  auto record = [&](double t) {
    out.t.push_back(t);
    out.x.push_back(z.head(n));
    out.x_hat.push_back(design.estimate(sel.C0 * z.head(n), z.tail(k)));
  };
  record(0.0);
  for (long i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    const Eigen::VectorXd k1 = rhs(t, z);
    const Eigen::VectorXd k2 = rhs(t + 0.5 * dt, z + 0.5 * dt * k1);
    const Eigen::VectorXd k3 = rhs(t + 0.5 * dt, z + 0.5 * dt * k2);
    const Eigen::VectorXd k4 = rhs(t + dt, z + dt * k3);
    z += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    record(static_cast<double>(i + 1) * dt);
  }
  return out;
}

std::vector<Complex> transmission_zeros(const StateSpace& sys) {
  sys.validate();
  const auto n = sys.A.rows();
  const auto m = sys.B.cols();
  // det [sI - A, -B; C, 0] = det(sI - A) det G(s), a polynomial of degree
  // at most n - M; recovered from samples on the unit circle.
  const auto samples = n + 1;
  std::vector<Complex> values(static_cast<size_t>(samples));
  Eigen::MatrixXcd rosen = Eigen::MatrixXcd::Zero(n + m, n + m);
  rosen.topRightCorner(n, m) = -sys.B.cast<Complex>();
  rosen.bottomLeftCorner(m, n) = sys.C.cast<Complex>();
  for (Eigen::Index j = 0; j < samples; ++j) {
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(j) /
                       static_cast<double>(samples);
    const Complex s = std::polar(1.0, ang);
    rosen.topLeftCorner(n, n) = s * Eigen::MatrixXcd::Identity(n, n) -
                                sys.A.cast<Complex>();
    values[static_cast<size_t>(j)] = rosen.partialPivLu().determinant();
  }
  std::vector<double> coeffs(static_cast<size_t>(samples), 0.0);
  double scale = 0.0;
  for (Eigen::Index d = 0; d < samples; ++d) {
    Complex acc{0.0, 0.0};
    for (Eigen::Index j = 0; j < samples; ++j) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(d * j) /
                         static_cast<double>(samples);
      acc += values[static_cast<size_t>(j)] * std::polar(1.0, ang);
    }
    coeffs[static_cast<size_t>(d)] = acc.real() / static_cast<double>(samples);
    scale = std::max(scale, std::abs(coeffs[static_cast<size_t>(d)]));
  }
  for (auto& c : coeffs) {
    if (std::abs(c) <= 1e-9 * scale) c = 0.0;
  }
  const Polynomial z(coeffs);
  if (z.is_zero()) throw NumericalError("transmission_zeros: rank-deficient transfer matrix");
  if (z.degree() < 1) return {};
  return poly_roots(z);
}

RationalMatrix transfer_matrix(const StateSpace& sys) {
  sys.validate();
  return faddeev_resolvent(sys.A, sys.B, sys.C);
}

StateSpace gtm_model() {
  StateSpace g;
  g.A.resize(8, 8);
  g.A << -0.019, 0.1364, -9.7778, -32.0829, -0.0018, -0.0004, 0, 0,
      -0.2804, -2.7567, 120.1968, -2.42, -0.0001, 0, 0.0004, -0.0061,
      0.0205, -0.3106, -3.5393, 0, 0.007, 0.0328, -0.0014, 0,
      0, 0, 1, 0, 0, -0.0002, 0, 0.0002,
      0, -0.0027, 0, -0.0005, -0.5765, -125.9974, 10.4690, 32.0829,
      0, 0, -0.0255, 0, 0.2245, -1.4053, -0.2794, 0,
      0, 0, 0.0018, 0, -0.629, 1.9689, -5.4759, 0,
      0, 0, 0, -0.0002, 0, 0.0754, 1, 0;
  g.B.resize(8, 2);
  g.B << 0.0056, -0.0423,
      -0.6119, 0.1579,
      -0.7486, 0.0859,
      0, 0,
      0, -0.0223,
      0, -0.0223,
      0, -0.7657,
      0, 0;
  g.C = Eigen::MatrixXd::Zero(2, 8);
  g.C(0, 3) = 1.0;
  g.C(1, 7) = 1.0;
  return g;
}

namespace {

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Eigen::MatrixXd rows_to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows[0].size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

std::vector<double> parse_row(const std::string& line, int lineno) {
  std::istringstream ls(line);
  std::vector<double> row;
  std::string tok;
  while (ls >> tok) {
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || !std::isfinite(v)) {
      throw ConfigError("line " + std::to_string(lineno) + ": bad number '" + tok + "'");
    }
    row.push_back(v);
  }
  return row;
}

void push_row(std::vector<std::vector<double>>& rows, std::vector<double> row,
              int lineno) {
  if (!rows.empty() && rows.front().size() != row.size()) {
    throw ConfigError("line " + std::to_string(lineno) + ": expected " +
                      std::to_string(rows.front().size()) + " columns, got " +
                      std::to_string(row.size()));
  }
  rows.push_back(std::move(row));
}

}  // namespace

Eigen::MatrixXd parse_matrix(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_comment(line);
    if (blank(line)) continue;
    push_row(rows, parse_row(line, lineno), lineno);
  }
  if (rows.empty()) throw ConfigError("matrix: no rows");
  return rows_to_matrix(rows);
}

Eigen::MatrixXd read_matrix_file(const std::string& path) {
  return parse_matrix(slurp(path));
}

StateSpace parse_plant(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> blocks[3];
  int current = -1;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_comment(line);
    if (blank(line)) continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "A:" || head == "B:" || head == "C:") {
      current = head[0] - 'A';
      if (!blocks[current].empty()) {
        throw ConfigError("line " + std::to_string(lineno) + ": duplicate block " + head);
      }
      std::string rest;
      std::getline(ls, rest);
      if (!blank(rest)) {
        throw ConfigError("line " + std::to_string(lineno) + ": text after " + head);
      }
      continue;
    }
    if (current < 0) {
      throw ConfigError("line " + std::to_string(lineno) + ": data before A:/B:/C: header");
    }
    push_row(blocks[current], parse_row(line, lineno), lineno);
  }
  for (int b = 0; b < 3; ++b) {
    if (blocks[b].empty()) {
      throw ConfigError(std::string("plant: missing block ") + static_cast<char>('A' + b));
    }
  }
  StateSpace sys{rows_to_matrix(blocks[0]), rows_to_matrix(blocks[1]),
                 rows_to_matrix(blocks[2])};
  sys.validate();
  return sys;
}

StateSpace read_plant_file(const std::string& path) { return parse_plant(slurp(path)); }

std::string format_plant(const StateSpace& sys) {
  std::ostringstream out;
  out.precision(17);
  const char* names[3] = {"A:", "B:", "C:"};
  const Eigen::MatrixXd* mats[3] = {&sys.A, &sys.B, &sys.C};
  for (int b = 0; b < 3; ++b) {
    out << names[b] << "\n";
    for (Eigen::Index i = 0; i < mats[b]->rows(); ++i) {
      for (Eigen::Index j = 0; j < mats[b]->cols(); ++j) {
        out << (j ? " " : "") << (*mats[b])(i, j);
      }
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace psmrac
