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

#include "psmrac/adaptive.hpp"

#include <algorithm>
#include <cmath>

#include "psmrac/error.hpp"
#include "psmrac/kernels.hpp"

namespace psmrac {

ChainFilter::ChainFilter(Polynomial den, int channels)
    : den_(std::move(den)), channels_(channels) {
  if (den_.is_zero() || !den_.is_monic()) {
    throw NumericalError("ChainFilter: denominator must be monic");
  }
  if (channels < 0) throw DimensionError("ChainFilter: negative channel count");
  order_ = den_.degree();
  a_.assign(den_.coeffs().begin(), den_.coeffs().begin() + order_);
}

void ChainFilter::derivative(const double* z, const double* v, double* dz) const {
  const int k = order_;
  if (k == 0) return;
  for (int c = 0; c < channels_; ++c) {
    const double* zc = z + c * k;
    double* dc = dz + c * k;
    double last = v[c];
    for (int j = 0; j < k; ++j) last -= a_[static_cast<size_t>(j)] * zc[j];
    for (int j = 0; j + 1 < k; ++j) dc[j] = zc[j + 1];
    dc[k - 1] = last;
  }
}

double ChainFilter::apply(const double* z, const double* v, int channel,
                          const Polynomial& num) const {
  const int k = order_;
  if (num.degree() > k) throw DimensionError("ChainFilter::apply: improper numerator");
  const auto& nc = num.coeffs();
  double out = 0.0;
  const double* zc = z + channel * k;
  for (int j = 0; j < k && j < static_cast<int>(nc.size()); ++j) out += nc[static_cast<size_t>(j)] * zc[j];
  if (num.degree() == k) {
    double top = v[channel];
    for (int j = 0; j < k; ++j) top -= a_[static_cast<size_t>(j)] * zc[j];
    out += nc[static_cast<size_t>(k)] * top;
  }
  return out;
}

Eigen::MatrixXd ChainFilter::channel_matrix() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(order_, order_);
  for (int j = 0; j + 1 < order_; ++j) a(j, j + 1) = 1.0;
  for (int j = 0; j < order_; ++j) a(order_ - 1, j) = -a_[static_cast<size_t>(j)];
  return a;
}

AdaptationGains AdaptationGains::uniform(int m, double g, double g_theta,
                                         const Eigen::MatrixXd& d_s) {
  AdaptationGains out;
  out.Gamma = g * Eigen::MatrixXd::Identity(m, m);
  for (int i = 2; i <= m; ++i) {
    out.Gamma_theta.push_back(g_theta * Eigen::MatrixXd::Identity(i - 1, i - 1));
  }
  out.D_s = d_s;
  out.validate(m);
  return out;
}

namespace {

bool spd(const Eigen::MatrixXd& g) {
  if (g.rows() != g.cols()) return false;
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + g.cwiseAbs().maxCoeff())) {
    return false;
  }
  return Eigen::LLT<Eigen::MatrixXd>(g).info() == Eigen::Success;
}

}  // namespace

void AdaptationGains::validate(int m) const {
  if (Gamma.rows() != m || !spd(Gamma)) {
    throw ConfigError("adaptation gains: Gamma must be an M x M symmetric positive definite matrix");
  }
  if (static_cast<int>(Gamma_theta.size()) != std::max(0, m - 1)) {
    throw ConfigError("adaptation gains: need M - 1 Gamma_theta matrices");
  }
  for (size_t i = 0; i < Gamma_theta.size(); ++i) {
    if (Gamma_theta[i].rows() != static_cast<Eigen::Index>(i + 1) || !spd(Gamma_theta[i])) {
      throw ConfigError("adaptation gains: Gamma_theta_" + std::to_string(i + 2) +
                        " must be " + std::to_string(i + 1) + "x" + std::to_string(i + 1) +
                        " symmetric positive definite");
    }
  }
  if (D_s.rows() != m || D_s.cols() != m) throw ConfigError("adaptation gains: D_s must be M x M");
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i != j && D_s(i, j) != 0.0) throw ConfigError("adaptation gains: D_s must be diagonal");
    }
    if (D_s(i, i) == 0.0) throw ConfigError("adaptation gains: D_s has a zero entry");
  }
}

AdaptiveParams AdaptiveParams::zeros(int omega_dim, int m) {
  AdaptiveParams p;
  p.Theta = Eigen::MatrixXd::Zero(omega_dim, m);
  for (int i = 2; i <= m; ++i) p.theta.push_back(Eigen::VectorXd::Zero(i - 1));
  p.Psi = Eigen::MatrixXd::Zero(m, m);
  return p;
}

int AdaptiveParams::flat_size() const {
  auto n = Theta.size() + Psi.size();
  for (const auto& t : theta) n += t.size();
  return static_cast<int>(n);
}

void AdaptiveParams::pack(double* out) const {
  out = std::copy(Theta.data(), Theta.data() + Theta.size(), out);
  for (const auto& t : theta) out = std::copy(t.data(), t.data() + t.size(), out);
  std::copy(Psi.data(), Psi.data() + Psi.size(), out);
}

void AdaptiveParams::unpack(const double* in) {
  std::copy(in, in + Theta.size(), Theta.data());
  in += Theta.size();
  for (auto& t : theta) {
    std::copy(in, in + t.size(), t.data());
    in += t.size();
  }
  std::copy(in, in + Psi.size(), Psi.data());
}

TruthParams make_truth(const ControllerParams& theta_star, const LDSDecomposition& lds) {
  const int m = theta_star.m();
  TruthParams t;
  t.params.Theta = theta_star.stacked();
  for (int i = 2; i <= m; ++i) {
    t.params.theta.push_back(lds.Theta0_star.row(i - 1).head(i - 1).transpose());
  }
  t.params.Psi = lds.D_s * lds.S;
  t.S = lds.S;
  return t;
}

AdaptiveController::AdaptiveController(int m, int n0, const InteractorBundle& xi,
                                       const FilterSpec& fspec)
    : m_(m), n0_(n0), k_(fspec.k()), xi_(xi.xi_m) {
  if (xi.m() != m) throw DimensionError("AdaptiveController: xi_m must be M x M");
  if (fspec.f.degree() != xi.d_m) {
    throw DimensionError("AdaptiveController: deg f must equal d_m");
  }
  w1_ = ChainFilter(fspec.Lambda, m);
  w2_ = ChainFilter(fspec.Lambda, n0);
  zeta_ = ChainFilter(fspec.f, omega_dim());
  hu_ = ChainFilter(fspec.f, m);
  eb_ = ChainFilter(fspec.f, m);
}

int AdaptiveController::state_size() const {
  return w1_.state_size() + w2_.state_size() + zeta_.state_size() + hu_.state_size() +
         eb_.state_size();
}

Eigen::VectorXd AdaptiveController::omega(const double* z, const Eigen::VectorXd& y0,
                                          const Eigen::VectorXd& r) const {
  Eigen::VectorXd w(omega_dim());
  const double* z2 = z + w1_.state_size();
  Eigen::Index idx = 0;
  for (int j = 0; j < k_; ++j) {
    for (int c = 0; c < m_; ++c) w(idx++) = w1_.power(z, c, j);
  }
  for (int j = 0; j < k_; ++j) {
    for (int c = 0; c < n0_; ++c) w(idx++) = w2_.power(z2, c, j);
  }
  w.segment(idx, n0_) = y0;
  idx += n0_;
  w.segment(idx, m_) = r;
  return w;
}

Eigen::VectorXd AdaptiveController::ebar(const double* z, const Eigen::VectorXd& e) const {
  const double* ze = z + w1_.state_size() + w2_.state_size() + zeta_.state_size() +
                     hu_.state_size();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m_);
  for (int i = 0; i < m_; ++i) {
    for (int j = 0; j <= i; ++j) {
      if (!xi_(i, j).is_zero()) out(i) += eb_.apply(ze, e.data(), j, xi_(i, j));
    }
  }
  return out;
}

void AdaptiveController::derivative(const double* z, const Eigen::VectorXd& u,
                                    const Eigen::VectorXd& y0, const Eigen::VectorXd& omega,
                                    const Eigen::VectorXd& e, double* dz) const {
  std::size_t off = 0;
  w1_.derivative(z + off, u.data(), dz + off);
  off += static_cast<std::size_t>(w1_.state_size());
  w2_.derivative(z + off, y0.data(), dz + off);
  off += static_cast<std::size_t>(w2_.state_size());
  zeta_.derivative(z + off, omega.data(), dz + off);
  off += static_cast<std::size_t>(zeta_.state_size());
  hu_.derivative(z + off, u.data(), dz + off);
  off += static_cast<std::size_t>(hu_.state_size());
  eb_.derivative(z + off, e.data(), dz + off);
}

RegressorSnapshot AdaptiveController::estimation_error(const double* z,
                                                       const AdaptiveParams& p,
                                                       const Eigen::VectorXd& omega,
                                                       const Eigen::VectorXd& e) const {
  RegressorSnapshot s;
  s.omega = omega;
  const double* zz = z + w1_.state_size() + w2_.state_size();
  const double* zh = zz + zeta_.state_size();
  const int p_dim = omega_dim();
  s.zeta.resize(p_dim);
  for (int c = 0; c < p_dim; ++c) s.zeta(c) = zeta_.power(zz, c, 0);
  Eigen::VectorXd hu(m_);
  for (int c = 0; c < m_; ++c) hu(c) = hu_.power(zh, c, 0);
  s.xi_sig = control_output(p.Theta, s.zeta) - hu;
  s.ebar = ebar(z, e);
  s.epsilon = s.ebar + p.Psi * s.xi_sig;
  for (int i = 2; i <= m_; ++i) {
    s.eta.push_back(s.ebar.head(i - 1));
    s.epsilon(i - 1) += p.theta[static_cast<size_t>(i - 2)].dot(s.eta.back());
  }
  s.m2 = 1.0 + s.zeta.squaredNorm() + s.xi_sig.squaredNorm();
  for (const auto& eta : s.eta) s.m2 += eta.squaredNorm();
  return s;
}

Eigen::VectorXd control_output(const Eigen::MatrixXd& theta, const Eigen::VectorXd& omega) {
  if (theta.rows() != omega.size()) {
    throw DimensionError("control_output: Theta has " + std::to_string(theta.rows()) +
                         " rows but omega has " + std::to_string(omega.size()) + " entries");
  }
  Eigen::VectorXd u(theta.cols());
  kernels::active().gemv_t(theta.data(), static_cast<std::size_t>(theta.rows()),
                           static_cast<std::size_t>(theta.cols()), omega.data(), u.data());
  return u;
}

AdaptationRates adaptation_derivatives(const RegressorSnapshot& snap,
                                       const AdaptationGains& gains) {
  const auto m = snap.epsilon.size();
  const double inv = 1.0 / snap.m2;
  AdaptationRates r;
  r.dTheta = Eigen::MatrixXd::Zero(snap.zeta.size(), m);
  const Eigen::VectorXd ds_eps = gains.D_s * snap.epsilon;
  kernels::active().ger(-inv, snap.zeta.data(), static_cast<std::size_t>(snap.zeta.size()),
                        ds_eps.data(), static_cast<std::size_t>(m), r.dTheta.data());
  for (size_t i = 0; i < snap.eta.size(); ++i) {
    r.dtheta.push_back(-inv * snap.epsilon(static_cast<Eigen::Index>(i + 1)) *
                       (gains.Gamma_theta[i] * snap.eta[i]));
  }
  r.dPsi = -inv * gains.Gamma * snap.epsilon * snap.xi_sig.transpose();
  return r;
}

double lyapunov_value(const AdaptiveParams& est, const TruthParams& truth,
                      const AdaptationGains& gains) {
  Eigen::LLT<Eigen::MatrixXd> s_llt(truth.S);
  if (s_llt.info() != Eigen::Success || (truth.S - truth.S.transpose()).cwiseAbs().maxCoeff() >
                                            1e-10 * (1.0 + truth.S.cwiseAbs().maxCoeff())) {
    throw NumericalError("lyapunov_value: S is not symmetric positive definite");
  }
  double v = 0.0;
  for (size_t i = 0; i < est.theta.size(); ++i) {
    const Eigen::VectorXd d = est.theta[i] - truth.params.theta[i];
    v += d.dot(gains.Gamma_theta[i].llt().solve(d));
  }
  const Eigen::MatrixXd dpsi = est.Psi - truth.params.Psi;
  v += (dpsi.transpose() * gains.Gamma.llt().solve(dpsi)).trace();
  const Eigen::MatrixXd dth = est.Theta - truth.params.Theta;
  v += (dth.transpose() * dth * truth.S).trace();
  return 0.5 * v;
}

Eigen::VectorXd error_model(const RegressorSnapshot& snap, const AdaptiveParams& est,
                            const TruthParams& truth, const Eigen::MatrixXd& d_s) {
  const Eigen::MatrixXd dth = est.Theta - truth.params.Theta;
  Eigen::VectorXd out = d_s * truth.S * (dth.transpose() * snap.zeta) +
                        (est.Psi - truth.params.Psi) * snap.xi_sig;
  for (size_t i = 0; i < snap.eta.size(); ++i) {
    out(static_cast<Eigen::Index>(i + 1)) +=
        (est.theta[i] - truth.params.theta[i]).dot(snap.eta[i]);
  }
  return out;
}

}  // namespace psmrac
