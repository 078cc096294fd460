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

#include "psmrac/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "psmrac/error.hpp"
#include "psmrac/kernels.hpp"

namespace psmrac {

Eigen::VectorXd ReferenceSignal::operator()(double t) const {
  Eigen::VectorXd r(channels());
  for (int i = 0; i < channels(); ++i) {
    double v = i < static_cast<int>(offsets.size()) ? offsets[static_cast<size_t>(i)] : 0.0;
    for (const auto& tone : tones[static_cast<size_t>(i)]) {
      v += tone.amplitude * std::sin(tone.frequency * t + tone.phase);
    }
    r(i) = v;
  }
  return r;
}

Eigen::VectorXd ReferenceSignal::amplitude() const {
  Eigen::VectorXd a(channels());
  for (int i = 0; i < channels(); ++i) {
    double v = i < static_cast<int>(offsets.size()) ? std::abs(offsets[static_cast<size_t>(i)]) : 0.0;
    for (const auto& tone : tones[static_cast<size_t>(i)]) v += std::abs(tone.amplitude);
    a(i) = v;
  }
  return a;
}

namespace {

// Companion block for a monic polynomial, input entering the last state.
void place_chain(const Polynomial& den, Eigen::Index off, Eigen::MatrixXd& a) {
  const int k = den.degree();
  for (int j = 0; j + 1 < k; ++j) a(off + j, off + j + 1) = 1.0;
  for (int j = 0; j < k; ++j) a(off + k - 1, off + j) = -den.coeffs()[static_cast<size_t>(j)];
}

}  // namespace

ReferenceModel reference_model_realization(const InteractorBundle& xi) {
  xi.validate();
  const int m = xi.m();
  ReferenceModel rm;
  if (xi.is_diagonal()) {
    int total = 0;
    for (int i = 0; i < m; ++i) total += xi.xi_m(i, i).degree();
    rm.A = Eigen::MatrixXd::Zero(total, total);
    rm.B = Eigen::MatrixXd::Zero(total, m);
    rm.C = Eigen::MatrixXd::Zero(m, total);
    Eigen::Index off = 0;
    for (int i = 0; i < m; ++i) {
      const Polynomial& d = xi.xi_m(i, i);
      place_chain(d, off, rm.A);
      rm.B(off + d.degree() - 1, i) = 1.0;
      rm.C(i, off) = 1.0;
      off += d.degree();
    }
    return rm;
  }
  // W = N / D with D = prod d_i and N lower triangular by back substitution.
  Polynomial den = Polynomial::constant(1.0);
  for (int i = 0; i < m; ++i) den = den * xi.xi_m(i, i);
  PolyMatrix num(m, m);
  for (int j = 0; j < m; ++j) {
    num(j, j) = divmod(den, xi.xi_m(j, j)).first;
    for (int i = j + 1; i < m; ++i) {
      Polynomial acc;
      for (int l = j; l < i; ++l) acc += xi.xi_m(i, l) * num(l, j);
      const auto [q, rem] = divmod(acc, xi.xi_m(i, i));
      double scale = 1.0;
      for (double c : acc.coeffs()) scale = std::max(scale, std::abs(c));
      for (double c : rem.coeffs()) {
        if (std::abs(c) > 1e-9 * scale) {
          throw NumericalError("reference_model_realization: inexact triangular division");
        }
      }
      num(i, j) = -1.0 * q;
    }
  }
  const int k = den.degree();
  rm.A = Eigen::MatrixXd::Zero(k * m, k * m);
  rm.B = Eigen::MatrixXd::Zero(k * m, m);
  rm.C = Eigen::MatrixXd::Zero(m, k * m);
  for (int j = 0; j < m; ++j) {
    const Eigen::Index off = static_cast<Eigen::Index>(j) * k;
    place_chain(den, off, rm.A);
    rm.B(off + k - 1, j) = 1.0;
    for (int i = j; i < m; ++i) {
      const auto& c = num(i, j).coeffs();
      if (static_cast<int>(c.size()) > k) {
        throw NumericalError("reference_model_realization: xi_m^{-1} is not strictly proper");
      }
      for (size_t l = 0; l < c.size(); ++l) rm.C(i, off + static_cast<Eigen::Index>(l)) = c[l];
    }
  }
  return rm;
}

void Scenario::validate() const {
  plant.validate();
  const int n = plant.n();
  const int m = plant.m();
  if (!(dt > 0.0)) throw ConfigError("scenario: dt must be > 0");
  if (!(t_end >= 100.0 * dt)) throw ConfigError("scenario: t_end must be >= 100 dt");
  if (decimation < 1) throw ConfigError("scenario: decimation must be >= 1");
  if (sel.C0.cols() != n) throw ConfigError("scenario: selector must have n columns");
  if (numerical_rank(sel.C0) != sel.n0()) throw AssumptionError("scenario: C0 rank deficient");
  if (!check_observable(plant.A, sel.C0).observable) {
    throw AssumptionError("scenario: (A, C0) not observable");
  }
  if (xi.m() != m) throw ConfigError("scenario: interactor size differs from M");
  fspec.validate(n, sel.n0(), xi.d_m);
  gains.validate(m);
  if (reference.channels() != m) throw ConfigError("scenario: reference needs M channels");
  const auto amp = reference.amplitude();
  if (!amp.allFinite()) throw ConfigError("scenario: reference amplitudes must be finite");
  if (x0.size() != n) throw ConfigError("scenario: x0 must have n entries");
  if (theta_init != ThetaInit::kZero && !truth) {
    throw ConfigError("scenario: truth-based Theta(0) needs ground truth");
  }
}

void attach_truth(Scenario& sc) {
  const MatchSolution sol = solve_matching(sc.plant, sc.sel, sc.xi, sc.fspec);
  if (!sol.matched()) {
    std::ostringstream os;
    os << "no matching solution at this filter order (residual " << sol.residual << ")";
    throw AssumptionError(os.str());
  }
  const HighFrequencyGain hfg = high_freq_gain(transfer_matrix(sc.plant), sc.xi);
  std::vector<double> gamma;
  for (Eigen::Index i = 0; i < sc.gains.D_s.rows(); ++i) {
    gamma.push_back(std::abs(sc.gains.D_s(i, i)));
  }
  const LDSDecomposition lds = lds_decompose(hfg, gamma);
  if ((lds.D_s - sc.gains.D_s).cwiseAbs().maxCoeff() > 0.0) {
    throw AssumptionError("scenario: D_s signs disagree with the high-frequency gain");
  }
  sc.theta_star = sol.params;
  sc.truth = make_truth(sol.params, lds);
}

namespace {

bool finite_and_below(const Eigen::VectorXd& v, double limit) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i)) || std::abs(v(i)) > limit) return false;
  }
  return true;
}

struct Signals {
  Eigen::VectorXd y, ym, e, u, eps, eps_model;
  double m2 = 1.0;
};

}  // namespace

Trajectory run_closed_loop(const Scenario& sc, const RunMode& mode) {
  sc.validate();
  const bool adaptive = mode.kind == RunMode::Kind::kAdaptive;
  const StateSpace& p = sc.plant;
  const int n = p.n();
  const int m = p.m();
  const int n0 = sc.sel.n0();
  const ReferenceModel rm = reference_model_realization(sc.xi);
  const AdaptiveController ctrl(m, n0, sc.xi, sc.fspec);
  const int nm = rm.order();
  const int nc = ctrl.state_size();

  AdaptiveParams params = AdaptiveParams::zeros(ctrl.omega_dim(), m);
  if (adaptive) {
    if (sc.theta_init == ThetaInit::kZero) {
      for (int i = 0; i < m; ++i) {
        params.Psi(i, i) = sc.psi0_factor * 0.5 * (sc.gains.D_s(i, i) > 0.0 ? 1.0 : -1.0);
      }
    } else {
      params = sc.truth->params;
      if (sc.theta_init == ThetaInit::kTruthPerturbed) {
        std::mt19937_64 rng(sc.seed);
        std::normal_distribution<double> g(0.0, 1.0);
        for (Eigen::Index j = 0; j < params.Theta.cols(); ++j) {
          for (Eigen::Index i = 0; i < params.Theta.rows(); ++i) {
            params.Theta(i, j) *= 1.0 + sc.theta_perturbation * g(rng);
          }
        }
      }
    }
  } else {
    if (!mode.frozen) throw ConfigError("run_closed_loop: frozen mode needs parameters");
    const auto& f = *mode.frozen;
    if (f.m() != m || f.n0() != n0 || f.omega_dim() != ctrl.omega_dim()) {
      throw DimensionError("run_closed_loop: frozen parameters do not fit the scenario");
    }
    if (mode.frozen_full) {
      params = *mode.frozen_full;
      if (params.Theta.rows() != ctrl.omega_dim() || params.Psi.rows() != m) {
        throw DimensionError("run_closed_loop: frozen parameters do not fit the scenario");
      }
    }
    params.Theta = f.stacked();
  }
  const int np = adaptive ? params.flat_size() : 0;
  const int dim = n + nm + nc + np;

  Eigen::VectorXd z = Eigen::VectorXd::Zero(dim);
  z.head(n) = sc.x0;
  if (sc.ym_state0.size() > 0) {
    if (sc.ym_state0.size() != nm) throw ConfigError("scenario: reference-model state size");
    z.segment(n, nm) = sc.ym_state0;
  }
  if (adaptive) params.pack(z.data() + n + nm + nc);

  AdaptiveParams work = params;
  Signals sig;
  const bool with_model = sc.truth.has_value();
  auto rhs = [&](double t, const Eigen::VectorXd& s, Eigen::VectorXd& ds) {
    const Eigen::VectorXd x = s.head(n);
    const Eigen::VectorXd xm = s.segment(n, nm);
    const double* zc = s.data() + n + nm;
    if (adaptive) work.unpack(s.data() + n + nm + nc);
    const Eigen::VectorXd r = sc.reference(t);
    sig.y = p.C * x;
    sig.ym = rm.C * xm;
    sig.e = sig.y - sig.ym;
    const Eigen::VectorXd y0 = sc.sel.C0 * x;
    const Eigen::VectorXd w = ctrl.omega(zc, y0, r);
    sig.u = control_output(work.Theta, w);
    ds.head(n) = p.A * x + p.B * sig.u;
    ds.segment(n, nm) = rm.A * xm + rm.B * r;
    ctrl.derivative(zc, sig.u, y0, w, sig.e, ds.data() + n + nm);
    const RegressorSnapshot snap = ctrl.estimation_error(zc, work, w, sig.e);
    sig.eps = snap.epsilon;
    sig.m2 = snap.m2;
    if (with_model) sig.eps_model = error_model(snap, work, *sc.truth, sc.gains.D_s);
    if (adaptive) {
      const AdaptationRates rates = adaptation_derivatives(snap, sc.gains);
      AdaptiveParams d{rates.dTheta, rates.dtheta, rates.dPsi};
      d.pack(ds.data() + n + nm + nc);
    }
  };

  Trajectory tr;
  tr.n = n;
  tr.m = m;
  const auto steps = static_cast<long>(std::floor(sc.t_end / sc.dt + 1e-9));
  const auto reserve = static_cast<std::size_t>(steps + 1);
  tr.t.reserve(reserve);
  for (auto* v : {&tr.x, &tr.y, &tr.ym, &tr.e, &tr.u, &tr.eps}) v->reserve(reserve);
  tr.m2.reserve(reserve);
  tr.V.reserve(reserve);
  const bool monitor = adaptive && sc.truth.has_value();

  const auto& kt = kernels::active();
  const auto udim = static_cast<std::size_t>(dim);
  Eigen::VectorXd k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  const double h = sc.dt;
  for (long i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * h;
    rhs(t, z, k1);
    tr.t.push_back(t);
    tr.x.push_back(z.head(n));
    tr.y.push_back(sig.y);
    tr.ym.push_back(sig.ym);
    tr.e.push_back(sig.e);
    tr.u.push_back(sig.u);
    tr.eps.push_back(sig.eps);
    if (with_model) tr.eps_model.push_back(sig.eps_model);
    tr.m2.push_back(sig.m2);
    tr.V.push_back(monitor ? lyapunov_value(work, *sc.truth, sc.gains)
                           : std::numeric_limits<double>::quiet_NaN());
    if (i % sc.decimation == 0 || i == steps) {
      tr.theta_t.push_back(t);
      tr.theta.push_back(work.Theta);
    }
    if (!z.allFinite() || !sig.u.allFinite() || !sig.eps.allFinite()) {
      tr.diverged = true;
      tr.diverged_step = i;
      tr.message = "non-finite value at step " + std::to_string(i);
      return tr;
    }
    const bool ok = finite_and_below(z.head(n + nm + nc), sc.divergence_threshold) &&
                    finite_and_below(sig.u, sc.divergence_threshold) &&
                    finite_and_below(sig.eps, sc.divergence_threshold);
    if (!ok) {
      tr.diverged = true;
      tr.diverged_step = i;
      std::ostringstream os;
      os << "signal norm exceeded " << sc.divergence_threshold << " at step " << i
         << " (t = " << t << ")";
      tr.message = os.str();
      return tr;
    }
    if (i == steps) break;
    kt.stage(z.data(), 0.5 * h, k1.data(), tmp.data(), udim);
    rhs(t + 0.5 * h, tmp, k2);
    kt.stage(z.data(), 0.5 * h, k2.data(), tmp.data(), udim);
    rhs(t + 0.5 * h, tmp, k3);
    kt.stage(z.data(), h, k3.data(), tmp.data(), udim);
    rhs(t + h, tmp, k4);
    kt.rk4_combine(h, k1.data(), k2.data(), k3.data(), k4.data(), z.data(), udim);
  }
  return tr;
}

MatchingVerification verify_matching(const MatchSolution& sol, const StateSpace& sys,
                                     const PartialStateSelector& sel,
                                     const InteractorBundle& xi, const FilterSpec& fspec,
                                     double t_end, double dt) {
  if (!std::isfinite(sol.residual)) throw NumericalError("verify_matching: residual not finite");
  Scenario sc;
  sc.name = "verify";
  sc.plant = sys;
  sc.sel = sel;
  sc.xi = xi;
  sc.fspec = fspec;
  const int m = sys.m();
  sc.gains = AdaptationGains::uniform(m, 1.0, 1.0, Eigen::MatrixXd::Identity(m, m));
  sc.reference.tones.assign(static_cast<size_t>(m), {{1.0, 0.1, 0.0}, {0.5, 0.7, 0.3}});
  sc.x0 = Eigen::VectorXd::Zero(sys.n());
  sc.t_end = t_end;
  sc.dt = dt;
  const Trajectory tr = run_closed_loop(sc, RunMode::frozen_at(sol.params));
  MatchingVerification out;
  out.reference_amplitude = sc.reference.amplitude().maxCoeff();
  out.bounded = !tr.diverged;
  if (tr.diverged) throw DivergenceError("matching verification failed: " + tr.message);
  const std::size_t start = tr.size() - tr.size() / 4;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double e = tr.e[i].cwiseAbs().maxCoeff();
    out.max_error = std::max(out.max_error, e);
    if (i >= start) out.tail_error = std::max(out.tail_error, e);
  }
  out.passed = out.bounded && out.tail_error < 1e-3 * out.reference_amplitude;
  return out;
}

Scenario case_preset(int index) {
  static const std::vector<std::vector<int>> kStates = {
      {2, 3, 6}, {2, 5, 6}, {7}, {5}, {3, 7}, {0, 1, 2, 3, 4, 5, 6, 7}};
  static const char* kNames[] = {"I", "II", "III", "IV", "V", "VI"};
  if (index < 1 || index > 6) throw ConfigError("case index must be 1..6");
  Scenario sc;
  sc.name = std::string("Case ") + kNames[index - 1];
  sc.plant = gtm_model();
  const int n = sc.plant.n();
  const int m = sc.plant.m();
  sc.sel = PartialStateSelector::from_states(n, kStates[static_cast<size_t>(index - 1)]);
  const RationalMatrix g = transfer_matrix(sc.plant);
  sc.xi = find_diagonal_interactor(g, 2.0);
  sc.fspec = default_filter_spec(n, sc.sel.n0(), sc.xi.d_m, kGtmLambdaPole);
  const HighFrequencyGain hfg = high_freq_gain(g, sc.xi);
  const LDSDecomposition lds =
      lds_decompose(hfg, std::vector<double>(static_cast<size_t>(m), kGtmGamma));
  sc.gains = AdaptationGains::uniform(m, 5.0, 5.0, lds.D_s);
  const double deg = std::numbers::pi / 180.0;
  sc.reference.tones = {{{-40.0 * deg, 0.1, 0.0}}, {{-15.0 * deg, 0.1, 0.0}}};
  sc.x0 = Eigen::VectorXd::Zero(n);
  sc.x0(3) = -0.01;
  sc.x0(7) = -0.01;
  sc.t_end = 400.0;
  sc.dt = 0.005;
  attach_truth(sc);
  return sc;
}

std::vector<Scenario> case_presets() {
  std::vector<Scenario> out;
  for (int i = 1; i <= 6; ++i) out.push_back(case_preset(i));
  return out;
}

Metrics compute_metrics(const Trajectory& tr, double window_fraction,
                        const Eigen::VectorXd& amplitude, double v_tol,
                        double signal_bound) {
  if (tr.size() == 0) throw ConfigError("compute_metrics: empty trajectory");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
    throw ConfigError("compute_metrics: window fraction must be in (0, 1]");
  }
  Metrics mt;
  mt.samples = tr.size();
  mt.valid = !tr.diverged;
  const auto nsamp = tr.size();
  const auto win = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(window_fraction * static_cast<double>(nsamp))));
  const std::size_t start = nsamp - win;
  const auto m = tr.e.front().size();
  mt.final_mean_abs_e.assign(static_cast<size_t>(m), 0.0);
  for (std::size_t i = start; i < nsamp; ++i) {
    for (Eigen::Index c = 0; c < m; ++c) {
      mt.final_mean_abs_e[static_cast<size_t>(c)] += std::abs(tr.e[i](c));
    }
  }
  for (Eigen::Index c = 0; c < m; ++c) {
    double& v = mt.final_mean_abs_e[static_cast<size_t>(c)];
    v /= static_cast<double>(win);
    if (v < 1e-12) v = 0.0;
    const double a = c < amplitude.size() ? amplitude(c) : 0.0;
    mt.relative_error.push_back(a > 0.0 ? v / a : v);
  }
  double first = 0.0;
  double second = 0.0;
  for (std::size_t i = 0; i < nsamp; ++i) {
    mt.sup_x = std::max(mt.sup_x, tr.x[i].cwiseAbs().maxCoeff());
    mt.sup_u = std::max(mt.sup_u, tr.u[i].cwiseAbs().maxCoeff());
    mt.sup_e = std::max(mt.sup_e, tr.e[i].cwiseAbs().maxCoeff());
    const double q = tr.eps[i].squaredNorm() / tr.m2[i];
    (2 * i < nsamp ? first : second) += q;
  }
  mt.l2_tail_ratio = first > 0.0 ? second / first : 0.0;
  for (const auto& th : tr.theta) mt.sup_theta = std::max(mt.sup_theta, th.cwiseAbs().maxCoeff());
  if (!std::isnan(tr.V.front())) {
    mt.v0 = tr.V.front();
    mt.v_final = tr.V.back();
    const double tol = v_tol * mt.v0;
    for (std::size_t i = 1; i < nsamp; ++i) {
      const double inc = tr.V[i] - tr.V[i - 1];
      mt.v_worst_increase = std::max(mt.v_worst_increase, inc);
      if (inc > tol) ++mt.v_violations;
    }
  } else {
    mt.v0 = mt.v_final = std::numeric_limits<double>::quiet_NaN();
  }
  for (double v : mt.final_mean_abs_e) {
    if (!std::isfinite(v)) mt.valid = false;
  }
  for (double v : {mt.sup_x, mt.sup_u, mt.sup_e}) {
    if (!(v < signal_bound)) mt.valid = false;
  }
  return mt;
}

bool tracking_ok(const Metrics& m, double tol) {
  if (!m.valid) return false;
  return std::all_of(m.relative_error.begin(), m.relative_error.end(),
                     [&](double r) { return r < tol; });
}

void write_trajectory_csv(const std::string& path, const Trajectory& tr) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "t";
  for (int i = 1; i <= tr.n; ++i) out << ",x" << i;
  for (const char* name : {"y", "ym", "e", "u", "eps"}) {
    for (int i = 1; i <= tr.m; ++i) out << ',' << name << i;
  }
  out << ",m2,V\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << ',' << buf;
  };
  for (std::size_t k = 0; k < tr.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", tr.t[k]);
    out << buf;
    for (Eigen::Index i = 0; i < tr.n; ++i) put(tr.x[k](i));
    for (const auto* sig : {&tr.y, &tr.ym, &tr.e, &tr.u, &tr.eps}) {
      for (Eigen::Index i = 0; i < tr.m; ++i) put((*sig)[k](i));
    }
    put(tr.m2[k]);
    put(tr.V[k]);
    out << '\n';
  }
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path + ": empty file");
  std::vector<std::string> cols;
  {
    std::istringstream hs(line);
    std::string c;
    while (std::getline(hs, c, ',')) cols.push_back(c);
  }
  Trajectory tr;
  for (const auto& c : cols) {
    if (c.size() > 1 && c[0] == 'x') ++tr.n;
    if (c.size() > 1 && c[0] == 'u') ++tr.m;
  }
  const std::size_t expected = 1 + static_cast<std::size_t>(tr.n + 5 * tr.m + 2);
  if (cols.size() != expected || cols.front() != "t") {
    throw ConfigError(path + ": unexpected CSV header");
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> v;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        v.push_back(std::stod(cell));
      } catch (const std::exception&) {
        if (cell == "nan" || cell == "-nan") {
          v.push_back(std::numeric_limits<double>::quiet_NaN());
        } else {
          throw ConfigError(path + ": line " + std::to_string(lineno) + ": bad value");
        }
      }
    }
    if (v.size() != expected) {
      throw ConfigError(path + ": line " + std::to_string(lineno) + ": wrong column count");
    }
    std::size_t at = 0;
    tr.t.push_back(v[at++]);
    auto take = [&](int count) {
      Eigen::VectorXd out(count);
      for (int i = 0; i < count; ++i) out(i) = v[at++];
      return out;
    };
    tr.x.push_back(take(tr.n));
    tr.y.push_back(take(tr.m));
    tr.ym.push_back(take(tr.m));
    tr.e.push_back(take(tr.m));
    tr.u.push_back(take(tr.m));
    tr.eps.push_back(take(tr.m));
    tr.m2.push_back(v[at++]);
    tr.V.push_back(v[at++]);
  }
  return tr;
}

std::string format_metrics(const Metrics& m) {
  std::ostringstream out;
  out.precision(10);
  out << "valid = " << (m.valid ? "true" : "false") << '\n';
  out << "samples = " << m.samples << '\n';
  for (size_t i = 0; i < m.final_mean_abs_e.size(); ++i) {
    out << "final_mean_abs_e" << i + 1 << " = " << m.final_mean_abs_e[i] << '\n';
    out << "relative_error" << i + 1 << " = " << m.relative_error[i] << '\n';
  }
  out << "sup_x = " << m.sup_x << '\n';
  out << "sup_u = " << m.sup_u << '\n';
  out << "sup_e = " << m.sup_e << '\n';
  out << "sup_theta = " << m.sup_theta << '\n';
  out << "V0 = " << m.v0 << '\n';
  out << "V_final = " << m.v_final << '\n';
  out << "V_violations = " << m.v_violations << '\n';
  out << "V_worst_increase = " << m.v_worst_increase << '\n';
  out << "eps_l2_tail_ratio = " << m.l2_tail_ratio << '\n';
  return out.str();
}

}  // namespace psmrac
