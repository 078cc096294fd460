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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include <gtest/gtest.h>

#include "psmrac/error.hpp"
#include "psmrac/simulate.hpp"

namespace psmrac {
namespace {

Eigen::VectorXd step_response(const ReferenceModel& rm, int channel, double t_end) {
  const double h = 1e-4;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(rm.order());
  Eigen::VectorXd r = Eigen::VectorXd::Zero(rm.B.cols());
  r(channel) = 1.0;
  auto f = [&](const Eigen::VectorXd& s) { return (rm.A * s + rm.B * r).eval(); };
  const auto steps = static_cast<long>(std::llround(t_end / h));
  for (long i = 0; i < steps; ++i) {
    const Eigen::VectorXd k1 = f(x), k2 = f(x + 0.5 * h * k1), k3 = f(x + 0.5 * h * k2),
                          k4 = f(x + h * k3);
    x += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return rm.C * x;
}

TEST(Reference, SignalAndAmplitude) {
  ReferenceSignal r;
  r.tones = {{{2.0, 1.0, 0.0}}, {{-1.0, 0.5, 0.0}, {0.5, 2.0, 0.0}}};
  r.offsets = {0.0, 0.25};
  EXPECT_NEAR(r(std::numbers::pi / 2)(0), 2.0, 1e-15);
  EXPECT_EQ(r.amplitude(), Eigen::Vector2d(2.0, 1.75));
}

TEST(ReferenceModel, DecoupledChains) {
  const ReferenceModel rm = reference_model_realization(InteractorBundle::diagonal(2.0, {2, 2}));
  EXPECT_EQ(rm.order(), 4);
  const Eigen::VectorXcd ev = rm.A.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) EXPECT_NEAR(std::abs(ev(i) + 2.0), 0.0, 1e-6);
  EXPECT_EQ(rm.A.topRightCorner(2, 2), Eigen::MatrixXd::Zero(2, 2));
  const Eigen::VectorXd y = step_response(rm, 0, 1.0);
  EXPECT_NEAR(y(0), 0.25 * (1.0 - 3.0 * std::exp(-2.0)), 1e-9);
  EXPECT_NEAR(y(0), 0.1485, 1e-4);
  EXPECT_EQ(y(1), 0.0);
}

TEST(ReferenceModel, FirstOrder) {
  const ReferenceModel rm = reference_model_realization(InteractorBundle::diagonal(1.0, {1}));
  EXPECT_EQ(rm.A, Eigen::MatrixXd::Constant(1, 1, -1.0));
  EXPECT_EQ(rm.B, Eigen::MatrixXd::Ones(1, 1));
  EXPECT_EQ(rm.C, Eigen::MatrixXd::Ones(1, 1));
}

TEST(ReferenceModel, TriangularInteractorRealizesInverse) {
  PolyMatrix xi(2, 2);
  xi(0, 0) = Polynomial{2.0, 1.0};
  xi(1, 0) = Polynomial{1.0};
  xi(1, 1) = Polynomial::linear_power(3.0, 2);
  const ReferenceModel rm = reference_model_realization(InteractorBundle::from_matrix(xi));
  for (const Complex s : {Complex(0.5, 1.0), Complex(-0.3, 2.0)}) {
    const Eigen::MatrixXcd w = transfer_at(rm.A, rm.B, rm.C, s);
    EXPECT_LT((xi.eval(s) * w - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Presets, Selectors) {
  const Scenario c1 = case_preset(1);
  EXPECT_EQ(c1.sel.n0(), 3);
  for (const int s : {2, 3, 6}) EXPECT_EQ(c1.sel.C0.col(s).sum(), 1.0);
  const Scenario c4 = case_preset(4);
  EXPECT_EQ(c4.sel.n0(), 1);
  EXPECT_EQ(c4.sel.C0(0, 5), 1.0);
  const Scenario c6 = case_preset(6);
  EXPECT_EQ(c6.fspec.k(), 0);
  EXPECT_EQ(c6.theta_star->omega_dim(), 8 + 2);
  EXPECT_EQ(c6.theta_star->Theta1.rows(), 0);
  EXPECT_THROW(case_preset(7), ConfigError);
}

TEST(ClosedLoop, FrozenTruthZeroInitialConditions) {
  Scenario sc = case_preset(3);
  sc.x0.setZero();
  sc.t_end = 100.0;
  const Trajectory tr = run_closed_loop(sc, RunMode::frozen_at(*sc.theta_star));
  ASSERT_FALSE(tr.diverged);
  double worst = 0.0;
  for (const auto& e : tr.e) worst = std::max(worst, e.cwiseAbs().maxCoeff());
  EXPECT_LT(worst, 1e-6);
}

TEST(ClosedLoop, FrozenTruthInitialErrorDecays) {
  Scenario sc = case_preset(1);
  sc.t_end = 100.0;
  const Trajectory tr = run_closed_loop(sc, RunMode::frozen_at(*sc.theta_star));
  ASSERT_FALSE(tr.diverged);
  double head = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double e = tr.e[i].cwiseAbs().maxCoeff();
    if (tr.t[i] < 5.0) head = std::max(head, e);
    if (tr.t[i] > 60.0) tail = std::max(tail, e);
  }
  EXPECT_GT(head, 1e-4);
  EXPECT_LT(tail, 1e-3 * head);
}

TEST(ClosedLoop, CaseIIIAdaptiveTracks) {
  const Scenario sc = case_preset(3);
  const Trajectory tr = run_closed_loop(sc, RunMode::adaptive());
  ASSERT_FALSE(tr.diverged) << tr.message;
  const Metrics m = compute_metrics(tr, 0.1, sc.reference.amplitude());
  EXPECT_TRUE(tracking_ok(m)) << format_metrics(m);
  EXPECT_LT(m.sup_x, 1e6);
  EXPECT_EQ(m.v_violations, 0);
  EXPECT_LE(m.v_final, m.v0 * (1.0 + 1e-4));
}

TEST(ClosedLoop, DivergenceIsFlagged) {
  Scenario sc = case_preset(3);
  sc.t_end = 50.0;
  sc.divergence_threshold = 1e-3;
  const Trajectory tr = run_closed_loop(sc, RunMode::adaptive());
  EXPECT_TRUE(tr.diverged);
  EXPECT_GE(tr.diverged_step, 0);
  const Metrics m = compute_metrics(tr, 0.1, sc.reference.amplitude());
  EXPECT_FALSE(m.valid);
  EXPECT_FALSE(tracking_ok(m));
}

TEST(ClosedLoop, RejectsBadScenario) {
  Scenario sc = case_preset(3);
  sc.dt = 0.0;
  EXPECT_THROW(run_closed_loop(sc, RunMode::adaptive()), ConfigError);
  sc = case_preset(3);
  sc.sel.C0 = Eigen::MatrixXd::Zero(1, 8);
  EXPECT_THROW(run_closed_loop(sc, RunMode::adaptive()), Error);
}

Trajectory synthetic(double (*fn)(double)) {
  Trajectory tr;
  tr.n = 1;
  tr.m = 1;
  for (int i = 0; i <= 4000; ++i) {
    const double t = 0.1 * i;
    tr.t.push_back(t);
    const Eigen::VectorXd e = Eigen::VectorXd::Constant(1, fn(t));
    tr.x.push_back(e);
    tr.y.push_back(e);
    tr.ym.push_back(Eigen::VectorXd::Zero(1));
    tr.e.push_back(e);
    tr.u.push_back(Eigen::VectorXd::Zero(1));
    tr.eps.push_back(Eigen::VectorXd::Zero(1));
    tr.m2.push_back(1.0);
    tr.V.push_back(std::numeric_limits<double>::quiet_NaN());
  }
  return tr;
}

TEST(Metrics, ZeroError) {
  const Metrics m = compute_metrics(synthetic([](double) { return 0.0; }), 0.1,
                                    Eigen::VectorXd::Ones(1));
  EXPECT_TRUE(m.valid);
  EXPECT_EQ(m.final_mean_abs_e[0], 0.0);
  EXPECT_EQ(m.sup_e, 0.0);
  EXPECT_TRUE(std::isnan(m.v0));
}

TEST(Metrics, ExponentialDecayHitsFloor) {
  const Metrics m = compute_metrics(synthetic([](double t) { return std::exp(-t); }), 0.1,
                                    Eigen::VectorXd::Ones(1));
  EXPECT_EQ(m.final_mean_abs_e[0], 0.0);
  EXPECT_EQ(m.sup_e, 1.0);
}

TEST(Metrics, DivergingSignalInvalid) {
  Trajectory tr = synthetic([](double t) { return std::exp(t); });
  const Metrics m = compute_metrics(tr, 0.1, Eigen::VectorXd::Ones(1));
  EXPECT_FALSE(m.valid);
}

TEST(Csv, RoundTripReproducesMetrics) {
  Scenario sc = case_preset(4);
  sc.t_end = 20.0;
  const Trajectory tr = run_closed_loop(sc, RunMode::adaptive());
  const auto path = (std::filesystem::temp_directory_path() / "psmrac_roundtrip.csv").string();
  write_trajectory_csv(path, tr);
  const Trajectory back = read_trajectory_csv(path);
  std::filesystem::remove(path);
  ASSERT_EQ(back.size(), tr.size());
  EXPECT_EQ(back.n, 8);
  EXPECT_EQ(back.m, 2);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    ASSERT_EQ(back.t[i], tr.t[i]);
    ASSERT_EQ(back.x[i], tr.x[i]);
    ASSERT_EQ(back.e[i], tr.e[i]);
    ASSERT_EQ(back.V[i], tr.V[i]);
  }
  const Eigen::VectorXd amp = sc.reference.amplitude();
  const Metrics a = compute_metrics(tr, 0.1, amp);
  const Metrics b = compute_metrics(back, 0.1, amp);
  EXPECT_EQ(a.final_mean_abs_e, b.final_mean_abs_e);
  EXPECT_EQ(a.relative_error, b.relative_error);
  EXPECT_EQ(a.sup_x, b.sup_x);
  EXPECT_EQ(a.sup_u, b.sup_u);
  EXPECT_EQ(a.sup_e, b.sup_e);
  EXPECT_EQ(a.v0, b.v0);
  EXPECT_EQ(a.v_final, b.v_final);
  EXPECT_EQ(a.v_violations, b.v_violations);
  EXPECT_EQ(a.v_worst_increase, b.v_worst_increase);
  EXPECT_EQ(a.l2_tail_ratio, b.l2_tail_ratio);
}

TEST(Csv, RejectsMalformed) {
  const auto path = (std::filesystem::temp_directory_path() / "psmrac_bad.csv").string();
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("t,x1,y1,ym1,e1,u1,eps1,m2,V\n0,1,2\n", f);
    std::fclose(f);
  }
  EXPECT_THROW(read_trajectory_csv(path), ConfigError);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace psmrac
