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

#include <random>

#include <gtest/gtest.h>

#include "psmrac/error.hpp"
#include "psmrac/matching.hpp"
#include "psmrac/simulate.hpp"

namespace psmrac {
namespace {

StateSpace first_order() {
  return {Eigen::MatrixXd::Constant(1, 1, -1.0), Eigen::MatrixXd::Ones(1, 1),
          Eigen::MatrixXd::Ones(1, 1)};
}

TEST(FilterSpec, DefaultsAndValidation) {
  const FilterSpec f = default_filter_spec(8, 3, 2);
  EXPECT_EQ(f.k(), 5);
  EXPECT_EQ(f.Lambda, Polynomial::linear_power(3.0, 5));
  EXPECT_EQ(f.f, Polynomial::linear_power(5.0, 2));
  EXPECT_NO_THROW(f.validate(8, 3, 2));
  EXPECT_THROW(f.validate(8, 2, 2), ConfigError);
  EXPECT_THROW(f.validate(8, 3, 1), ConfigError);
  FilterSpec bad = f;
  bad.Lambda = Polynomial{-1.0, 1.0} * Polynomial::linear_power(3.0, 4);
  EXPECT_THROW(bad.validate(8, 3, 2), AssumptionError);
}

TEST(ControllerParams, StackRoundTrip) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> nd;
  const int m = 2, n0 = 3, k = 5;
  const int rows = m * k + n0 * k + n0 + m;
  const Eigen::MatrixXd th = Eigen::MatrixXd::NullaryExpr(rows, m, [&] { return nd(rng); });
  const auto p = ControllerParams::from_stacked(th, m, n0, k);
  EXPECT_EQ(p.omega_dim(), rows);
  EXPECT_EQ(p.stacked(), th);
  EXPECT_EQ(p.Theta3, th.bottomRows(m).transpose());
  EXPECT_THROW(ControllerParams::from_stacked(th.topRows(rows - 1), m, n0, k), DimensionError);
}

TEST(Matching, SisoHandAlgebra) {
  const auto xi = InteractorBundle::diagonal(2.0, {1});
  const FilterSpec f = default_filter_spec(1, 1, 1);
  EXPECT_EQ(f.k(), 0);
  const MatchSolution sol = solve_matching(first_order(), PartialStateSelector::from_states(1, {0}),
                                           xi, f);
  EXPECT_EQ(sol.params.Theta1.rows(), 0);
  EXPECT_EQ(sol.params.Theta2.rows(), 0);
  EXPECT_NEAR(sol.params.Theta3(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(sol.params.Theta20(0, 0), -1.0, 1e-10);
  EXPECT_TRUE(sol.matched());
}

// Random controllable plant with relative degree one per channel.
StateSpace random_plant(std::mt19937_64& rng, int n, int m) {
  std::normal_distribution<double> nd;
  StateSpace s;
  s.A = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return nd(rng); });
  s.A -= (s.A.eigenvalues().real().maxCoeff() + 1.0) * Eigen::MatrixXd::Identity(n, n);
  s.B = Eigen::MatrixXd::NullaryExpr(n, m, [&] { return nd(rng); });
  s.C = Eigen::MatrixXd::NullaryExpr(m, n, [&] { return nd(rng); });
  return s;
}

TEST(Matching, RandomPlantsFullAndMinimalState) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + trial % 3;
    const int m = 1 + trial % 2;
    const StateSpace s = random_plant(rng, n, m);
    const auto xi = find_diagonal_interactor(transfer_matrix(s), 2.0);
    for (const int n0 : {1, n}) {
      std::normal_distribution<double> nd;
      const PartialStateSelector sel{
          n0 == n ? Eigen::MatrixXd::Identity(n, n).eval()
                  : Eigen::MatrixXd::NullaryExpr(n0, n, [&] { return nd(rng); }).eval()};
      if (!check_observable(s.A, sel.C0).observable) continue;
      const FilterSpec f = default_filter_spec(n, n0, xi.d_m);
      const MatchSolution sol = solve_matching(s, sel, xi, f);
      EXPECT_LT(sol.residual, 1e-6) << "trial " << trial << " n0 " << n0;
      EXPECT_EQ(sol.nullity, 0) << "trial " << trial << " n0 " << n0;
    }
  }
}

TEST(Matching, GtmCasesResidualAndNullity) {
  const int expected_nullity[] = {10, 10, 0, 0, 6, 0};
  for (int c = 1; c <= 6; ++c) {
    const Scenario sc = case_preset(c);
    const MatchSolution sol = solve_matching(sc.plant, sc.sel, sc.xi, sc.fspec);
    EXPECT_LT(sol.residual, 1e-6) << sc.name;
    const int n0 = sc.sel.n0();
    EXPECT_EQ(sol.nullity, (n0 - 1) * (8 - n0)) << sc.name;
    EXPECT_EQ(sol.nullity, expected_nullity[c - 1]) << sc.name;
  }
}

TEST(Matching, CaseIIITimeDomainCrossCheck) {
  const Scenario sc = case_preset(3);
  const MatchSolution sol = solve_matching(sc.plant, sc.sel, sc.xi, sc.fspec);
  const auto v = verify_matching(sol, sc.plant, sc.sel, sc.xi, sc.fspec, 100.0, 0.005);
  EXPECT_TRUE(v.bounded);
  EXPECT_TRUE(v.passed);
  EXPECT_LT(v.max_error, 1e-6);
}

TEST(Matching, PerturbedParametersFail) {
  const Scenario sc = case_preset(3);
  MatchSolution sol = solve_matching(sc.plant, sc.sel, sc.xi, sc.fspec);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  Eigen::MatrixXd th = sol.params.stacked();
  th = th.array() * (1.0 + 0.1 * Eigen::ArrayXXd::NullaryExpr(th.rows(), th.cols(),
                                                               [&] { return ud(rng); }));
  sol.params = ControllerParams::from_stacked(th, 2, 1, 7);
  sol.residual = matching_residual(sol.params, sc.plant, sc.sel, sc.xi, sc.fspec,
                                   sol.sample_points);
  EXPECT_GT(sol.residual, 1e-6);
  bool passed = true;
  try {
    passed = verify_matching(sol, sc.plant, sc.sel, sc.xi, sc.fspec, 100.0, 0.005).passed;
  } catch (const DivergenceError&) {
    passed = false;
  }
  EXPECT_FALSE(passed);
}

TEST(ParamsFile, RoundTripIsExact) {
  const Scenario sc = case_preset(5);
  const ControllerParams p = solve_matching(sc.plant, sc.sel, sc.xi, sc.fspec).params;
  const ControllerParams q = parse_params(format_params(p));
  EXPECT_EQ(p.stacked(), q.stacked());
  EXPECT_EQ(q.n0(), 2);
  EXPECT_EQ(q.k(), 6);
}

TEST(ParamsFile, Errors) {
  EXPECT_THROW(parse_params("# nothing\n"), ConfigError);
  EXPECT_THROW(parse_params("1 1 0\n1 2\n"), ConfigError);
  EXPECT_THROW(parse_params("1 1 0\n1\nx\n"), ConfigError);
}

}  // namespace
}  // namespace psmrac
