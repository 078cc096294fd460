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

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "psmrac/plant.hpp"
#include "psmrac/polymatrix.hpp"

namespace psmrac {
namespace {

std::vector<Complex> sorted_roots(const Polynomial& p) {
  auto r = poly_roots(p);
  std::sort(r.begin(), r.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return r;
}

Eigen::MatrixXcd direct_transfer(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                 const Eigen::MatrixXd& c, Complex s) {
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXcd si = s * Eigen::MatrixXcd::Identity(n, n) - a.cast<Complex>();
  return c.cast<Complex>() * si.partialPivLu().solve(b.cast<Complex>());
}

double rel_error(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1e-300, b.cwiseAbs().maxCoeff());
}

TEST(Polynomial, TrimsAndEvaluates) {
  const Polynomial p{1.0, 2.0, 0.0, 0.0};
  EXPECT_EQ(p.degree(), 1);
  EXPECT_DOUBLE_EQ(p(2.0), 5.0);
  EXPECT_TRUE(Polynomial{}.is_zero());
  EXPECT_EQ(Polynomial{}.degree(), -1);
}

TEST(Polynomial, ProductAndDivision) {
  const Polynomial a{1.0, 1.0};
  const Polynomial b{2.0, 1.0};
  const Polynomial prod = a * b;
  EXPECT_EQ(prod, (Polynomial{2.0, 3.0, 1.0}));
  const auto [q, r] = divmod(prod, a);
  ASSERT_EQ(q.degree(), 1);
  EXPECT_NEAR(q[0], 2.0, 1e-15);
  EXPECT_NEAR(q[1], 1.0, 1e-15);
  EXPECT_TRUE(r.is_zero());
}

TEST(Polynomial, LinearPower) {
  EXPECT_EQ(Polynomial::linear_power(2.0, 2), (Polynomial{4.0, 4.0, 1.0}));
  EXPECT_EQ(Polynomial::linear_power(3.0, 0), Polynomial::constant(1.0));
}

TEST(PolyRoots, FirstOrder) {
  const auto r = poly_roots(Polynomial{1.0, 1.0});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(std::abs(r[0] - Complex(-1.0, 0.0)), 0.0, 1e-14);
}

TEST(PolyRoots, ImaginaryPair) {
  const auto r = sorted_roots(Polynomial{1.0, 0.0, 1.0});
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(std::abs(r[0] - Complex(0.0, -1.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r[1] - Complex(0.0, 1.0)), 0.0, 1e-12);
}

TEST(PolyRoots, FactoredQuadratic) {
  const auto r = sorted_roots(Polynomial{2.0, -3.0, 1.0});
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(std::abs(r[0] - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r[1] - 2.0), 0.0, 1e-12);
}

TEST(PolyRoots, ResidualSmallOnRandomPolynomials) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> c(7);
    for (auto& v : c) v = nd(rng);
    c.back() = 1.0;
    const Polynomial p(c);
    for (const auto& z : poly_roots(p)) EXPECT_LT(root_residual(p, z), 1e-9);
  }
}

TEST(PolyRoots, FromRootsRoundTrip) {
  const std::vector<Complex> roots{{-1.0, 2.0}, {-1.0, -2.0}, {-3.0, 0.0}};
  const Polynomial p = Polynomial::from_roots(roots);
  EXPECT_TRUE(p.is_monic());
  EXPECT_EQ(p.degree(), 3);
  const auto r = sorted_roots(p);
  EXPECT_NEAR(std::abs(r[0] - Complex(-3.0, 0.0)), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(r[1] - Complex(-1.0, -2.0)), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(r[2] - Complex(-1.0, 2.0)), 0.0, 1e-10);
}

TEST(PolyMatrix, ScalarProduct) {
  PolyMatrix p(1, 1), q(1, 1);
  p(0, 0) = Polynomial{0.0, 1.0};
  q(0, 0) = Polynomial{1.0, 1.0};
  EXPECT_EQ(polymat_mul(p, q)(0, 0), (Polynomial{0.0, 1.0, 1.0}));
}

PolyMatrix random_polymatrix(std::mt19937_64& rng, int rows, int cols, int deg) {
  std::normal_distribution<double> nd;
  PolyMatrix p(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      std::vector<double> c(deg + 1);
      for (auto& v : c) v = nd(rng);
      p(i, j) = Polynomial(c);
    }
  }
  return p;
}

TEST(PolyMatrix, IdentityIsNeutral) {
  std::mt19937_64 rng(3);
  const PolyMatrix q = random_polymatrix(rng, 3, 2, 2);
  const PolyMatrix r = polymat_mul(PolyMatrix::identity(3), q);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_EQ(r(i, j), q(i, j));
}

TEST(PolyMatrix, EvaluationHomomorphism) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const PolyMatrix p = random_polymatrix(rng, 2, 2, 2);
    const PolyMatrix q = random_polymatrix(rng, 2, 2, 2);
    const Complex s(2.0, 0.0);
    const Eigen::MatrixXcd lhs = polymat_mul(p, q).eval(s);
    const Eigen::MatrixXcd rhs = p.eval(s) * q.eval(s);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(PolyMatrix, CoefficientsRoundTrip) {
  std::mt19937_64 rng(9);
  const PolyMatrix p = random_polymatrix(rng, 2, 3, 3);
  std::vector<Eigen::MatrixXd> c;
  for (int k = 0; k <= p.max_degree(); ++k) c.push_back(p.coefficient(k));
  const PolyMatrix q = PolyMatrix::from_coefficients(c);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(p(i, j), q(i, j));
}

TEST(Faddeev, ScalarFirstOrder) {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Constant(1, 1, -1.0);
  const Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
  const RationalMatrix g = faddeev_resolvent(a, one, one);
  EXPECT_EQ(g.denominator, (Polynomial{1.0, 1.0}));
  EXPECT_EQ(g.numerator(0, 0), Polynomial::constant(1.0));
  EXPECT_TRUE(g.strictly_proper());
  EXPECT_NEAR(std::abs(eval_rational(g, 0.0)(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(eval_rational(g, 1.0)(0, 0) - 0.5), 0.0, 1e-15);
}

TEST(Faddeev, Integrator) {
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, 1);
  const Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
  const RationalMatrix g = faddeev_resolvent(zero, one, one);
  EXPECT_EQ(g.denominator, (Polynomial{0.0, 1.0}));
  EXPECT_EQ(g.numerator(0, 0), Polynomial::constant(1.0));
}

TEST(Faddeev, GtmAgreesWithDirectSolve) {
  const StateSpace gtm = gtm_model();
  const RationalMatrix g = faddeev_resolvent(gtm.A, gtm.B, gtm.C);
  EXPECT_EQ(g.denominator.degree(), 8);
  EXPECT_TRUE(g.denominator.is_monic());
  for (const Complex s : {Complex(1.0, 0.0), Complex(2.0, 3.0)}) {
    EXPECT_LT(rel_error(eval_rational(g, s), direct_transfer(gtm.A, gtm.B, gtm.C, s)), 1e-8);
  }
}

TEST(Faddeev, RandomPointsAgreeWithDirectSolve) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(-3.0, 3.0);
  const Eigen::MatrixXd a = Eigen::MatrixXd::NullaryExpr(6, 6, [&] { return nd(rng); });
  const Eigen::MatrixXd b = Eigen::MatrixXd::NullaryExpr(6, 2, [&] { return nd(rng); });
  const Eigen::MatrixXd c = Eigen::MatrixXd::NullaryExpr(2, 6, [&] { return nd(rng); });
  const Resolvent res = faddeev_leverrier(a);
  EXPECT_LT(res.closure_residual, 1e-10);
  for (int i = 0; i < 20; ++i) {
    const Complex s(ud(rng), ud(rng));
    EXPECT_LT(rel_error(transfer_at(a, b, c, s), direct_transfer(a, b, c, s)), 1e-8);
  }
}

TEST(Faddeev, CharacteristicRootsAreEigenvalues) {
  Eigen::MatrixXd a(3, 3);
  a << -1, 2, 0, 0, -2, 1, 0, 0, -3;
  const auto r = sorted_roots(faddeev_leverrier(a).characteristic);
  EXPECT_NEAR(std::abs(r[0] + 3.0), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(r[1] + 2.0), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(r[2] + 1.0), 0.0, 1e-10);
}

}  // namespace
}  // namespace psmrac
