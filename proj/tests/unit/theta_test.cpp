#include <gtest/gtest.h>

#include <random>

#include "../support/oracle.hpp"
#include "thetagauss/theta.hpp"

using namespace thetagauss;

namespace {

// Brute-force references (mpmath, 30 digits, |n| <= 40).
constexpr double kTheta01 = 1.0864348112133080;        // sum e^{-pi n^2}
constexpr double kSecondSum01 = 0.0864557352758540;    // sum n^2 e^{-pi n^2}

ThetaPoint scalar_point(Complex u, Complex b) {
  return ThetaPoint(CVector::Constant(1, u), SiegelMatrix(CMatrix::Constant(1, 1, b)));
}

CMatrix random_siegel(int g, std::mt19937_64& rng, double im_scale = 0.5) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  CMatrix B = oracle::random_spd(g, 0.6, 1.8, rng).cast<Complex>();
  for (int i = 0; i < g; ++i)
    for (int j = i; j < g; ++j) {
      const double im = im_scale * U(rng);
      B(i, j) += Complex(0.0, im);
      if (i != j) B(j, i) = B(i, j);
    }
  return B;
}

CVector random_u(int g, std::mt19937_64& rng, double scale = 0.5) {
  std::uniform_real_distribution<double> U(-scale, scale);
  CVector u(g);
  for (int i = 0; i < g; ++i) u(i) = Complex(U(rng), U(rng));
  return u;
}

}  // namespace

TEST(SiegelMatrix, RejectsNonSymmetric) {
  CMatrix B(2, 2);
  B << 1.0, 0.2, 0.3, 1.0;
  try {
    SiegelMatrix s(B);
    FAIL() << "expected NotSymmetric";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSymmetric);
  }
}

TEST(SiegelMatrix, RejectsIndefiniteRealPart) {
  CMatrix B(2, 2);
  B << 1.0, 2.0, 2.0, 1.0;
  try {
    SiegelMatrix s(B);
    FAIL() << "expected NonPositiveDefinite";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveDefinite);
  }
  EXPECT_THROW(SiegelMatrix(CMatrix::Constant(1, 1, Complex(0.0, 1.0))), Error);
}

TEST(Truncation, UnitScalarAtTightTolerance) {
  const auto p = scalar_point(0.0, 1.0);
  const auto budget = truncation_radius(p.B(), p.u(), MultiIndex{0}, 1e-12);
  EXPECT_LE(budget.radius, 6.0);
  EXPECT_LT(budget.tail_bound, 1e-12);
}

TEST(Truncation, LooseToleranceAcceptsRadiusOne) {
  const auto p = scalar_point(0.0, 1.0);
  EXPECT_EQ(truncation_radius(p.B(), p.u(), MultiIndex{0}, 0.5).radius, 1.0);
}

TEST(Truncation, ScalingBByFourHalvesRadius) {
  const CVector u = CVector::Zero(2);
  const double r1 = truncation_radius(SiegelMatrix::from_real(RMatrix::Identity(2, 2) * 0.05), u, 0, 1e-13).radius;
  const double r4 = truncation_radius(SiegelMatrix::from_real(RMatrix::Identity(2, 2) * 0.2), u, 0, 1e-13).radius;
  EXPECT_GT(r1 / r4, 1.6);
  EXPECT_LT(r1 / r4, 2.4);
}

TEST(Truncation, ErrorPaths) {
  const auto p = scalar_point(0.0, 1.0);
  try {
    truncation_radius(p.B(), p.u(), 0, 1e-15);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ToleranceTooTight);
  }
  const auto flat = scalar_point(0.0, 1e-6);
  try {
    truncation_radius(flat.B(), flat.u(), 0, 1e-12, 50);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ToleranceUnreachable);
  }
}

TEST(Truncation, BoundDominatesActualTail) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 6; ++trial) {
    const int g = 1 + trial % 2;
    const CMatrix B = random_siegel(g, rng);
    const CVector u = random_u(g, rng, 1.0);
    const int order = trial % 3 * 2;
    const double eps = 1e-6;
    const auto budget = truncation_radius(SiegelMatrix(B), u, order, eps);
    double tail = 0.0;
    oracle::for_box(g, 30, [&](const IVector& n) {
      const double r = n.cast<double>().norm();
      if (r > budget.radius) tail += std::pow(kTwoPi * r, order) * std::abs(oracle::summand(u, B, n));
    });
    EXPECT_LT(tail, budget.tail_bound) << "trial " << trial;
    EXPECT_LT(budget.tail_bound, eps);
  }
}

TEST(LatticeBall, ShellOrderIsDeterministic) {
  const auto ball = LatticeBall::get(2, 3);
  std::size_t brute = 0;
  oracle::for_box(2, 3, [&](const IVector& n) { brute += n.squaredNorm() <= 9 ? 1 : 0; });
  ASSERT_EQ(ball->size(), brute);
  for (std::size_t k = 1; k < ball->size(); ++k) {
    ASSERT_LE(ball->norm2(k - 1), ball->norm2(k));
    if (ball->norm2(k - 1) == ball->norm2(k)) {
      const IVector a = ball->vector(k - 1), b = ball->vector(k);
      EXPECT_TRUE(std::lexicographical_compare(a.data(), a.data() + 2, b.data(), b.data() + 2));
    }
  }
  EXPECT_EQ(ball->vector(0), IVector::Zero(2));
  EXPECT_EQ(LatticeBall::get(2, 3).get(), ball.get());
}

TEST(Theta, UnitScalarValue) {
  EXPECT_NEAR(theta(scalar_point(0.0, 1.0), 1e-14).real(), kTheta01, 1e-14);
}

TEST(Theta, VanishesAtOddHalfPeriod) {
  for (Complex b : {Complex(1.0, 0.0), Complex(0.7, 0.3), Complex(1.4, -0.6)}) {
    const Complex z = theta(scalar_point(0.5 * kI + 0.5 * b, b), 1e-14);
    EXPECT_LT(std::abs(z), 1e-13) << b;
  }
}

TEST(Theta, BlockDiagonalFactorizes) {
  CMatrix B = CMatrix::Zero(2, 2);
  B(0, 0) = Complex(0.9, 0.2);
  B(1, 1) = Complex(1.3, -0.4);
  CVector u(2);
  u << Complex(0.1, 0.3), Complex(-0.2, 0.05);
  const Complex joint = theta(ThetaPoint(u, SiegelMatrix(B)), 1e-14);
  const Complex prod = theta(scalar_point(u(0), B(0, 0)), 1e-14) * theta(scalar_point(u(1), B(1, 1)), 1e-14);
  EXPECT_LT(std::abs(joint - prod), 1e-13);
}

TEST(Theta, MatchesBoxSumOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 8; ++trial) {
    const int g = 1 + trial % 3;
    const CMatrix B = random_siegel(g, rng);
    const CVector u = random_u(g, rng);
    const ThetaPoint p(u, SiegelMatrix(B));
    const Complex ref = oracle::theta(u, B, 8);
    EXPECT_LT(std::abs(theta(p, 1e-13) - ref), 1e-12 * std::max(1.0, std::abs(ref))) << trial;
  }
}

TEST(ThetaDu, ZerothDerivativeIsTheta) {
  const auto p = scalar_point(Complex(0.2, 0.1), Complex(1.1, 0.2));
  EXPECT_EQ(theta_du(MultiIndex{0}, p, 1e-13), theta(p, 1e-13));
}

TEST(ThetaDu, UnitScalarFirstAndSecond) {
  const auto p = scalar_point(0.0, 1.0);
  EXPECT_LT(std::abs(theta_du(MultiIndex{1}, p, 1e-13)), 1e-13);
  EXPECT_NEAR(theta_du(MultiIndex{2}, p, 1e-13).real(), kTwoPi * kTwoPi * kSecondSum01, 1e-12);
}

TEST(ThetaDu, MixedPartialMatchesOracle) {
  std::mt19937_64 rng(3);
  const CMatrix B = random_siegel(2, rng);
  const CVector u = random_u(2, rng);
  const ThetaPoint p(u, SiegelMatrix(B));
  for (const auto& a : indices_up_to(2, 4)) {
    const Complex ref = std::pow(kTwoPi, a.order()) *
                        oracle::box_sum(u, B, 9, [&](const IVector& n) {
                          return Complex(std::pow(n(0), a[0]) * std::pow(n(1), a[1]), 0.0);
                        });
    EXPECT_LT(std::abs(theta_du(a, p, 1e-13) - ref), 1e-10 * std::max(1.0, std::abs(ref))) << a.str();
  }
}

TEST(ThetaDB, UnitScalarHeatEquation) {
  EXPECT_NEAR(theta_dB(0, 0, scalar_point(0.0, 1.0), 1e-13).real(), -kPi * kSecondSum01, 1e-13);
}

TEST(ThetaDB, BlockDiagonalProductRule) {
  CMatrix B = CMatrix::Zero(2, 2);
  B(0, 0) = 0.8;
  B(1, 1) = 1.2;
  CVector u(2);
  u << 0.15, -0.3;
  const ThetaPoint p(u, SiegelMatrix(B));
  const Complex d11 = theta_dB(0, 0, p, 1e-13);
  const auto p1 = scalar_point(u(0), B(0, 0));
  const auto p2 = scalar_point(u(1), B(1, 1));
  EXPECT_LT(std::abs(d11 - theta_dB(0, 0, p1, 1e-13) * theta(p2, 1e-13)), 1e-12);
  const Complex d12 = theta_dB(0, 1, p, 1e-13);
  const Complex expect = -1.0 / kTwoPi * theta_du(MultiIndex{1}, p1, 1e-13) * theta_du(MultiIndex{1}, p2, 1e-13);
  EXPECT_LT(std::abs(d12 - expect), 1e-12);
}

TEST(ThetaDB, AgreesWithCentralDifferences) {
  std::mt19937_64 rng(5);
  const double h = 1e-5;
  for (int trial = 0; trial < 4; ++trial) {
    const int g = 2 + trial % 2;
    const CMatrix B = random_siegel(g, rng);
    const CVector u = random_u(g, rng);
    const ThetaPoint p(u, SiegelMatrix(B));
    for (int i = 0; i < g; ++i)
      for (int j = i; j < g; ++j) {
        CMatrix E = CMatrix::Zero(g, g);
        E(i, j) = E(j, i) = h;
        const Complex fd = (theta(ThetaPoint(u, SiegelMatrix(CMatrix(B + E))), 1e-14) -
                            theta(ThetaPoint(u, SiegelMatrix(CMatrix(B - E))), 1e-14)) /
                           (2.0 * h);
        const Complex an = theta_dB(i, j, p, 1e-14);
        EXPECT_LT(std::abs(fd - an), 1e-6 * std::abs(an) + 1e-9) << trial << " " << i << j;
      }
  }
}

TEST(ThetaProperties, QuasiperiodicityAndParity) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> small(-2, 2);
  for (int trial = 0; trial < 10; ++trial) {
    const int g = 1 + trial % 3;
    const CMatrix B = random_siegel(g, rng);
    const CVector u = random_u(g, rng);
    IVector m(g), n(g);
    for (int i = 0; i < g; ++i) {
      m(i) = small(rng);
      n(i) = small(rng) / 2;
    }
    const SiegelMatrix S(B);
    const CVector nc = n.cast<double>().cast<Complex>();
    const CVector shifted = u + kI * m.cast<double>().cast<Complex>() + B * nc;
    const Complex factor = std::exp(kTwoPi * (0.5 * (nc.transpose() * B * nc)(0, 0) + (nc.transpose() * u)(0, 0)));
    const Complex lhs = theta(ThetaPoint(shifted, S), 1e-13);
    const Complex rhs = factor * theta(ThetaPoint(u, S), 1e-13);
    EXPECT_LT(std::abs(lhs - rhs), 1e-11 * std::max(1.0, std::abs(rhs))) << trial;
    EXPECT_LT(std::abs(theta(ThetaPoint(-u, S), 1e-13) - theta(ThetaPoint(u, S), 1e-13)), 2e-13) << trial;
  }
}

TEST(ThetaProperties, JacobiIdentity) {
  for (double b : {0.3, 1.0, 2.5}) {
    for (double x : {-0.4, 0.0, 0.7}) {
      const Complex u = x;
      const Complex lhs = theta(scalar_point(u / (kI * b), 1.0 / b), 1e-14);
      const Complex rhs = std::sqrt(b) * std::exp(-kPi / b * u * u) * theta(scalar_point(u, b), 1e-14);
      EXPECT_LT(std::abs(lhs - rhs), 1e-9 * std::abs(rhs)) << b << " " << x;
    }
  }
}

TEST(ThetaProperties, DoublingRadiusChangesLittle) {
  const auto p = scalar_point(Complex(0.3, 0.2), Complex(0.4, 0.1));
  const double eps = 1e-10;
  const ThetaSums base(p, 0, eps);
  const auto ball = LatticeBall::get(1, 2 * static_cast<int>(base.budget().radius));
  Complex wide{0.0, 0.0};
  for (std::size_t k = 0; k < ball->size(); ++k)
    wide += oracle::summand(p.u(), p.B().entries(), ball->vector(k));
  EXPECT_LT(std::abs(wide - base.theta()), eps);
}
