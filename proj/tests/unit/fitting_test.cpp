#include <gtest/gtest.h>

#include <random>

#include "../support/oracle.hpp"
#include "thetagauss/fitting.hpp"

using namespace thetagauss;

namespace {

constexpr double kVariance01 = 0.0795774715459477;
// Newton solution at mu = 0, sigma = 1 (converged to 1e-14 in moments).
constexpr double kStandardB = 0.15915490947336819;
// Ten-point sample: unbiased variance 24.4 / 9, mean 0.4.
const std::vector<int> kSample{1, 0, 1, -2, 1, 2, 3, -2, 1, -1};
constexpr double kSampleU = 0.0234818768;
constexpr double kSampleB = 0.0587046921;
// Var[X_(0, 2 pi)] (mpmath, 40 digits).
constexpr double kVarAt2Pi = 5.35057595351981617e-9;

MomentData scalar_target(double mu, double var) {
  return {RVector::Constant(1, mu), RMatrix::Constant(1, 1, var)};
}

CanonicalPoint random_point(int g, std::mt19937_64& rng, double lo = 0.3, double hi = 1.5) {
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  CanonicalPoint p{RVector(g), oracle::random_spd(g, lo, hi, rng)};
  for (int i = 0; i < g; ++i) p.u(i) = U(rng);
  return p;
}

std::vector<IVector> as_points(const std::vector<int>& xs) {
  std::vector<IVector> out;
  for (int x : xs) out.push_back(IVector::Constant(1, x));
  return out;
}

}  // namespace

TEST(ForwardMoments, UnitScalarAndParity) {
  const auto m = forward_moments({RVector::Zero(1), RMatrix::Identity(1, 1)});
  EXPECT_LT(std::abs(m.mu(0)), 1e-15);
  EXPECT_NEAR(m.sigma(0, 0), kVariance01, 1e-14);

  std::mt19937_64 rng(2);
  auto p = random_point(3, rng);
  p.u.setZero();
  EXPECT_LT(forward_moments(p).mu.cwiseAbs().maxCoeff(), 1e-14);

  CanonicalPoint diag{RVector::Constant(2, 0.1), RMatrix::Zero(2, 2)};
  diag.B.diagonal() << 0.7, 1.4;
  const auto md = forward_moments(diag);
  EXPECT_LT(std::abs(md.sigma(0, 1)), 1e-15);
}

TEST(ForwardMoments, AgreesWithBoxSums) {
  std::mt19937_64 rng(9);
  for (int g = 1; g <= 3; ++g) {
    const auto p = random_point(g, rng);
    const auto m = forward_moments(p);
    const CVector u = p.u.cast<Complex>();
    const CMatrix B = p.B.cast<Complex>();
    for (int i = 0; i < g; ++i) {
      for (int j = 0; j < g; ++j) {
        std::vector<int> a(g, 0);
        ++a[i];
        ++a[j];
        EXPECT_NEAR(m.sigma(i, j), oracle::central_moment(u, B, a, 9).real(), 1e-12);
      }
    }
    EXPECT_EQ(m.sigma, m.sigma.transpose());
  }
}

TEST(Objective, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(13);
  const double h = 1e-5;
  for (int g = 1; g <= 3; ++g) {
    const auto p = random_point(g, rng);
    const MomentData target{RVector::Constant(g, 0.2), RMatrix::Identity(g, g) * 0.3};
    const RVector grad = objective_gradient(p, target);
    const RVector x = fit_detail::pack(p);
    for (int k = 0; k < x.size(); ++k) {
      RVector xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      const double fd = (objective(fit_detail::unpack(xp, g), target) -
                         objective(fit_detail::unpack(xm, g), target)) / (2.0 * h);
      EXPECT_NEAR(grad(k), fd, 1e-6 * std::max(1.0, std::abs(fd))) << "g=" << g << " k=" << k;
    }
  }
}

TEST(Objective, HessianIsPositiveDefiniteAndMatchesFiniteDifferences) {
  std::mt19937_64 rng(14);
  for (int g = 1; g <= 3; ++g) {
    const auto p = random_point(g, rng);
    const RMatrix H = objective_hessian(p);
    EXPECT_EQ(H, H.transpose());
    EXPECT_EQ(Eigen::LLT<RMatrix>(H).info(), Eigen::Success);
    const RMatrix Hfd = finite_difference_hessian(p);
    EXPECT_LT((H - Hfd).cwiseAbs().maxCoeff(), 1e-6 * std::max(1.0, H.cwiseAbs().maxCoeff()));
  }
}

TEST(Fit, StandardScalar) {
  const auto r = fit(scalar_target(0.0, 1.0));
  ASSERT_TRUE(r.converged);
  EXPECT_LT(std::abs(r.params.u(0)), 1e-9);
  EXPECT_NEAR(r.params.B(0, 0), kStandardB, 1e-10);
  EXPECT_NEAR(r.params.B(0, 0), 0.1591549, 1e-6);
  EXPECT_LT(r.grad_norm, 1e-9);
}

TEST(Fit, StandardMultivariateIsDiagonal) {
  for (int g = 2; g <= 3; ++g) {
    const auto r = fit({RVector::Zero(g), RMatrix::Identity(g, g)});
    ASSERT_TRUE(r.converged);
    EXPECT_LT(r.params.u.cwiseAbs().maxCoeff(), 1e-9);
    for (int i = 0; i < g; ++i) {
      EXPECT_NEAR(r.params.B(i, i), kStandardB, 1e-8);
      for (int j = 0; j < g; ++j) {
        if (i != j) EXPECT_LT(std::abs(r.params.B(i, j)), 1e-8);
      }
    }
  }
}

TEST(Fit, RoundTripBothDirections) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 9; ++trial) {
    const int g = 1 + trial % 3;
    const auto p = random_point(g, rng);
    const auto target = forward_moments(p);
    const auto r = fit(target);
    ASSERT_TRUE(r.converged);
    EXPECT_LT((r.params.u - p.u).cwiseAbs().maxCoeff(), 1e-7) << trial;
    EXPECT_LT((r.params.B - p.B).cwiseAbs().maxCoeff(), 1e-7) << trial;
    const auto back = forward_moments(r.params);
    EXPECT_LT((back.mu - target.mu).cwiseAbs().maxCoeff(), 1e-7);
    EXPECT_LT((back.sigma - target.sigma).cwiseAbs().maxCoeff(), 1e-7);
  }
}

TEST(Fit, FiniteDifferenceHessianOptionConverges) {
  FitOptions opt;
  opt.finite_difference_hessian = true;
  const auto r = fit({RVector::Constant(2, 0.3), (RMatrix(2, 2) << 0.8, 0.2, 0.2, 0.5).finished()}, opt);
  const auto a = fit({RVector::Constant(2, 0.3), (RMatrix(2, 2) << 0.8, 0.2, 0.2, 0.5).finished()});
  EXPECT_TRUE(r.converged);
  EXPECT_LT((r.params.B - a.params.B).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(Fit, SmallVarianceTargetFarFromContinuousStart) {
  // Mean 0.3 forces Var >= 0.3 * 0.7 = 0.21; 0.25 sits near that boundary,
  // far from the continuous regime the start point assumes.
  const auto r = fit(scalar_target(0.3, 0.25));
  ASSERT_TRUE(r.converged);
  const auto m = forward_moments(r.params);
  EXPECT_NEAR(m.mu(0), 0.3, 1e-9);
  EXPECT_NEAR(m.sigma(0, 0), 0.25, 1e-9);
}

TEST(Fit, InfeasibleTargetDoesNotConverge) {
  FitOptions opt;
  opt.max_iterations = 40;
  try {
    fit(scalar_target(0.3, 0.05), opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoConvergence);
  }
}

TEST(Fit, ErrorPaths) {
  try {
    fit({RVector::Zero(2), (RMatrix(2, 2) << 1.0, 2.0, 2.0, 1.0).finished()});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPD);
  }
  FitOptions tight;
  tight.tol = 1e-12;
  EXPECT_THROW(fit(scalar_target(0.0, 1.0), tight), Error);
  FitOptions one;
  one.max_iterations = 1;
  try {
    fit(scalar_target(0.3, 0.05), one);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoConvergence);
    EXPECT_TRUE(e.is_numerical());
  }
}

TEST(FitFromSample, TenPointSample) {
  const auto m = sample_moments(as_points(kSample));
  EXPECT_NEAR(m.mu(0), 0.4, 1e-15);
  EXPECT_NEAR(std::sqrt(m.sigma(0, 0)), 1.6465, 5e-5);
  const auto r = fit_from_sample(as_points(kSample));
  EXPECT_NEAR(r.params.u(0), kSampleU, 1e-8);
  EXPECT_NEAR(r.params.B(0, 0), kSampleB, 1e-8);
  EXPECT_NEAR(r.params.u(0), 0.023, 5e-4);
  EXPECT_NEAR(r.params.B(0, 0), 0.0587, 5e-4);

  const auto mle = fit_from_sample(as_points(kSample), {}, CovarianceEstimator::MaximumLikelihood);
  EXPECT_NEAR(forward_moments(mle.params).sigma(0, 0), 2.44, 1e-9);
}

TEST(FitFromSample, DegenerateSamples) {
  for (const auto& data : {as_points({2, 2, 2, 2}), as_points({5})}) {
    try {
      fit_from_sample(data);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::DegenerateSample);
    }
  }
  std::vector<IVector> collinear;
  for (int k = 0; k < 5; ++k) collinear.push_back((IVector(2) << k, 2 * k).finished());
  try {
    fit_from_sample(collinear);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateSample);
  }
}

TEST(JacobiVariance, ContinuousKernelIsNotStandard) {
  auto var = [](double b) { return forward_moments({RVector::Zero(1), RMatrix::Constant(1, 1, b)}).sigma(0, 0); };
  EXPECT_NEAR(var(kTwoPi), kVarAt2Pi, 1e-20);
  // Var(1/B) = B / 2pi - B^2 Var(B) from the second log-derivative of the Jacobi identity.
  for (double b : {0.5, 1.0, 1.7, kTwoPi}) {
    EXPECT_NEAR(var(1.0 / b), b / kTwoPi - b * b * var(b), 1e-12) << b;
  }
  EXPECT_GT(1.0 - var(1.0 / kTwoPi), 1e-8);
}
