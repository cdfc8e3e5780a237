// Walk-through of the library on small examples; run from anywhere.

#include <cstdio>

#include "thetagauss/thetagauss.hpp"

using namespace thetagauss;

namespace {

void heading(const char* title) { std::printf("\n== %s\n", title); }

}  // namespace

int main() {
  heading("discrete Gaussian at u = 0, B = 1");
  const DiscreteGaussian unit(CVector::Zero(1), CMatrix::Identity(1, 1));
  std::printf("theta        = %.12f\n", unit.theta_value().real());
  for (int n : {0, 1, 2}) std::printf("p(%d)         = %.12f\n", n, pmf(unit, IVector::Constant(1, n)).real());
  std::printf("variance     = %.12f (exactly 1/4pi)\n", mean_cov(unit).cov(0, 0).real());
  std::printf("entropy      = %.12f\n", entropy(unit).value.real());

  heading("fitting: the integer-valued analogue of N(0, 1)");
  const auto standard = fit({RVector::Zero(1), RMatrix::Identity(1, 1)});
  std::printf("B            = %.12f after %d Newton steps (1/2pi = %.12f)\n", standard.params.B(0, 0),
              standard.iterations, 1.0 / kTwoPi);

  heading("fitting a ten-point sample");
  std::vector<IVector> data;
  for (int x : {1, 0, 1, -2, 1, 2, 3, -2, 1, -1}) data.push_back(IVector::Constant(1, x));
  const auto sample_fit = fit_from_sample(data);
  std::printf("u, B         = %.6f, %.6f\n", sample_fit.params.u(0), sample_fit.params.B(0, 0));

  heading("sampling 10^5 draws at (u, B) = (0.3, 0.5)");
  const CanonicalPoint p{RVector::Constant(1, 0.3), RMatrix::Constant(1, 1, 0.5)};
  SamplerConfig cfg;
  cfg.seed = 7;
  const auto draws = draw(p, 100000, cfg);
  const auto est = sample_moments(draws, CovarianceEstimator::MaximumLikelihood);
  const auto truth = forward_moments(p);
  std::printf("sample mean  = %.4f (exact %.4f)\n", est.mu(0), truth.mu(0));
  std::printf("sample var   = %.4f (exact %.4f)\n", est.sigma(0, 0), truth.sigma(0, 0));
  const auto gof = chi_square(draws, p);
  std::printf("chi-square   = %.2f on %d dof (99.9%% quantile %.2f)\n", gof.statistic, gof.dof,
              chi_square_quantile(gof.dof, 0.999));

  heading("complex parameters: a genus 3 period matrix");
  CMatrix B(3, 3);
  B << Complex(1, -1), Complex(-0.5, 0.5), Complex(0.5, 0.5),
       Complex(-0.5, 0.5), Complex(1.25, -0.25), Complex(-0.75, 0.25),
       Complex(0.5, 0.5), Complex(-0.75, 0.25), Complex(0.75, 0.25);
  const auto fermat = mean_cov(DiscreteGaussian(CVector::Zero(3), B));
  for (int i = 0; i < 3; ++i) {
    std::printf("  ");
    for (int j = 0; j < 3; ++j) std::printf("%10.6f%+10.6fi ", fermat.cov(i, j).real(), fermat.cov(i, j).imag());
    std::printf("\n");
  }

  heading("moments of the elliptic curve B = 1 satisfy a cubic");
  const auto cc = cubic_coefficients(1.0);
  std::printf("kappa3^2 = -4 kappa2^3 + a kappa2^2 + b kappa2 + c with a = %.6f, b = %.6f, c = %.6f\n", cc.a.real(),
              cc.b.real(), cc.c.real());
  const auto r = verify_cubic(0.3, 1.0);
  std::printf("residuals at u = 0.3: %.1e %.1e %.1e\n", r.r_cubic, r.r_quartic, r.r_det);

  heading("Kummer quartic from 60 points of the degree 2 map, g = 2");
  CMatrix K(2, 2);
  K << 1.0, 0.3, 0.3, 1.0;
  const SiegelMatrix S(K);
  const auto quartic = kummer_quartic_fit(S, sample_statistical_map(S, 2, 60, 1));
  std::printf("smallest singular values: %.1e, %.1e\n", quartic.residual, quartic.second_smallest);
  return 0;
}
