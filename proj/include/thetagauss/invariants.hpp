#pragma once

// Randomized property checks over every module. Each check reports how many
// instances it ran, how many violated the tolerance, and the worst observed
// error as a multiple of its tolerance (< 1 means pass).

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "sampler.hpp"

namespace thetagauss {

struct PropertyResult {
  std::string module;
  std::string name;
  int instances = 0;
  int failures = 0;
  double worst_ratio = 0.0;
  std::string first_error;  ///< message of the first instance that threw, if any

  bool passed() const { return instances > 0 && failures == 0; }
};

namespace invariants_detail {

class Recorder {
 public:
  Recorder(std::string module, std::string name) {
    r_.module = std::move(module);
    r_.name = std::move(name);
  }

  /// One instance with error err against tolerance tol; NaN counts as a failure.
  void check(double err, double tol) {
    ++r_.instances;
    const double ratio = err / tol;
    if (!(ratio < 1.0)) ++r_.failures;
    r_.worst_ratio = std::isnan(ratio) ? INFINITY : std::max(r_.worst_ratio, ratio);
  }
  void check(bool ok) { check(ok ? 0.0 : 2.0, 1.0); }

  /// Runs f, recording any thrown Error as a failed instance.
  void guarded(const std::function<void()>& f) {
    try {
      f();
    } catch (const std::exception& e) {
      if (r_.first_error.empty()) r_.first_error = e.what();
      check(false);
    }
  }

  PropertyResult result() const { return r_; }

 private:
  PropertyResult r_;
};

inline RMatrix random_spd(int g, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_real_distribution<double> E(lo, hi);
  RMatrix A(g, g);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) A(i, j) = U(rng);
  const RMatrix Q = Eigen::HouseholderQR<RMatrix>(A).householderQ();
  RVector ev(g);
  for (int i = 0; i < g; ++i) ev(i) = E(rng);
  RMatrix S = Q * ev.asDiagonal() * Q.transpose();
  for (int i = 0; i < g; ++i)
    for (int j = i + 1; j < g; ++j) S(j, i) = S(i, j) = 0.5 * (S(i, j) + S(j, i));
  return S;
}

inline CMatrix random_siegel(int g, std::mt19937_64& rng, double im_scale) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  CMatrix B = random_spd(g, 0.6, 1.8, rng).cast<Complex>();
  for (int i = 0; i < g; ++i)
    for (int j = i; j < g; ++j) {
      B(i, j) += Complex(0.0, im_scale * U(rng));
      B(j, i) = B(i, j);
    }
  return B;
}

inline CVector random_u(int g, std::mt19937_64& rng, double re_scale, double im_scale) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  CVector u(g);
  for (int i = 0; i < g; ++i) u(i) = Complex(re_scale * U(rng), im_scale * U(rng));
  return u;
}

inline CVector as_complex(const IVector& n) { return n.cast<double>().cast<Complex>(); }

/// Box sums over [-R, R]^g, independent of the engine's shell enumeration.
inline void for_box(int g, int R, const std::function<void(const IVector&)>& f) {
  IVector n = IVector::Constant(g, -R);
  while (true) {
    f(n);
    int k = g - 1;
    while (k >= 0 && n(k) == R) n(k--) = -R;
    if (k < 0) break;
    ++n(k);
  }
}

inline Complex box_summand(const CVector& u, const CMatrix& B, const IVector& n) {
  const CVector c = as_complex(n);
  return std::exp(kTwoPi * (-0.5 * (c.transpose() * B * c)(0, 0) + (c.transpose() * u)(0, 0)));
}

/// Raw moments for every |a| <= order from one box pass.
inline std::map<MultiIndex, Complex> box_moments(const CVector& u, const CMatrix& B, int order, int R) {
  const int g = static_cast<int>(u.size());
  const auto idx = indices_up_to(g, order);
  std::vector<Complex> acc(idx.size(), 0.0);
  for_box(g, R, [&](const IVector& n) {
    const Complex w = box_summand(u, B, n);
    const CVector c = as_complex(n);
    for (std::size_t k = 0; k < idx.size(); ++k) acc[k] += w * power(c, idx[k]);
  });
  std::map<MultiIndex, Complex> out;
  for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] = acc[k] / acc[0];
  return out;
}

/// Cumulants from raw moments: kappa_a = mu_a - sum C(a - e_j, b - e_j) kappa_b mu_{a-b}
/// over e_j <= b < a with b_j >= 1, j the first nonzero slot of a.
inline std::map<MultiIndex, Complex> raw_to_cumulants(const std::map<MultiIndex, Complex>& mu) {
  std::map<MultiIndex, Complex> kappa;
  for (const auto& [a, m] : mu) {
    if (a.order() == 0) continue;
    int j = 0;
    while (a[j] == 0) ++j;
    const MultiIndex ej = MultiIndex::unit(a.dim(), j);
    Complex v = m;
    for (const auto& b : indices_below(a)) {
      if (b == a || b[j] == 0) continue;
      v -= multi_binomial(a - ej, b - ej) * kappa.at(b) * mu.at(a - b);
    }
    kappa[a] = v;
  }
  return kappa;
}

}  // namespace invariants_detail

inline std::vector<PropertyResult> theta_properties(int instances, std::uint64_t seed) {
  using namespace invariants_detail;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> small(-2, 2);
  const double eps = 1e-13;
  Recorder quasi("theta-engine", "quasiperiodicity"), parity("theta-engine", "parity"),
      factor("theta-engine", "block factorization"), heat("theta-engine", "heat equation vs finite differences"),
      jacobi("theta-engine", "Jacobi identity"), doubling("theta-engine", "doubling radius changes theta by < eps");

  for (int k = 0; k < instances; ++k) {
    const int g = 1 + k % 3;
    const CMatrix B = random_siegel(g, rng, 0.5);
    const CVector u = random_u(g, rng, 0.5, 0.5);
    const SiegelMatrix S(B);
    const ThetaPoint p(u, S);

    quasi.guarded([&] {
      IVector m(g), n(g);
      for (int i = 0; i < g; ++i) {
        m(i) = small(rng);
        n(i) = small(rng) / 2;
      }
      const CVector nc = as_complex(n);
      const ThetaPoint moved(CVector(u + kI * as_complex(m) + B * nc), S);
      const Complex f = std::exp(kTwoPi * (0.5 * (nc.transpose() * B * nc)(0, 0) + (nc.transpose() * u)(0, 0)));
      const double e0 = scaled_tolerance(p, eps), e1 = scaled_tolerance(moved, eps);
      const Complex lhs = theta(moved, e1), rhs = f * theta(p, e0);
      quasi.check(std::abs(lhs - rhs), 10.0 * (e1 + std::abs(f) * e0));
    });

    parity.guarded([&] {
      const double e = scaled_tolerance(p, eps);
      parity.check(std::abs(theta(ThetaPoint(CVector(-u), S), e) - theta(p, e)), 2.0 * e);
    });

    factor.guarded([&] {
      const int g1 = 1 + k % 2, g2 = 1 + (k / 2) % 2;
      CMatrix Bd = CMatrix::Zero(g1 + g2, g1 + g2);
      Bd.topLeftCorner(g1, g1) = random_siegel(g1, rng, 0.5);
      Bd.bottomRightCorner(g2, g2) = random_siegel(g2, rng, 0.5);
      const CVector ud = random_u(g1 + g2, rng, 0.5, 0.5);
      const ThetaPoint whole(ud, SiegelMatrix(Bd));
      const ThetaPoint p1(CVector(ud.head(g1)), SiegelMatrix(CMatrix(Bd.topLeftCorner(g1, g1))));
      const ThetaPoint p2(CVector(ud.tail(g2)), SiegelMatrix(CMatrix(Bd.bottomRightCorner(g2, g2))));
      const double e = scaled_tolerance(whole, eps), e1 = scaled_tolerance(p1, eps), e2 = scaled_tolerance(p2, eps);
      const Complex t1 = theta(p1, e1), t2 = theta(p2, e2);
      factor.check(std::abs(theta(whole, e) - t1 * t2), e + std::abs(t1) * e2 + std::abs(t2) * e1 + e1 * e2);
    });

    heat.guarded([&] {
      const double h = 1e-5;
      const ThetaSums sums(p, 2, 1e-14);
      double worst = 0.0;
      for (int i = 0; i < g; ++i)
        for (int j = i; j < g; ++j) {
          CMatrix E = CMatrix::Zero(g, g);
          E(i, j) = E(j, i) = h;
          const Complex fd = (theta(ThetaPoint(u, SiegelMatrix(CMatrix(B + E))), 1e-14) -
                              theta(ThetaPoint(u, SiegelMatrix(CMatrix(B - E))), 1e-14)) /
                             (2.0 * h);
          const Complex an = theta_dB(i, j, sums);
          worst = std::max(worst, std::abs(fd - an) / (std::abs(an) + 1e-3));
        }
      heat.check(worst, 1e-6);
    });

    jacobi.guarded([&] {
      std::uniform_real_distribution<double> Bs(0.3, 3.0), Us(-0.7, 0.7);
      const double b = Bs(rng);
      const Complex x = Us(rng);
      const ThetaPoint lhs_p(CVector::Constant(1, x / (kI * b)), SiegelMatrix(CMatrix::Constant(1, 1, 1.0 / b)));
      const ThetaPoint rhs_p(CVector::Constant(1, x), SiegelMatrix(CMatrix::Constant(1, 1, b)));
      const Complex rhs = std::sqrt(b) * std::exp(-kPi / b * x * x) * theta(rhs_p, 1e-14);
      jacobi.check(std::abs(theta(lhs_p, 1e-14) - rhs), 1e-9 * std::abs(rhs));
    });

    doubling.guarded([&] {
      const double e = scaled_tolerance(p, 1e-10);
      const ThetaSums base(p, 0, e);
      const auto ball = LatticeBall::get(g, 2 * static_cast<int>(base.budget().radius));
      Complex wide = 0.0;
      for (std::size_t q = 0; q < ball->size(); ++q) wide += box_summand(u, B, ball->vector(q));
      doubling.check(std::abs(wide - base.theta()), e);
    });
  }
  return {quasi.result(), parity.result(), factor.result(), heat.result(), jacobi.result(), doubling.result()};
}

inline std::vector<PropertyResult> distribution_properties(int instances, std::uint64_t seed) {
  using namespace invariants_detail;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> shift(-3, 3);
  Recorder norm("distribution", "normalization"), oracle("distribution", "moment oracle |a| <= 4"),
      cov("distribution", "kappa_2 = central second moments = covariance"),
      ent("distribution", "entropy oracle"), maxent("distribution", "entropy maximality under perturbation"),
      marg("distribution", "marginal oracle"), trans("distribution", "translation law"),
      unimod("distribution", "unimodular law"), equiv("distribution", "N_g equivalence and canonicalization"),
      parity("distribution", "odd cumulants vanish at u = 0"), real("distribution", "real case positivity");

  const int R = 12;
  for (int k = 0; k < instances; ++k) {
    const int g = 1 + k % 2;
    const CMatrix Bc = random_siegel(1 + k % 3, rng, 0.4);
    const CVector uc = random_u(1 + k % 3, rng, 0.4, 0.4);
    const CMatrix B = random_spd(g, 0.5, 1.5, rng).cast<Complex>();
    const CVector u = random_u(g, rng, 0.6, 0.0);

    norm.guarded([&] {
      const DiscreteGaussian d(uc, Bc);
      const auto ball = LatticeBall::get(d.dim(), static_cast<int>(d.budget().radius));
      Complex total = 0.0;
      for (std::size_t q = 0; q < ball->size(); ++q) total += pmf(d, ball->vector(q));
      norm.check(std::abs(total - 1.0), 10.0 * d.working_eps() / std::min(1.0, std::abs(d.theta_value())) + 1e-13);
    });

    const DiscreteGaussian d(u, B);
    oracle.guarded([&] {
      const MomentTable t(d, 4);
      const auto raw = box_moments(u, B, 4, R);
      const auto kappa = raw_to_cumulants(raw);
      const CVector mu = t.mean();
      double worst = 0.0;
      for (const auto& a : indices_up_to(g, 4)) {
        Complex central = 0.0;
        for (const auto& b : indices_below(a)) {
          const MultiIndex rest = a - b;
          central += multi_binomial(a, b) * raw.at(b) * power(CVector(-mu), rest);
        }
        worst = std::max({worst, std::abs(t.moment(a) - raw.at(a)), std::abs(t.central(a) - central)});
        if (a.order() >= 1) worst = std::max(worst, std::abs(t.cumulant(a) - kappa.at(a)));
      }
      oracle.check(worst, 1e-8);
    });

    cov.guarded([&] {
      const MomentTable t(d, 2);
      const auto mc = mean_cov(d);
      double worst = 0.0;
      for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
          const MultiIndex a = MultiIndex::unit(g, i) + MultiIndex::unit(g, j);
          worst = std::max({worst, std::abs(t.cumulant(a) - t.central(a)), std::abs(t.central(a) - mc.cov(i, j))});
        }
      cov.check(worst, 1e-12);
    });

    ent.guarded([&] {
      Complex Z = 0.0;
      for_box(g, R, [&](const IVector& n) { Z += box_summand(u, B, n); });
      double h = 0.0;
      for_box(g, R, [&](const IVector& n) {
        const double q = box_summand(u, B, n).real() / Z.real();
        if (q > 0.0) h -= q * std::log(q);
      });
      ent.check(std::abs(entropy(d).value - h), 1e-8);
    });

    if (g == 1) {
      maxent.guarded([&] {
        // delta on {c-1, c, c+1, c+2} with zero mass, mean and variance change.
        const double delta[4] = {-1.0, 3.0, -3.0, 1.0};
        const int c = static_cast<int>(std::floor(mean_cov(d).mean(0).real()));
        double qmin = INFINITY;
        for (int s = 0; s < 4; ++s) qmin = std::min(qmin, pmf(d, IVector::Constant(1, c - 1 + s)).real());
        const double base = entropy(d).value.real();
        for (double t : {0.1 * qmin / 3.0, -0.1 * qmin / 3.0}) {
          double h = 0.0;
          const auto ball = LatticeBall::get(1, 40);
          for (std::size_t q = 0; q < ball->size(); ++q) {
            const int n = ball->vector(q)(0);
            double p = pmf(d, ball->vector(q)).real();
            if (n >= c - 1 && n <= c + 2) p += t * delta[n - c + 1];
            if (p > 0.0) h -= p * std::log(p);
          }
          maxent.check(h < base);
        }
      });
    } else {
      marg.guarded([&] {
        for (int n1 = -2; n1 <= 2; ++n1) {
          Complex direct = 0.0;
          Complex Z = 0.0;
          for_box(2, R, [&](const IVector& n) {
            const Complex w = box_summand(u, B, n);
            Z += w;
            if (n(0) == n1) direct += w;
          });
          marg.check(std::abs(marginal_pmf(d, {1}, IVector::Constant(1, n1)) - direct / Z), 1e-9);
        }
      });

      unimod.guarded([&] {
        IMatrix alpha(2, 2);
        alpha << 1, shift(rng), 0, 1;
        if (k % 4 == 1) alpha.transposeInPlace();
        const auto moved = unimodular(d, alpha);
        double worst = 0.0;
        for (const IVector& n : {IVector(IVector::Zero(2)), IVector(IVector::Ones(2)),
                                 IVector((IVector(2) << -1, 2).finished())}) {
          const IVector an = alpha * n;
          worst = std::max(worst, std::abs(pmf(moved, an) - pmf(d, n)));
        }
        unimod.check(worst, 1e-12);
      });
    }

    trans.guarded([&] {
      IVector m(g), n(g);
      for (int i = 0; i < g; ++i) {
        m(i) = shift(rng);
        n(i) = shift(rng);
      }
      const auto moved = translate(d, m, n);
      const MomentTable before(d, 3), after(moved, 3);
      const CVector nc = as_complex(n);
      double worst = 0.0;
      for (const auto& a : indices_up_to(g, 3)) {
        // E[(X + n)^a] = sum_b C(a, b) n^{a-b} E[X^b]
        Complex expect = 0.0;
        for (const auto& b : indices_below(a)) expect += multi_binomial(a, b) * power(nc, a - b) * before.moment(b);
        worst = std::max(worst, std::abs(after.moment(a) - expect) / std::max(1.0, std::abs(expect)));
        if (a.order() >= 2) worst = std::max(worst, std::abs(after.central(a) - before.central(a)));
      }
      trans.check(worst, 1e-9);
    });

    equiv.guarded([&] {
      const int gc = static_cast<int>(uc.size());
      NgWitness w{IVector(gc), IMatrix(gc, gc)};
      for (int i = 0; i < gc; ++i) {
        w.a(i) = shift(rng);
        for (int j = i; j < gc; ++j) w.beta(i, j) = w.beta(j, i) = shift(rng);
      }
      const DiscreteGaussian base(uc, Bc);
      const DiscreteGaussian moved(apply_ng_u(uc, w), apply_ng_B(Bc, w));
      const auto canon = canonicalize(moved);
      bool ok = same_distribution(base, moved) && same_distribution(base, canon.dist);
      double worst = 0.0;
      for (const IVector& n : {IVector(IVector::Zero(gc)), IVector(IVector::Ones(gc)), IVector(-IVector::Ones(gc))}) {
        const double scale = std::max(1.0, std::abs(pmf(base, n)));
        worst = std::max({worst, std::abs(pmf(moved, n) - pmf(base, n)) / scale,
                          std::abs(pmf(canon.dist, n) - pmf(base, n)) / scale});
      }
      equiv.check(ok ? worst : INFINITY, 1e-10);
    });

    parity.guarded([&] {
      const MomentTable t(DiscreteGaussian(CVector::Zero(g), B), 5);
      double worst = 0.0;
      for (int order : {1, 3, 5})
        for (const auto& a : indices_of_degree(g, order)) worst = std::max(worst, std::abs(t.cumulant(a)));
      parity.check(worst, 1e-11);
    });

    real.guarded([&] {
      bool ok = true;
      for_box(g, 3, [&](const IVector& n) {
        const Complex p = pmf(d, n);
        ok = ok && p.real() > 0.0 && p.imag() == 0.0;
      });
      const RMatrix c = mean_cov(d).cov.real();
      ok = ok && Eigen::LLT<RMatrix>(c).info() == Eigen::Success;
      real.check(ok);
    });
  }
  return {norm.result(), oracle.result(), cov.result(), ent.result(), maxent.result(), marg.result(),
          trans.result(), unimod.result(), equiv.result(), parity.result(), real.result()};
}

/// fit(forward_moments(p)) = p and forward_moments(fit(m)) = m on random real points, g in {1, 2, 3}.
inline PropertyResult bijection_round_trip(int instances, std::uint64_t seed, double tol = 1e-7) {
  using namespace invariants_detail;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  Recorder rec("fitting", "forward_moments and fit are mutually inverse");
  for (int k = 0; k < instances; ++k) {
    const int g = 1 + k % 3;
    rec.guarded([&] {
      CanonicalPoint p{RVector(g), random_spd(g, 0.3, 1.5, rng)};
      for (int i = 0; i < g; ++i) p.u(i) = U(rng);
      const auto target = forward_moments(p);
      const auto r = fit(target);
      const auto back = forward_moments(r.params);
      const double err = std::max({(r.params.u - p.u).cwiseAbs().maxCoeff(), (r.params.B - p.B).cwiseAbs().maxCoeff(),
                                   (back.mu - target.mu).cwiseAbs().maxCoeff(),
                                   (back.sigma - target.sigma).cwiseAbs().maxCoeff()});
      rec.check(r.converged ? err : INFINITY, tol);
    });
  }
  return rec.result();
}

inline std::vector<PropertyResult> fitting_properties(int instances, std::uint64_t seed) {
  using namespace invariants_detail;
  Recorder standard("fitting", "standard fit B = 0.1591549");
  standard.guarded([&] {
    const auto r = fit({RVector::Zero(1), RMatrix::Identity(1, 1)});
    standard.check(std::max(std::abs(r.params.B(0, 0) - 0.1591549) / 1e-6, std::abs(r.params.u(0)) / 1e-9), 1.0);
  });
  Recorder hessian("fitting", "analytic Hessian matches finite differences");
  std::mt19937_64 rng(seed + 1);
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  for (int k = 0; k < std::max(1, instances / 10); ++k) {
    hessian.guarded([&] {
      const int g = 1 + k % 2;
      CanonicalPoint p{RVector(g), random_spd(g, 0.4, 1.2, rng)};
      for (int i = 0; i < g; ++i) p.u(i) = U(rng);
      const RMatrix H = objective_hessian(p);
      hessian.check((H - finite_difference_hessian(p)).cwiseAbs().maxCoeff() / H.cwiseAbs().maxCoeff(), 1e-5);
    });
  }
  return {standard.result(), hessian.result(), bijection_round_trip(std::max(3, instances / 5), seed)};
}

inline std::vector<PropertyResult> sampler_properties(std::uint64_t seed) {
  using namespace invariants_detail;
  const CanonicalPoint p{RVector::Zero(1), RMatrix::Identity(1, 1)};
  SamplerConfig cfg;
  cfg.seed = seed;
  Recorder gof("sampler", "chi-square at the 99.9% level"), det("sampler", "reseeded draws are identical");
  gof.guarded([&] {
    const auto r = chi_square(draw(p, 20000, cfg), p);
    gof.check(r.statistic, chi_square_quantile(r.dof, 0.999));
  });
  det.guarded([&] { det.check(draw(p, 1000, cfg) == draw(p, 1000, cfg)); });
  return {gof.result(), det.result()};
}

inline std::vector<PropertyResult> geometry_properties(int instances, std::uint64_t seed) {
  using namespace invariants_detail;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Recorder cubic("geometry", "cubic, quadric and det identities"), proj("geometry", "statistical map parity and periodicity"),
      kummer("geometry", "Kummer quartic singular values");
  for (int k = 0; k < instances; ++k) {
    cubic.guarded([&] {
      Complex b, u;
      do {
        b = Complex(0.8 + 0.7 * U(rng), -0.5 + U(rng));
        const double s = U(rng), t = U(rng);
        if (std::hypot(s - 0.5, t - 0.5) < 0.2) continue;
        u = kI * s + b * t;
        break;
      } while (true);
      cubic.check(verify_cubic(u, b).max(), 1e-8);
    });
  }
  CMatrix B2(2, 2);
  B2 << 1.0, 0.3, 0.3, 1.0;
  const SiegelMatrix kB(B2);
  for (int k = 0; k < std::max(1, instances / 5); ++k) {
    proj.guarded([&] {
      RVector s(2), t(2);
      s << 0.1 + 0.8 * U(rng), 0.1 + 0.8 * U(rng);
      t << 0.1 + 0.8 * U(rng), 0.1 + 0.8 * U(rng);
      const CVector u = torus_point(kB, s, t);
      IVector m(2), n(2);
      m << 1, -1;
      n << (k % 3) - 1, 1;
      const CVector moved = u + kI * as_complex(m) + B2 * as_complex(n);
      const auto p = statistical_map(2, ThetaPoint(u, kB));
      proj.check(std::max(p.distance(statistical_map(2, ThetaPoint(CVector(-u), kB))),
                          p.distance(statistical_map(2, ThetaPoint(moved, kB)))),
                 1e-8);
    });
  }
  kummer.guarded([&] {
    const auto fit = kummer_quartic_fit(kB, sample_statistical_map(kB, 2, 60, seed));
    kummer.check(std::max(fit.residual / 1e-8, 1e-4 / fit.second_smallest), 1.0);
  });
  return {cubic.result(), proj.result(), kummer.result()};
}

/// All module suites; `instances` applies to the randomized theta and distribution checks.
inline std::vector<PropertyResult> run_invariant_suite(int instances = 50, std::uint64_t seed = 1) {
  std::vector<PropertyResult> out;
  auto append = [&](std::vector<PropertyResult> v) { out.insert(out.end(), v.begin(), v.end()); };
  append(theta_properties(instances, seed));
  append(distribution_properties(instances, seed + 1));
  append(fitting_properties(instances, seed + 2));
  append(sampler_properties(seed + 3));
  append(geometry_properties(instances, seed + 4));
  return out;
}

}  // namespace thetagauss
