#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fraclab/error.hpp"
#include "fraclab/fields.hpp"
#include "fraclab/operators.hpp"
#include "fraclab/symbols.hpp"
#include "fraclab/varlp.hpp"

namespace {

using namespace fraclab;

constexpr double kPi = 3.14159265358979323846;

Field gaussian(const Grid& g) { return test_field(TestFieldSpec{}, g); }

Field band_limited(const Grid& g, std::uint64_t seed, double cutoff = 4.0) {
  TestFieldSpec s;
  s.kind = TestFieldSpec::Kind::band_limited;
  s.seed = seed;
  s.cutoff = cutoff;
  return test_field(s, g);
}

Field poisson_field(const Grid& g, double t) {
  TestFieldSpec s;
  s.kind = TestFieldSpec::Kind::poisson_kernel;
  s.t = t;
  return test_field(s, g);
}

double max_coefficient(const SpectralField& F) {
  double m = 0.0;
  for (const auto& c : F.coefficients) m = std::max(m, std::abs(c));
  return m;
}

TEST(OperatorSpecTest, Validation) {
  OperatorSpec s;
  EXPECT_NO_THROW(s.validate());
  s.ell = 3;
  EXPECT_THROW(s.validate(), DomainError);
  s.ell = 2;
  s.alpha = 2.0;
  EXPECT_THROW(s.validate(), DomainError);
  s.alpha = 0.5;
  s.eps = 0.0;
  EXPECT_THROW(s.validate(), DomainError);
}

TEST(Poisson, Semigroup) {
  const Grid g = make_grid(2, 64, 6.0);
  const Field f = band_limited(g, 3, 8.0);
  const Field a = poisson_apply(poisson_apply(f, 0.2), 0.35);
  EXPECT_LE(relative_l2_error(a, poisson_apply(f, 0.55)), 1e-10);
  EXPECT_THROW(poisson_apply(f, 0.0), DomainError);
}

TEST(Poisson, KernelSemigroup) {
  const Grid g = make_grid(1, 1024, 8.0);
  const Field a = poisson_apply(poisson_field(g, 0.3), 0.5);
  EXPECT_LE(max_abs(a - poisson_field(g, 0.8)), 1e-6);
}

TEST(Poisson, ConvolutionPathMatchesSpectral) {
  const Grid g1 = make_grid(1, 512, 8.0);
  const Field f1 = gaussian(g1);
  EXPECT_LE(relative_l2_error(poisson_apply(f1, 0.5, PoissonPath::convolution), poisson_apply(f1, 0.5)), 1e-12);
  const Grid g2 = make_grid(2, 64, 8.0);
  const Field f2 = gaussian(g2);
  EXPECT_LE(relative_l2_error(poisson_apply(f2, 1.0, PoissonPath::convolution), poisson_apply(f2, 1.0)), 1e-4);
}

TEST(Poisson, LuxemburgNormBoundedInT) {
  const Grid g = make_grid(1, 1024, 20.0);
  std::vector<double> s(g.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double x = g.abs_coord(i);
    s[i] = 2.0 + 1.0 / (1.0 + x * x);
  }
  const ExponentField p = make_exponent(g, s, 2.0);
  TestFieldSpec bump;
  bump.kind = TestFieldSpec::Kind::bump;
  bump.radius = 2.0;
  const Field f = test_field(bump, g);
  const double base = luxemburg_norm(f, p);
  double worst = 0.0;
  for (double t = 1e-3; t <= 1e3; t *= 10.0) worst = std::max(worst, luxemburg_norm(poisson_apply(f, t), p) / base);
  EXPECT_LE(worst, 1.5);
}

TEST(FiniteDifference, Examples) {
  const Grid g = make_grid(1, 256, 8.0);
  const double h[1] = {0.1};
  EXPECT_LE(max_abs(finite_difference(Field(g, 3.0), h, 2)), 1e-13);

  // Window equal to x^2 to within 1e-12 in curvature on |x| < 0.8; the step is two grid spacings.
  const Field sq = sample(g, [](std::span<const double> x) {
    return x[0] * x[0] * std::exp(-std::pow(x[0] / 5.0, 16));
  });
  const double h2[1] = {2.0 * g.h()};
  const Field d2 = finite_difference(sq, h2, 2);
  for (int i = 0; i < g.points; ++i)
    if (std::abs(g.coord(i)) < 0.8) EXPECT_NEAR(d2.values[i], 2.0 * h2[0] * h2[0], 1e-9);

  const Grid gp = make_grid(1, 64, kPi);
  const Field s = sample(gp, [](std::span<const double> x) { return std::sin(x[0]); });
  const Field d1 = finite_difference(s, h, 1);
  for (int i = 0; i < gp.points; ++i) EXPECT_NEAR(d1.values[i], std::sin(gp.coord(i)) - std::sin(gp.coord(i) - 0.1), 1e-13);
  EXPECT_THROW(finite_difference(s, h, 0), DomainError);
}

TEST(FracPoissonDifference, AlphaOneHasTwoTerms) {
  const Grid g = make_grid(1, 256, 8.0);
  const Field f = band_limited(g, 2);
  SeriesInfo info;
  const Field a = frac_poisson_difference(f, 0.2, 1.0, 1e-10, DifferencePath::series, &info);
  EXPECT_EQ(info.terms, 1);
  EXPECT_LE(max_abs(a - (f - poisson_apply(f, 0.2))), 1e-14);
}

TEST(FracPoissonDifference, SeriesMatchesSpectral) {
  const Grid g = make_grid(1, 512, 16.0);
  const Field f = gaussian(g);
  SeriesInfo info;
  const Field s = frac_poisson_difference(f, 0.1, 0.5, 1e-10, DifferencePath::series, &info);
  const Field m = frac_poisson_difference(f, 0.1, 0.5);
  EXPECT_LE(info.tail_bound, 1e-10);
  // The series drops the DC mode, whose multiplier value is 0.
  EXPECT_LE(max_abs(s - m), 1e-10 + 1e-13);
}

TEST(FracPoissonDifference, BoundedByCoefficientSum) {
  // P_t is a sup-norm contraction and sum_k |binom(a, k)| = 2 for 0 < a < 1.
  const Grid g = make_grid(1, 512, 16.0);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Field f = band_limited(g, seed, 10.0);
    for (double t : {0.01, 0.1, 1.0}) EXPECT_LE(max_abs(frac_poisson_difference(f, t, 0.5)), 2.0 * max_abs(f) * (1 + 1e-12));
  }
}

TEST(NormalizedDifference, AlphaOneTendsToAbsXi) {
  const Grid g = make_grid(1, 256, 8.0);
  const Field f = band_limited(g, 5);
  const Field target = riesz_derivative_spectral(f, 1.0);
  double prev = INFINITY;
  for (double eps = 0.1; eps > 1e-4; eps /= 4.0) {
    const double e = relative_l2_error(normalized_difference(f, eps, 1.0), target);
    EXPECT_LT(e, prev / 3.0);
    prev = e;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(NormalizedDifference, ScalingByConstruction) {
  const Grid g = make_grid(1, 128, 8.0);
  const Field f = gaussian(g);
  const Field a = normalized_difference(f, 0.05, 0.7);
  const Field b = std::pow(0.05, -0.7) * frac_poisson_difference(f, 0.05, 0.7);
  EXPECT_LE(relative_l2_error(a, b), 1e-14);
}

TEST(NormalizedDifference, GaussianHalvingsAreCauchy) {
  const Grid g = make_grid(1, 1024, 16.0);
  const Field f = gaussian(g);
  std::vector<double> diffs;
  Field prev = normalized_difference(f, 1.0 / 8, 0.5);
  for (double eps = 1.0 / 16; eps >= 1.0 / 512; eps /= 2.0) {
    const Field cur = normalized_difference(f, eps, 0.5);
    diffs.push_back(l2_norm(cur - prev));
    prev = cur;
  }
  for (std::size_t i = 1; i < diffs.size(); ++i) {
    const double ratio = diffs[i - 1] / diffs[i];
    EXPECT_GT(ratio, 1.6);
    EXPECT_LT(ratio, 2.5);
  }
}

TEST(RieszGamma, MatchesPowerTransforms) {
  // F|x|^{a-1} = 2 Gamma(a) cos(pi a/2) |xi|^{-a} in 1-D; in 2-D the Weber integral gives
  // F|x|^{a-2} = 2 pi 2^{a-1} Gamma(a/2) / Gamma(1 - a/2) |xi|^{-a}.
  for (double a : {0.25, 0.5, 0.75}) EXPECT_NEAR(riesz_gamma(1, a), 2.0 * std::tgamma(a) * std::cos(kPi * a / 2), 1e-12);
  for (double a : {0.5, 1.0, 1.5})
    EXPECT_NEAR(riesz_gamma(2, a), 2.0 * kPi * std::pow(2.0, a - 1) * std::tgamma(a / 2) / std::tgamma(1 - a / 2), 1e-12);
  EXPECT_THROW(riesz_gamma(1, 1.0), DomainError);
}

TEST(RieszPotential, CompositionAndEigenfunction) {
  const Grid g = make_grid(2, 64, 6.0);
  const Field f = band_limited(g, 8);
  const Field a = riesz_potential(riesz_potential(f, 0.4), 0.9);
  EXPECT_LE(relative_l2_error(a, riesz_potential(f, 1.3)), 1e-8);

  const Grid g1 = make_grid(1, 128, kPi);
  const Field s = sample(g1, [](std::span<const double> x) { return std::sin(3 * x[0]); });
  EXPECT_LE(relative_l2_error(riesz_potential(s, 0.5), std::pow(3.0, -0.5) * s), 1e-13);
  EXPECT_THROW(riesz_potential(s, 1.0), DomainError);
}

TEST(RieszPotential, KernelPathAgrees) {
  const Grid g = make_grid(1, 512, 8.0);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Field f = band_limited(g, seed);
    EXPECT_LE(relative_l2_error(riesz_potential_kernel(f, 0.5), riesz_potential(f, 0.5)), 1e-3);
  }
}

TEST(BesselPotential, Examples) {
  const Grid g = make_grid(1, 512, 8.0);
  const Field f = band_limited(g, 4, 10.0);
  EXPECT_LE(relative_l2_error(bessel_potential(f, 0.0), f), 1e-15);
  EXPECT_LE(relative_l2_error(bessel_potential(bessel_potential(f, 0.7), 1.1), bessel_potential(f, 1.8)), 1e-10);
  EXPECT_LE(l2_norm(bessel_potential(f, 0.7)), l2_norm(f));
  const Field gs = gaussian(g);
  EXPECT_LE(max_abs(bessel_potential_kernel(gs, 2.0) - bessel_potential(gs, 2.0)), 1e-6);
}

TEST(Hypersingular, ConstantIsAnnihilated) {
  const Grid g = make_grid(1, 256, 8.0);
  OperatorSpec s;
  EXPECT_LE(max_abs(hypersingular_truncated(Field(g, 2.0), s)), 1e-13);
  EXPECT_LE(max_abs(hypersingular_truncated(Field(g, 2.0), s, HypersingularPath::quadrature)), 1e-10);
}

TEST(Hypersingular, QuadratureMatchesSpectral1D) {
  const Grid g = make_grid(1, 512, 16.0);
  const Field f = gaussian(g);
  OperatorSpec s;
  s.eps = 0.1;
  QuadratureInfo info;
  const Field q = hypersingular_truncated(f, s, HypersingularPath::quadrature, &info);
  EXPECT_LE(relative_l2_error(q, hypersingular_truncated(f, s)), 1e-2);
  EXPECT_GT(info.shifts, 0u);
  EXPECT_NEAR(info.y_max, g.L / 3.0, 1e-12);
}

TEST(Hypersingular, QuadratureMatchesSpectral2D) {
  const Grid g = make_grid(2, 64, 8.0);
  const Field f = gaussian(g);
  OperatorSpec s;
  s.eps = 0.4;
  s.shells_per_decade = 16;
  s.angular_points = 64;
  QuadratureInfo info;
  const Field q = hypersingular_truncated(f, s, HypersingularPath::quadrature, &info);
  const Field m = hypersingular_truncated(f, s);
  // In 2-D only the constant part of the region beyond y_max is exact.
  EXPECT_LE(max_abs(q - m), info.tail_bound);
  EXPECT_LE(relative_l2_error(q, m), 0.05);
}

TEST(Hypersingular, Preconditions) {
  const Grid g = make_grid(1, 64, 8.0);
  OperatorSpec s;
  s.eps = 0.1;
  EXPECT_THROW(hypersingular_truncated(gaussian(g), s, HypersingularPath::quadrature), DomainError);
  s.eps = 0.5;
  s.max_shifts = 10;
  EXPECT_THROW(hypersingular_truncated(gaussian(g), s, HypersingularPath::quadrature), NumericalError);
}

TEST(Hypersingular, FourierIdentityWithTransferenceSymbols) {
  const Grid g = make_grid(2, 64, 6.0);
  const HypersingularSymbol& sym = hypersingular_symbol(2, 2, 0.5);
  const Field f = band_limited(g, 6, 8.0);
  for (double eps : {1.0, 0.1, 0.01}) {
    OperatorSpec s;
    s.eps = eps;
    const SpectralField N = to_spectral(normalized_difference(f, eps, 0.5));
    const SpectralField D = to_spectral(hypersingular_truncated(f, s));
    const double scale = std::max(max_coefficient(N), max_coefficient(D));
    for (std::size_t i = 1; i < N.coefficients.size(); ++i) {
      const double r = eps * g.abs_frequency(i);
      EXPECT_LE(std::abs(N.coefficients[i] - sym.A(r) * D.coefficients[i]), 1e-10 * scale);
      EXPECT_LE(std::abs(sym.B(r) * N.coefficients[i] - D.coefficients[i]), 1e-10 * scale);
    }
  }
}

TEST(Operators, LinearAndTranslationCovariant) {
  const Grid g = make_grid(1, 256, 8.0);
  const Field a = band_limited(g, 1), b = band_limited(g, 2);
  OperatorSpec s;
  s.eps = 0.2;
  const std::vector<std::function<Field(const Field&)>> ops = {
      [](const Field& f) { return poisson_apply(f, 0.3); },
      [](const Field& f) { return frac_poisson_difference(f, 0.3, 0.5); },
      [](const Field& f) { return riesz_potential(f, 0.5); },
      [](const Field& f) { return bessel_potential(f, 1.0); },
      [s](const Field& f) { return hypersingular_truncated(f, s); },
      [s](const Field& f) { return hypersingular_truncated(f, s, HypersingularPath::quadrature); },
  };
  const double h[1] = {0.75};
  for (const auto& op : ops) {
    EXPECT_LE(relative_l2_error(op(1.5 * a - b), 1.5 * op(a) - op(b)), 1e-12);
    EXPECT_LE(relative_l2_error(op(shift_evaluate(a, h)), shift_evaluate(op(a), h)), 1e-10);
  }
}

TEST(RieszDerivative, BandLimitedLimit) {
  const Grid g = make_grid(1, 256, 8.0);
  const Field f = band_limited(g, 3);
  const RieszDerivativeResult r = riesz_derivative(f, 0.5, 4, {1e-1, 1e-2, 1e-3, 1e-4});
  EXPECT_TRUE(r.cauchy);
  EXPECT_EQ(r.report.records.size(), 4u);
  EXPECT_LE(relative_l2_error(r.value, riesz_derivative_spectral(f, 0.5)), 1e-6);
  EXPECT_THROW(riesz_derivative(f, 0.5, 4, {1e-2, 1e-1}), DomainError);
}

TEST(RieszDerivative, InvertsRieszPotential) {
  const Grid g = make_grid(1, 256, 8.0);
  const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4};
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Field phi = band_limited(g, seed);
    const Field f = riesz_potential(phi, 0.5);
    const RieszDerivativeResult r = riesz_derivative(f, 0.5, 4, eps);
    EXPECT_LE(relative_l2_error(r.value, phi), 1e-6);
    double sup = 0.0;
    for (double e : eps) {
      OperatorSpec s;
      s.ell = 4;
      s.eps = e;
      sup = std::max(sup, l2_norm(hypersingular_truncated(f, s)));
    }
    EXPECT_LE(sup, 2.0 * l2_norm(phi));
  }
}

}  // namespace
