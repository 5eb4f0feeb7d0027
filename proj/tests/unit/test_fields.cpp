#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fraclab/error.hpp"
#include "fraclab/fields.hpp"

namespace {

using namespace fraclab;

constexpr double kPi = 3.14159265358979323846;

Field random_field(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  Field f(g);
  for (double& v : f.values) v = d(rng);
  return f;
}

TEST(GridTest, Validation) {
  EXPECT_THROW(make_grid(4, 16, 1.0), DomainError);
  EXPECT_THROW(make_grid(1, 24, 1.0), DomainError);
  EXPECT_THROW(make_grid(1, 8, 1.0), DomainError);
  EXPECT_THROW(make_grid(1, 16, 0.0), DomainError);
  const Grid g = make_grid(3, 16, 2.0);
  EXPECT_EQ(g.size(), 4096u);
  EXPECT_DOUBLE_EQ(g.h(), 0.25);
  EXPECT_DOUBLE_EQ(g.measure(), 64.0);
  EXPECT_DOUBLE_EQ(g.frequency(1), kPi / 2.0);
  EXPECT_DOUBLE_EQ(g.frequency(15), -kPi / 2.0);
}

TEST(FieldTest, RejectsWrongSizeAndNonFinite) {
  const Grid g = make_grid(1, 16, 1.0);
  EXPECT_THROW(Field(g, std::vector<double>(15, 0.0)), StructuralError);
  Field f(g, 1.0);
  f.values[2] = std::nan("");
  EXPECT_THROW(to_spectral(f), StructuralError);
}

TEST(Spectral, ImpulseHasFlatSpectrum) {
  const Grid g = make_grid(2, 32, 3.0);
  Field f(g);
  f.values[5 * 32 + 7] = 1.0;
  const SpectralField F = to_spectral(f);
  for (const auto& c : F.coefficients) EXPECT_NEAR(std::abs(c), g.cell_volume(), 1e-15);
}

TEST(Spectral, GaussianTransformPair) {
  const Grid g = make_grid(1, 256, 20.0);
  const Field f = sample(g, [](std::span<const double> x) { return std::exp(-0.5 * x[0] * x[0]); });
  const SpectralField F = to_spectral(f);
  for (int i = 0; i < g.points; ++i) {
    const double xi = g.frequency(i);
    EXPECT_NEAR(F.coefficients[i].real(), std::sqrt(2.0 * kPi) * std::exp(-0.5 * xi * xi), 1e-8);
    EXPECT_NEAR(F.coefficients[i].imag(), 0.0, 1e-8);
  }
  EXPECT_LT(std::exp(-0.5 * 400.0), 1e-80);
}

TEST(Spectral, RoundTripAndParseval) {
  for (int n : {1, 2, 3}) {
    const Grid g = make_grid(n, n == 3 ? 16 : 64, 2.5);
    const Field f = random_field(g, 42 + n);
    const Field back = from_spectral(to_spectral(f));
    EXPECT_LE(relative_l2_error(back, f), 1e-12);
    double spec = 0.0;
    for (const auto& c : to_spectral(f).coefficients) spec += std::norm(c);
    const double l2 = l2_norm(f);
    EXPECT_NEAR(spec / g.measure(), l2 * l2, 1e-10 * l2 * l2);
  }
}

TEST(Multiplier, IdentityCompositionAndSemigroup) {
  const Grid g = make_grid(2, 64, 4.0);
  const Field f = random_field(g, 7);
  EXPECT_LE(relative_l2_error(apply_radial_multiplier(f, [](double) { return 1.0; }), f), 1e-14);

  auto m1 = [](double r) { return 1.0 / (1.0 + r * r); };
  auto m2 = [](double r) { return std::cos(r); };
  const Field seq = apply_radial_multiplier(apply_radial_multiplier(f, m1), m2);
  const Field once = apply_radial_multiplier(f, [&](double r) { return m1(r) * m2(r); });
  EXPECT_LE(relative_l2_error(seq, once), 1e-10);

  const double t = 0.3;
  const Field twice = apply_radial_multiplier(
      apply_radial_multiplier(f, [t](double r) { return std::exp(-t * r); }),
      [t](double r) { return std::exp(-t * r); });
  const Field single = apply_radial_multiplier(f, [t](double r) { return std::exp(-2 * t * r); });
  EXPECT_LE(relative_l2_error(twice, single), 1e-12);
}

TEST(Multiplier, Linear) {
  const Grid g = make_grid(1, 128, 5.0);
  const Field a = random_field(g, 1), b = random_field(g, 2);
  auto m = [](double r) { return std::exp(-r); };
  const Field lhs = apply_radial_multiplier(2.0 * a - b, m);
  const Field rhs = 2.0 * apply_radial_multiplier(a, m) - apply_radial_multiplier(b, m);
  EXPECT_LE(relative_l2_error(lhs, rhs), 1e-13);
}

TEST(Multiplier, SineIsEigenfunctionOfSquare) {
  const Grid g = make_grid(1, 64, kPi);
  const Field s = sample(g, [](std::span<const double> x) { return std::sin(x[0]); });
  EXPECT_LE(relative_l2_error(apply_radial_multiplier(s, [](double r) { return r * r; }), s), 1e-13);
}

TEST(Multiplier, SingularOriginZeroesDcWithWarning) {
  const Grid g = make_grid(1, 64, kPi);
  const Field f = sample(g, [](std::span<const double> x) { return 1.0 + std::sin(x[0]); });
  Diagnostics d;
  const Field out = apply_radial_multiplier(f, [](double r) { return 1.0 / r; }, &d);
  EXPECT_EQ(d.warnings.size(), 1u);
  EXPECT_LE(std::abs(integral(out)), 1e-13);

  Diagnostics quiet;
  const Field s = sample(g, [](std::span<const double> x) { return std::sin(x[0]); });
  apply_radial_multiplier(s, [](double r) { return 1.0 / r; }, &quiet);
  EXPECT_TRUE(quiet.warnings.empty());
}

TEST(Multiplier, UnboundedAwayFromOriginIsDomainError) {
  const Grid g = make_grid(1, 64, kPi);
  const Field f = random_field(g, 3);
  EXPECT_THROW(apply_radial_multiplier(f, [](double r) { return r > 2.5 && r < 3.5 ? INFINITY : 1.0; }),
               DomainError);
}

TEST(Shift, Examples) {
  const Grid g = make_grid(1, 64, kPi);
  const Field s = sample(g, [](std::span<const double> x) { return std::sin(x[0]); });
  const double zero[1] = {0.0}, quarter[1] = {kPi / 2.0}, back[1] = {-kPi / 2.0};
  EXPECT_LE(relative_l2_error(shift_evaluate(s, zero), s), 1e-15);
  const Field c = sample(g, [](std::span<const double> x) { return -std::cos(x[0]); });
  EXPECT_LE(max_abs(shift_evaluate(s, quarter) - c), 1e-10);

  TestFieldSpec spec;
  spec.kind = TestFieldSpec::Kind::band_limited;
  spec.cutoff = 20.0;
  const Field f = test_field(spec, g);
  const double h[1] = {0.37};
  const double mh[1] = {-0.37};
  EXPECT_LE(relative_l2_error(shift_evaluate(shift_evaluate(f, h), mh), f), 1e-10);
}

TEST(Shift, CubicCrossCheck) {
  const Grid g = make_grid(2, 128, 8.0);
  const Field f = sample(g, [](std::span<const double> x) { return std::exp(-(x[0] * x[0] + x[1] * x[1])); });
  const double h[2] = {0.123, -0.4};
  const Field a = shift_evaluate(f, h, ShiftMethod::spectral);
  const Field b = shift_evaluate(f, h, ShiftMethod::cubic);
  const Field exact = sample(g, [&](std::span<const double> x) {
    const double u = x[0] - h[0], v = x[1] - h[1];
    return std::exp(-(u * u + v * v));
  });
  EXPECT_LE(max_abs(a - exact), 1e-12);
  EXPECT_LE(max_abs(b - exact), 1e-3);
  const SpectralField F = to_spectral(f);
  EXPECT_LE(max_abs(shift_from_spectral(F, h) - a), 1e-14);
}

TEST(TestFields, PoissonKernelMass) {
  TestFieldSpec s;
  s.kind = TestFieldSpec::Kind::poisson_kernel;
  for (double t : {0.3, 1.0}) {
    s.t = t;
    for (int n : {1, 2}) {
      const Grid g = make_grid(n, n == 1 ? 1024 : 256, 8.0);
      EXPECT_NEAR(integral(test_field(s, g)), 1.0, 1e-6) << n << " " << t;
    }
  }
}

TEST(TestFields, GaussianPositiveSymmetric) {
  const Grid g = make_grid(1, 128, 8.0);
  const Field f = test_field(TestFieldSpec{}, g);
  for (int i = 1; i < g.points; ++i) {
    EXPECT_GT(f.values[i], 0.0);
    EXPECT_EQ(f.values[i], f.values[g.points - i]);
  }
}

TEST(TestFields, BandLimited) {
  TestFieldSpec s;
  s.kind = TestFieldSpec::Kind::band_limited;
  s.cutoff = 3.0;
  s.seed = 12;
  const Grid g = make_grid(2, 64, 8.0);
  const Field f = test_field(s, g);
  const SpectralField F = to_spectral(f);
  double scale = 0.0;
  for (const auto& c : F.coefficients) scale = std::max(scale, std::abs(c));
  EXPECT_LE(std::abs(F.coefficients[0]), 1e-14 * scale);
  for (std::size_t i = 0; i < F.coefficients.size(); ++i)
    if (g.abs_frequency(i) > s.cutoff) EXPECT_LE(std::abs(F.coefficients[i]), 1e-12);
  EXPECT_GT(l2_norm(f), 0.0);
  EXPECT_EQ(test_field(s, g).values, f.values);
  s.cutoff = 1e3;
  EXPECT_THROW(test_field(s, g), DomainError);
}

TEST(TestFields, BumpSupport) {
  TestFieldSpec s;
  s.kind = TestFieldSpec::Kind::bump;
  s.radius = 1.5;
  const Grid g = make_grid(2, 64, 4.0);
  const Field f = test_field(s, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.abs_coord(i) >= 1.5) EXPECT_EQ(f.values[i], 0.0);
    else EXPECT_GT(f.values[i], 0.0);
  }
  s.radius = 5.0;
  EXPECT_THROW(test_field(s, g), DomainError);
}

TEST(FieldIo, BinaryRoundTripAndCsv) {
  const Grid g = make_grid(2, 16, 1.5);
  const Field f = random_field(g, 9);
  std::stringstream ss;
  write_field_binary(f, ss);
  EXPECT_EQ(ss.str().size(), 4u + 4u + 8u + 8u * 256u);
  const Field back = read_field_binary(ss);
  EXPECT_EQ(back.grid, g);
  EXPECT_EQ(back.values, f.values);

  std::stringstream bad(ss.str().substr(0, 40));
  EXPECT_THROW(read_field_binary(bad), StructuralError);

  const Grid g1 = make_grid(1, 16, 1.0);
  std::ostringstream csv;
  write_field_csv(Field(g1, 2.0), csv);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "x,value");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 16);
  EXPECT_THROW(write_field_csv(f, csv), StructuralError);
}

}  // namespace
