// Acceptance run: one PASS/FAIL line per criterion. Exit status is 0 iff the set of
// failing criteria equals the set passed with --expect-fail (empty by default).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "fraclab/experiments.hpp"
#include "fraclab/hankel.hpp"
#include "fraclab/numerics.hpp"
#include "fraclab/operators.hpp"
#include "fraclab/special.hpp"
#include "fraclab/symbols.hpp"
#include "fraclab/varlp.hpp"

using namespace fraclab;

namespace {

struct Outcome {
  bool pass = false;
  std::string summary;
  std::vector<std::string> info;
};

template <class... T>
std::string fmtn(const char* f, T... a) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Envelope slope of |y| against r from the local maxima of |y|.
double envelope_slope(const std::vector<double>& r, const std::vector<double>& y) {
  std::vector<double> xm;
  std::vector<double> ym;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    const double a = std::abs(y[i - 1]);
    const double b = std::abs(y[i]);
    const double c = std::abs(y[i + 1]);
    if (b > a && b >= c) {
      xm.push_back(r[i]);
      ym.push_back(b);
    }
  }
  return fit_loglog(xm, ym).slope;
}

Outcome c1_catalan() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int n : {2, 3})
    for (int ell : {2, 4}) {
      const SphericalSineIntegral V(n, ell);
      for (double rho : logspace(0.1, 50.0, 12)) {
        const double q = catalan_quadrature(n, ell, rho);
        worst = std::max(worst, std::abs(V.eval_expansion(rho) - q) / std::abs(q));
      }
    }
  const double t = seconds_since(t0);
  return {worst <= 1e-8 && t < 10.0,
          fmtn("max relative error %.3e (<= 1e-8), %.2f s (< 10 s)", worst, t), {}};
}

Outcome c2_normalization() {
  double worst = 0.0;
  std::vector<std::string> info;
  for (auto [n, ell, alpha] : {std::tuple{1, 2, 0.5}, std::tuple{2, 2, 0.5}, std::tuple{2, 4, 1.5}}) {
    const double dev = std::abs(w_eval(n, ell, alpha, 1e-4) - 1.0);
    worst = std::max(worst, dev);
    info.push_back(fmtn("(n, ell, alpha) = (%d, %d, %.1f): d = %.12g, |w(1e-4) - 1| = %.3e", n,
                        ell, alpha, hypersingular_constant(n, ell, alpha), dev));
  }
  const double d = hypersingular_constant(1, 2, 0.5);
  const double ref = -8.0 * std::sqrt(std::numbers::pi);
  const double rel = std::abs(d / ref - 1.0);
  return {worst <= 1e-3 && rel <= 1e-8,
          fmtn("max |w(1e-4) - 1| = %.3e (<= 1e-3); d_{1,2}(1/2) vs -8 sqrt(pi) rel %.3e (<= 1e-8)",
               worst, rel),
          info};
}

Outcome c3_b_limits() {
  const HypersingularSymbol& s = hypersingular_symbol(2, 2, 0.5);
  const double b0 = std::abs(s.B(1e-9) - 1.0);
  std::vector<double> r;
  std::vector<double> y;
  std::vector<double> scaled;
  for (int i = 0; i <= 20000; ++i) {
    const double x = 50.0 * std::pow(10.0, i / 20000.0);
    r.push_back(x);
    y.push_back(s.B(x) - s.B_infinity());
    scaled.push_back(y.back() * std::sqrt(x));
  }
  const double slope = envelope_slope(r, y);
  const double nu = 1.0;
  double structure = 0.0;
  for (double x : {60.0, 120.0, 250.0, 480.0})
    structure = std::max(structure, std::abs(s.B(x) - s.B_asymptotic(x, true)) /
                                        s.B_asymptotic_next_term(x));
  Outcome o;
  o.pass = b0 <= 1e-6 && std::abs(-slope - nu) <= 0.2;
  o.summary = fmtn("|B(0) - 1| = %.2e; decay exponent of |B - B(inf)| on [50, 500] = %.3f, "
                   "target nu = %.1f +- 0.2",
                   b0, -slope, nu);
  o.info.push_back(fmtn("limit used: c lambda / alpha = %.12g (lambda / alpha uncorrected = %.12g)",
                        s.B_infinity(), s.B_infinity_uncorrected()));
  o.info.push_back(fmtn("lambda closed form / lambda quadrature = %.12g, sqrt(pi) = %.12g",
                        s.V().lambda_closed_form() / s.V().lambda(), std::sqrt(std::numbers::pi)));
  o.info.push_back(fmtn("envelope of r^{1/2} |B - B(inf)| decays with exponent %.3f: the leading "
                        "term r^{-nu} J_{nu-2}(ell r) has envelope r^{-nu-1/2}",
                        -envelope_slope(r, scaled)));
  o.info.push_back(fmtn("|B - asymptotic form| / first omitted term <= %.3f on [60, 480]", structure));
  return o;
}

Outcome c4_mikhlin() {
  bool ok = true;
  std::vector<std::string> info;
  const HypersingularSymbol& s = hypersingular_symbol(2, 2, 0.5);
  MikhlinOptions opt;
  opt.n = 2;
  for (const auto& sym : {symbol_A(s), symbol_B(s)}) {
    const MikhlinAudit a = mikhlin_audit(sym, 2, opt);
    for (const auto& b : a.bounds) {
      const bool good = std::isfinite(b.sup_bound) && !b.divergent && b.refinement_delta < 0.02 &&
                        b.dilation_spread < 0.01;
      ok = ok && good;
      info.push_back(fmtn("%s k=%d: sup %.6g at r=%.3g, refinement %.2e, dilation spread %.2e%s",
                          sym.name().c_str(), b.k, b.sup_bound, b.argmax, b.refinement_delta,
                          b.dilation_spread, b.divergent ? ", divergent" : ""));
    }
  }
  return {ok, "sup_r |r^k M^(k)| for A, B (n = 2, k <= 2): finite, refinement < 2%, dilation < 1%",
          info};
}

Outcome c5_fourier() {
  const Grid g = make_grid(2, 64, 8.0);
  double worst = 0.0;
  double mass_err = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TestFieldSpec spec;
    spec.kind = TestFieldSpec::Kind::band_limited;
    spec.cutoff = 4.0;
    spec.seed = seed;
    const auto rep = run_fourier_identity(test_field(spec, g), 0.5, 2, {1.0, 0.1, 0.01});
    worst = std::max({worst, rep.metrics.at("max_forward_deviation"),
                      rep.metrics.at("max_inverse_deviation")});
    mass_err = rep.metrics.at("kernel_mass_error");
  }
  const KernelMassResult& km = kernel_mass_cached(2, 2, 0.5);
  return {worst <= 1e-10 && mass_err <= 1e-3,
          fmtn("max coefficient deviation %.3e (<= 1e-10); |c + int a - 1| = %.3e (<= 1e-3)", worst,
               mass_err),
          {fmtn("c = A(inf) = %.12g, truncated mass %.12g, tail %.3e", km.c, km.truncated_mass,
                km.tail)}};
}

Outcome c6_theorem_main() {
  const auto t0 = std::chrono::steady_clock::now();
  const Grid g = make_grid(1, 1024, 16.0);
  const Field f = test_field(TestFieldSpec{}, g);
  ExponentFamily pc;
  pc.p_infinity = 2.0;
  ExponentFamily pv = parse_exponent_family("rational_decay", 2.0, 1.0);
  bool ok = true;
  std::vector<std::string> info;
  for (const auto& p : {pc, pv}) {
    const auto rep = run_theorem_main(f, 0.5, 2, dyadic_eps(1, 8), p);
    const double order = rep.metrics.at("order");
    ok = ok && rep.passed() && std::abs(order - 1.0) <= 0.3;
    info.push_back(fmtn("p = %s: monotone %d, final error %.4e, order %.3f, hypersingular %.3e",
                        p.name().c_str(), static_cast<int>(rep.metrics.at("monotone")),
                        rep.metrics.at("final_error"), order,
                        rep.metrics.at("hypersingular_final_error")));
  }
  const double t = seconds_since(t0);
  return {ok && t < 60.0,
          fmtn("strictly decreasing, final <= 1e-3, order 1.0 +- 0.3 for both p; %.2f s (< 60 s)", t),
          info};
}

Outcome c7_rate() {
  const Grid g = make_grid(1, 1024, 16.0);
  const Field smooth = test_field(TestFieldSpec{}, g);
  TestFieldSpec rs;
  rs.kind = TestFieldSpec::Kind::band_limited;
  rs.cutoff = g.max_frequency();
  rs.seed = 7;
  const Field rough = test_field(rs, g);
  ExponentFamily p;
  bool ok = true;
  std::vector<std::string> info;
  for (double alpha : {0.5, 1.0}) {
    const auto good = run_theorem_rate(smooth, alpha, dyadic_eps(4, 10), p);
    TheoremRateOptions neg;
    neg.expected_negative = true;
    const auto bad = run_theorem_rate(rough, alpha, dyadic_eps(1, 6), p, neg);
    ok = ok && good.passed() && std::abs(good.fit.slope - alpha) <= 0.05 && !bad.passed() &&
         bad.fit.slope < alpha - 0.1;
    info.push_back(fmtn("alpha %.1f: gaussian slope %.4f; rough field slope %.4f, verdict %s", alpha,
                        good.fit.slope, bad.fit.slope, bad.verdict.c_str()));
  }
  return {ok, "slope = alpha +- 0.05 (alpha = 0.5, 1); rough field slope < alpha - 0.1 and FAIL", info};
}

Outcome c8_inversion() {
  const Grid g = make_grid(1, 256, 8.0);
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TestFieldSpec spec;
    spec.kind = TestFieldSpec::Kind::band_limited;
    spec.seed = seed;
    const Field phi = test_field(spec, g);
    const Field back = riesz_derivative_spectral(riesz_potential(phi, 0.5), 0.5);
    worst = std::max(worst, relative_l2_error(back, phi));
  }
  const Field f = test_field(TestFieldSpec{}, g);
  OperatorSpec op;
  op.alpha = 0.5;
  op.ell = 2;
  op.eps = 0.1;
  QuadratureInfo qi;
  const double quad = relative_l2_error(hypersingular_truncated(f, op, HypersingularPath::quadrature, &qi),
                                        hypersingular_truncated(f, op));
  return {worst <= 1e-6 && quad <= 1e-2,
          fmtn("inversion rel error %.3e (<= 1e-6); quadrature vs spectral rel %.3e (<= 1e-2)", worst,
               quad),
          {fmtn("quadrature: %zu shifted fields, tail bound %.2e", qi.shifts, qi.tail_bound)}};
}

Outcome c9_semigroup() {
  const Grid g = make_grid(1, 512, 8.0);
  const Field f = test_field(TestFieldSpec{}, g);
  double semi = 0.0;
  double kernel = 0.0;
  for (auto [t, s] : {std::pair{0.1, 0.3}, std::pair{0.5, 0.25}, std::pair{1.0, 2.0}}) {
    const Field lhs = poisson_apply(poisson_apply(f, s), t);
    semi = std::max(semi, relative_l2_error(lhs, poisson_apply(f, t + s)));
    kernel = std::max(kernel, relative_l2_error(poisson_apply(f, t, PoissonPath::convolution),
                                                poisson_apply(f, t)));
  }
  const Grid g2 = make_grid(2, 128, 8.0);
  const Field f2 = test_field(TestFieldSpec{}, g2);
  const double k2 = relative_l2_error(poisson_apply(f2, 1.0, PoissonPath::convolution),
                                      poisson_apply(f2, 1.0));
  return {semi <= 1e-10 && kernel <= 1e-6,
          fmtn("semigroup rel %.3e (<= 1e-10); kernel vs spectral (n = 1) rel %.3e (<= 1e-6)", semi,
               kernel),
          {fmtn("n = 2 image-sum kernel vs spectral (128^2, t = 1) rel %.3e", k2)}};
}

Outcome c10_luxemburg() {
  const Grid g = make_grid(1, 256, 8.0);
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uni(0.1, 10.0);

  double closed = 0.0;
  for (double p : {1.0, 1.5, 2.0, 3.0, 4.5}) {
    Field f(g);
    for (double& v : f.values) v = normal(rng);
    double sum = 0.0;
    for (double v : f.values) sum += std::pow(std::abs(v), p) * g.h();
    const double exact = std::pow(sum, 1.0 / p);
    closed = std::max(closed, std::abs(luxemburg_norm(f, constant_exponent(g, p)) / exact - 1.0));
  }

  const ExponentField pv = exponent_from_family(g, parse_exponent_family("rational_decay", 2.0, 1.0));
  double unit = 0.0;
  double homog = 0.0;
  bool ball = true;
  for (int i = 0; i < 100; ++i) {
    Field f(g);
    const double amp = uni(rng);
    for (double& v : f.values) v = amp * normal(rng);
    const double nrm = luxemburg_norm(f, pv);
    Field u = f;
    u *= 1.0 / nrm;
    unit = std::max(unit, std::abs(modular(u, pv) - 1.0));
    const double lam = uni(rng) * (i % 2 ? -1.0 : 1.0);
    Field h = f;
    h *= lam;
    homog = std::max(homog, std::abs(luxemburg_norm(h, pv) / (std::abs(lam) * nrm) - 1.0));
    Field inside = f;
    inside *= 0.99 / nrm;
    Field outside = f;
    outside *= 1.01 / nrm;
    ball = ball && modular(inside, pv) <= 1.0 && modular(outside, pv) > 1.0;
  }

  const Grid gc = make_grid(1, 1024, 16.0);
  const ExponentField pc = exponent_from_family(gc, parse_exponent_family("log_decay", 2.0, 1.0));
  const double c1 = check_log_condition(pc, 4000, 11).constant;
  const double c2 = check_log_condition(pc, 8000, 11).constant;
  const double d1 = check_decay_condition(pc).constant;
  const double stab = std::abs(c2 / c1 - 1.0);
  return {closed <= 1e-10 && unit <= 1e-10 && homog <= 1e-10 && ball && stab < 0.05,
          fmtn("constant p rel %.2e; |rho(f/|f|) - 1| %.2e; homogeneity %.2e; unit ball %s; "
               "certificate change %.2e (< 5%%)",
               closed, unit, homog, ball ? "ok" : "violated", stab),
          {fmtn("log-condition constant %.6g (budget 4000) / %.6g (budget 8000); decay constant %.6g",
                c1, c2, d1)}};
}

Outcome c11_recurrences() {
  double worst = 0.0;
  for (double x : {-1.2, -0.3, 0.0, 0.4, 1.1}) {
    std::vector<double> sn(7);
    std::vector<double> cs(7);
    std::vector<double> ex(7);
    for (int k = 0; k <= 6; ++k) {
      sn[k] = std::sin(x + k * std::numbers::pi / 2);
      cs[k] = std::cos(x + k * std::numbers::pi / 2);
      ex[k] = std::exp(x);
    }
    // tan^(k) = P_k(tan) with P_0 = T, P_{k+1} = (1 + T^2) P_k'.
    std::vector<double> poly{0.0, 1.0};
    const double T = std::tan(x);
    for (int k = 0; k <= 6; ++k) {
      double val = 0.0;
      for (std::size_t j = poly.size(); j-- > 0;) val = val * T + poly[j];
      const double q = quotient_derivative(sn, cs, k);
      worst = std::max(worst, std::abs(q - val) / std::max(1.0, std::abs(val)));
      const double r = reciprocal_derivative(ex, k);
      const double exact = (k % 2 ? -1.0 : 1.0) * std::exp(-x);
      worst = std::max(worst, std::abs(r - exact) / exact);
      std::vector<double> next(poly.size() + 1, 0.0);
      for (std::size_t j = 1; j < poly.size(); ++j) {
        next[j - 1] += j * poly[j];
        next[j + 1] += j * poly[j];
      }
      poly = next;
    }
  }
  double lift = 0.0;
  const ProfileJet bump = [](double t, int order) {
    if (t <= 1.0 || t >= 2.0) return Jet(order, 0.0);
    const Jet x = Jet::variable(order, t);
    const Jet u = (x - Jet::constant(order, 1.0)) * (Jet::constant(order, 2.0) - x);
    return exp(-1.0 * pow(u, -1.0));
  };
  const ProfileJet bump2 = [](double t, int order) {
    if (t <= 0.5 || t >= 3.0) return Jet(order, 0.0);
    const Jet x = Jet::variable(order, t);
    const Jet u = (x - Jet::constant(order, 0.5)) * (Jet::constant(order, 3.0) - x);
    return exp(-2.0 * pow(u, -1.0)) * x;
  };
  for (const auto& [f, a, b] : {std::tuple{bump, 1.0, 2.0}, std::tuple{bump2, 0.5, 3.0}})
    for (double nu : {0.5, 1.0, 1.5})
      for (double r : {0.7, 3.0, 11.0}) {
        const double direct = hankel_direct(f, nu, r, a, b);
        for (int m : {1, 2}) {
          const double lifted = hankel_tail_lift(f, nu, m, r, a, b);
          lift = std::max(lift, std::abs(lifted - direct) / std::max(std::abs(direct), 1e-3));
        }
      }
  return {worst <= 1e-8 && lift <= 1e-6,
          fmtn("quotient/reciprocal vs tan/exp jets (k <= 6) rel %.2e (<= 1e-8); tail lift m = 1, 2 "
               "rel %.2e (<= 1e-6)",
               worst, lift),
          {}};
}

Outcome c12_a3() {
  const auto rep = a3_decay_probe(2, 2, 0.5, logspace(0.01, 100.0, 30));
  const double nu = 1.0;
  const double bound = -(nu - 0.5) - 0.3;
  const bool integrable = std::isfinite(rep.radial_mass_outer) && rep.radial_mass_outer > 0.0 &&
                          (rep.radial_mass_outer - rep.radial_mass_inner) <= 0.05 * rep.radial_mass_outer;
  return {rep.small_r_exponent >= bound && integrable && rep.steepening,
          fmtn("small-r exponent %.3f (>= %.2f); radial mass %.6g inner / %.6g outer; slopes "
               "%.2f (mid) -> %.2f (far), steepening %s",
               rep.small_r_exponent, bound, rep.radial_mass_inner, rep.radial_mass_outer,
               rep.mid_slope, rep.far_slope, rep.steepening ? "yes" : "no"),
          {}};
}

std::set<int> parse_set(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected_fail;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--expect-fail" && i + 1 < argc) {
      expected_fail = parse_set(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--expect-fail i,j,...]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"V expansion vs Catalan quadrature", c1_catalan},
      {"normalization w(0) = 1 and d_{1,2}(1/2)", c2_normalization},
      {"limits of B", c3_b_limits},
      {"Mikhlin audit of A and B", c4_mikhlin},
      {"discrete Fourier identity and kernel mass", c5_fourier},
      {"coincidence of the two limits", c6_theorem_main},
      {"rate of (I - P_eps)^alpha", c7_rate},
      {"inversion and quadrature path", c8_inversion},
      {"Poisson semigroup", c9_semigroup},
      {"Luxemburg engine", c10_luxemburg},
      {"derivative recurrences and tail lift", c11_recurrences},
      {"a3 kernel probe", c12_a3},
  };

  std::set<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("exception: ") + e.what();
    }
    if (!o.pass) failed.insert(id);
    std::printf("%s criterion %2d: %s | %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id,
                criteria[i].first, o.summary.c_str(), seconds_since(t0));
    for (const auto& line : o.info) std::printf("     info: %s\n", line.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu of %zu criteria pass\n", criteria.size() - failed.size(), criteria.size());
  if (failed != expected_fail) {
    std::printf("failing set differs from the expected set\n");
    return 1;
  }
  return 0;
}
