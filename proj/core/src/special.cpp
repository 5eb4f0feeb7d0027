#include "fraclab/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fraclab/error.hpp"
#include "fraclab/numerics.hpp"

namespace fraclab {

namespace {

constexpr double kPi = std::numbers::pi;

double binomial_int(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

bool is_integer(double v) { return v == std::floor(v); }
bool is_half_integer(double v) { return !is_integer(v) && is_integer(2.0 * v); }

}  // namespace

double frac_binomial(double alpha, long k) {
  require_domain(k >= 0, "frac_binomial: k must be nonnegative");
  double b = 1.0;
  for (long i = 1; i <= k; ++i) b *= (alpha - static_cast<double>(i) + 1.0) / static_cast<double>(i);
  return b;
}

double frac_binomial_tail(double alpha, long K) {
  require_domain(alpha > 0.0, "frac_binomial_tail: alpha must be positive");
  if (is_integer(alpha) && static_cast<double>(K) >= alpha) return 0.0;
  require_domain(static_cast<double>(K) >= std::ceil(alpha) + 1.0,
                 "frac_binomial_tail: K must be at least ceil(alpha) + 1");
  // |b_k| k^{1+alpha} is nonincreasing for k > alpha, so the tail is dominated by
  // |b_{K+1}| (K+1)^{1+alpha} (k^{-1-alpha} summed from K+1).
  const double next = std::abs(frac_binomial(alpha, K + 1));
  return next * (1.0 + static_cast<double>(K + 1) / alpha);
}

double frac_binomial_abs_sum(double alpha) {
  require_domain(alpha > 0.0, "frac_binomial_abs_sum: alpha must be positive");
  // Past k = floor(alpha) the signed terms (-1)^k b_k share one sign and the full
  // signed series sums to (1 - 1)^alpha = 0.
  double head_abs = 0.0;
  double head_signed = 0.0;
  const long top = static_cast<long>(std::floor(alpha));
  for (long k = 0; k <= top; ++k) {
    const double b = frac_binomial(alpha, k);
    head_abs += std::abs(b);
    head_signed += (k % 2 ? -b : b);
  }
  return head_abs + std::abs(head_signed);
}

namespace {

// sum_k (-(x/2)^2)^k / (k! Gamma(k + nu + 1)); nu + 1 must not be a pole.
long double scaled_series(double nu, double x) {
  const long double hx = 0.5L * x;
  const long double q = -hx * hx;
  long double term = 1.0L / std::tgamma(static_cast<long double>(nu) + 1.0L);
  long double sum = term;
  for (int k = 1; k < 300; ++k) {
    term *= q / (k * (k + static_cast<long double>(nu)));
    sum += term;
    if (k > hx && std::abs(term) <= 1e-22L * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

double bessel_j_series(double nu, double x) {
  require_domain(nu > -1.0, "bessel_j_series: order must exceed -1");
  const long double sum = scaled_series(nu, x);
  if (nu == 0.0) return static_cast<double>(sum);
  return static_cast<double>(sum * std::pow(0.5L * x, static_cast<long double>(nu)));
}

double bessel_j_asymptotic(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double P = 1.0;
  double Q = 0.0;
  double term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    const double mag = std::abs(term);
    if (mag == 0.0) break;
    if (odd * odd > mu && mag > last) break;  // past the smallest term
    // Terms alternate in pairs: k = 1, 2 -> +Q, -P; k = 3, 4 -> -Q, +P.
    const int phase = (k - 1) / 2;
    const double sign = (phase % 2) ? -1.0 : 1.0;
    if (k % 2)
      Q += sign * term;
    else
      P -= sign * term;
    last = mag;
    if (mag < 1e-17) break;
  }
  const double phi = 0.5 * kPi * nu + 0.25 * kPi;
  const double c = std::cos(x) * std::cos(phi) + std::sin(x) * std::sin(phi);
  const double s = std::sin(x) * std::cos(phi) - std::cos(x) * std::sin(phi);
  return std::sqrt(2.0 / (kPi * x)) * (P * c - Q * s);
}

double bessel_j(double nu, double x) {
  require_domain(x >= 0.0, "bessel_j: x must be nonnegative");
  const bool structured = is_integer(nu) || is_half_integer(nu);
  require_domain(nu >= -0.5 || structured || nu > -1.0,
                 "bessel_j: order below -1 must be an integer or half-integer");
  if (is_integer(nu) && nu < 0.0) {
    const long m = static_cast<long>(-nu);
    return (m % 2 ? -1.0 : 1.0) * bessel_j(-nu, x);
  }
  if (x == 0.0) {
    if (nu == 0.0) return 1.0;
    if (nu > 0.0) return 0.0;
    detail::throw_domain("bessel_j: J_nu(0) is unbounded for negative non-integer order");
  }
  if (is_half_integer(nu)) {
    const double pref = std::sqrt(2.0 / (kPi * x));
    double jm = pref * std::cos(x);  // J_{-1/2}
    double jp = pref * std::sin(x);  // J_{1/2}
    if (nu == -0.5) return jm;
    if (nu == 0.5) return jp;
    if (nu < 0.0) {
      // Toward more negative order the recurrence follows the dominant solution.
      for (double m = -0.5; m > nu + 0.25; m -= 1.0) {
        const double next = (2.0 * m / x) * jm - jp;
        jp = jm;
        jm = next;
      }
      return jm;
    }
    if (x <= kBesselSwitchover) return bessel_j_series(nu, x);
    for (double m = 0.5; m < nu - 0.25; m += 1.0) {
      const double next = (2.0 * m / x) * jp - jm;
      jm = jp;
      jp = next;
    }
    return jp;
  }
  if (x <= kBesselSwitchover) return bessel_j_series(nu, x);
  return bessel_j_asymptotic(nu, x);
}

double bessel_j_scaled(double nu, double x) {
  require_domain(x >= 0.0, "bessel_j_scaled: x must be nonnegative");
  if (is_integer(nu) && nu < 0.0) {
    // J_{-m}(x) x^m = (-1)^m x^{2m} J_m(x) / x^m
    const long m = static_cast<long>(-nu);
    return (m % 2 ? -1.0 : 1.0) * std::pow(x, 2.0 * m) * bessel_j_scaled(-nu, x);
  }
  if (x >= 1.0) return bessel_j(nu, x) / std::pow(x, nu);
  return static_cast<double>(scaled_series(nu, x) / std::pow(2.0L, static_cast<long double>(nu)));
}

double SinPowerExpansion::eval(double t) const {
  double s = constant_term;
  for (const auto& [freq, coef] : cosine_coeffs) s += coef * std::cos(freq * t);
  return s;
}

SinPowerExpansion sin_power_expansion(int ell) {
  require_domain(ell >= 2 && ell % 2 == 0, "sin_power_expansion: ell must be even and >= 2");
  SinPowerExpansion e;
  e.ell = ell;
  e.constant_term = std::ldexp(binomial_int(ell, ell / 2), -ell);
  for (int i = 0; i < ell / 2; ++i) {
    const double sign = ((ell / 2 - i) % 2) ? -1.0 : 1.0;
    e.cosine_coeffs.emplace_back(ell - 2 * i, sign * std::ldexp(binomial_int(ell, i), 1 - ell));
  }
  return e;
}

double catalan_quadrature(int n, int ell, double rho) {
  require_domain(n >= 1, "catalan_quadrature: n must be positive");
  require_domain(ell >= 2 && ell % 2 == 0, "catalan_quadrature: ell must be even and >= 2");
  require_domain(rho >= 0.0, "catalan_quadrature: rho must be nonnegative");
  if (n == 1) return 2.0 * std::pow(std::sin(rho), ell);
  if (rho == 0.0) return 0.0;
  // t = cos(theta) removes the (1 - t^2)^{(n-3)/2} endpoint factor; the integrand is
  // symmetric about theta = pi/2 since ell is even.
  auto integrand = [&](double theta) {
    const double s = std::sin(rho * std::cos(theta));
    return std::pow(s, ell) * std::pow(std::sin(theta), n - 2);
  };
  const int panels = 1 + static_cast<int>(rho);
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = 0.5 * kPi * p / panels;
    const double b = 0.5 * kPi * (p + 1) / panels;
    total += integrate_adaptive(integrand, a, b, 1e-12);
  }
  const double sphere_lower = n == 2 ? 2.0 : unit_sphere_area(n - 1);
  return 2.0 * sphere_lower * total;
}

SphericalSineIntegral::SphericalSineIntegral(int n, int ell) : n_(n), ell_(ell), nu_(0.5 * n) {
  require_domain(n >= 1, "SphericalSineIntegral: n must be positive");
  require_domain(ell >= 2 && ell % 2 == 0, "SphericalSineIntegral: ell must be even and >= 2");
  const double area = unit_sphere_area(n);
  lambda_ = area * std::ldexp(binomial_int(ell, ell / 2), -ell);
  lambda_closed_form_ = 4.0 * std::pow(kPi, nu_) * std::tgamma(0.5 * (ell + 1)) /
                        (ell * std::tgamma(0.5 * ell) * std::tgamma(nu_));
  const double two_pi_nu = std::pow(2.0 * kPi, nu_);
  for (int i = 0; i < ell / 2; ++i) {
    const double sign = ((ell / 2 - i) % 2) ? -1.0 : 1.0;
    C_.push_back(sign * two_pi_nu * std::ldexp(binomial_int(ell, i), 1 - ell));
    ell_i_.push_back(ell - 2 * i);
  }
  // J_{nu-1}(z)/z^{nu-1} = sum_k (-1)^k (z/2)^{2k} / (2^{nu-1} k! Gamma(k+nu)).
  const int K = 80;
  series_.assign(K, 0.0);
  for (int k = ell / 2; k < K; ++k) {
    long double a = 0.0L;
    for (std::size_t i = 0; i < C_.size(); ++i) {
      const long double z = ell_i_[i];
      a += C_[i] * std::pow(z / 2.0L, 2.0L * k) / std::tgamma(k + 1.0L) / std::tgamma(k + nu_);
    }
    a /= std::pow(2.0L, static_cast<long double>(nu_) - 1.0L);
    series_[k] = static_cast<double>((k % 2) ? -a : a);
    if (k > ell && std::abs(series_[k]) < 1e-300) {
      series_.resize(k + 1);
      break;
    }
  }
}

double SphericalSineIntegral::eval_expansion(double rho) const {
  double v = lambda_;
  for (std::size_t i = 0; i < C_.size(); ++i) v += C_[i] * bessel_j_scaled(nu_ - 1.0, ell_i_[i] * rho);
  return v;
}

double SphericalSineIntegral::eval(double rho) const {
  require_domain(rho >= 0.0, "SphericalSineIntegral::eval: rho must be nonnegative");
  if (rho > 1.0) return eval_expansion(rho);
  const double r2 = rho * rho;
  double s = 0.0;
  for (std::size_t k = series_.size(); k-- > 0;) s = s * r2 + series_[k];
  return s;
}

Jet SphericalSineIntegral::jet(double rho, int order) const {
  require_domain(rho >= 0.0, "SphericalSineIntegral::jet: rho must be nonnegative");
  Jet out(order);
  if (rho <= 1.0) {
    for (int j = 0; j <= order; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < series_.size(); ++k) {
        const int p = 2 * static_cast<int>(k);
        if (p < j || series_[k] == 0.0) continue;
        double fall = 1.0;
        for (int i = 0; i < j; ++i) fall *= (p - i);
        s += series_[k] * fall * std::pow(rho, p - j);
      }
      out[j] = s;
    }
    return out;
  }
  // G_mu(z) = J_mu(z)/z^mu as a function of s = z^2/2 has d/ds G_mu = -G_{mu+1}.
  out[0] = lambda_;
  for (std::size_t i = 0; i < C_.size(); ++i) {
    const double li = ell_i_[i];
    const double z = li * rho;
    std::vector<double> outer(order + 1);
    for (int j = 0; j <= order; ++j)
      outer[j] = ((j % 2) ? -1.0 : 1.0) * bessel_j_scaled(nu_ - 1.0 + j, z);
    Jet s(order, 0.5 * z * z);
    if (order >= 1) s[1] = li * li * rho;
    if (order >= 2) s[2] = li * li;
    out += C_[i] * compose(outer, s);
  }
  return out;
}

double quotient_derivative(std::span<const double> u_derivs, std::span<const double> v_derivs,
                           int k) {
  require_domain(k >= 0, "quotient_derivative: k must be nonnegative");
  require_structure(static_cast<int>(u_derivs.size()) > k && static_cast<int>(v_derivs.size()) > k,
                    "quotient_derivative: derivative lists shorter than k + 1");
  require_domain(v_derivs[0] != 0.0, "quotient_derivative: v vanishes at the point");
  std::vector<double> q(k + 1);
  std::vector<double> fact(k + 2, 1.0);
  for (int i = 1; i <= k + 1; ++i) fact[i] = fact[i - 1] * i;
  // (u/v)^{(m)} = (u^{(m)} - m! sum_{j=1}^m v^{(m+1-j)}/(m+1-j)! (u/v)^{(j-1)}/(j-1)!) / v
  for (int m = 0; m <= k; ++m) {
    double s = 0.0;
    for (int j = 1; j <= m; ++j)
      s += v_derivs[m + 1 - j] / fact[m + 1 - j] * q[j - 1] / fact[j - 1];
    q[m] = (u_derivs[m] - fact[m] * s) / v_derivs[0];
  }
  return q[k];
}

double reciprocal_derivative(std::span<const double> v_derivs, int k) {
  require_domain(k >= 0, "reciprocal_derivative: k must be nonnegative");
  require_structure(static_cast<int>(v_derivs.size()) > k,
                    "reciprocal_derivative: derivative list shorter than k + 1");
  require_domain(v_derivs[0] != 0.0, "reciprocal_derivative: v vanishes at the point");
  const double v = v_derivs[0];
  if (k == 0) return 1.0 / v;
  std::span<const double> tail = v_derivs.subspan(1);
  double s = 0.0;
  double fact = 1.0;
  for (int j = 1; j <= k; ++j) {
    fact *= j;
    s += ((j % 2) ? -1.0 : 1.0) * fact * std::pow(v, -j - 1) * partial_bell(k, j, tail);
  }
  return s;
}

std::vector<std::pair<int, double>> radial_derivative_coeffs(int m) {
  require_domain(m >= 1, "radial_derivative_coeffs: m must be positive");
  // c[k] for the current m; c_{k,m+1} = c_{k-1,m} + (k - 2m) c_{k,m}.
  std::vector<double> c(m + 2, 0.0);
  c[1] = 1.0;
  for (int cur = 1; cur < m; ++cur) {
    std::vector<double> next(m + 2, 0.0);
    for (int k = 1; k <= cur + 1; ++k) next[k] = c[k - 1] + (k - 2 * cur) * c[k];
    c = std::move(next);
  }
  std::vector<std::pair<int, double>> out;
  for (int k = 1; k <= m; ++k) out.emplace_back(k, c[k]);
  return out;
}

double hurwitz_zeta(double s, double a) {
  require_domain(s != 1.0, "hurwitz_zeta: pole at s = 1");
  require_domain(a > 0.0, "hurwitz_zeta: a must be positive");
  constexpr int N = 10;
  static constexpr double B2j[] = {1.0 / 6.0,   -1.0 / 30.0, 1.0 / 42.0,      -1.0 / 30.0,
                                   5.0 / 66.0,  -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0};
  double sum = 0.0;
  for (int k = 0; k < N; ++k) sum += std::pow(k + a, -s);
  const double x = N + a;
  sum += std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
  // B_{2j}/(2j)! * s(s+1)...(s+2j-2) * x^{-s-2j+1}
  double rising = s;
  double fact = 2.0;
  for (int j = 1; j <= 8; ++j) {
    sum += B2j[j - 1] / fact * rising * std::pow(x, -s - 2.0 * j + 1.0);
    rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
    fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
  }
  return sum;
}

}  // namespace fraclab
