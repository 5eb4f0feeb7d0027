#pragma once

#include <span>
#include <utility>
#include <vector>

#include "fraclab/jet.hpp"

namespace fraclab {

/// binom(alpha, k) by the multiplicative recurrence.
double frac_binomial(double alpha, long k);

/// Upper bound on sum_{k>K} |binom(alpha, k)|. Zero when alpha is an integer <= K.
/// Requires K >= ceil(alpha) + 1 otherwise.
double frac_binomial_tail(double alpha, long K);

/// c(alpha) = sum_k |binom(alpha, k)|, summed to the tail bound 1e-12.
double frac_binomial_abs_sum(double alpha);

/// Bessel function of the first kind. Series for x <= 20, Hankel asymptotics
/// beyond, elementary recurrences for half-integer orders. nu >= -1/2, or any
/// integer / half-integer order.
double bessel_j(double nu, double x);

/// J_nu(x) / x^nu, finite at x = 0.
double bessel_j_scaled(double nu, double x);

/// Hurwitz zeta sum_{k>=0} (k+a)^{-s} for a > 0, continued analytically to s < 1
/// (Euler-Maclaurin with ten explicit terms); s = 1 is a domain error.
double hurwitz_zeta(double s, double a);

/// Switchover point between the power series and the asymptotic expansion.
inline constexpr double kBesselSwitchover = 20.0;

/// Branch access for the overlap-window test.
double bessel_j_series(double nu, double x);
double bessel_j_asymptotic(double nu, double x);

struct SinPowerExpansion {
  int ell = 0;
  double constant_term = 0.0;
  /// (frequency ell - 2i, coefficient) for i = 0 .. ell/2 - 1.
  std::vector<std::pair<int, double>> cosine_coeffs;

  double eval(double t) const;
};

SinPowerExpansion sin_power_expansion(int ell);

/// Brute-force V(rho) = integral of sin^ell(rho * sigma_1) over S^{n-1}, n >= 2.
double catalan_quadrature(int n, int ell, double rho);

/// V(rho) = lambda + sum_i C_i J_{nu-1}(ell_i rho) / (ell_i rho)^{nu-1}.
class SphericalSineIntegral {
 public:
  SphericalSineIntegral(int n, int ell);

  int n() const { return n_; }
  int ell() const { return ell_; }
  double nu() const { return nu_; }
  double lambda() const { return lambda_; }
  /// 4 pi^nu Gamma((ell+1)/2) / (ell Gamma(nu) Gamma(ell/2)) form; equals sqrt(pi) lambda().
  double lambda_closed_form() const { return lambda_closed_form_; }
  const std::vector<double>& C() const { return C_; }
  const std::vector<int>& ell_i() const { return ell_i_; }
  /// Taylor coefficients a_k with V = sum_k a_k rho^{2k}; a_k = 0 for k < ell/2.
  const std::vector<double>& series() const { return series_; }

  double eval(double rho) const;            ///< series for rho <= 1, Bessel form beyond
  double eval_expansion(double rho) const;  ///< Bessel form at every rho
  Jet jet(double rho, int order) const;     ///< derivatives of V at rho

 private:
  int n_;
  int ell_;
  double nu_;
  double lambda_;
  double lambda_closed_form_;
  std::vector<double> C_;
  std::vector<int> ell_i_;
  std::vector<double> series_;
};

/// k-th derivative of u/v from derivative lists (index j = j-th derivative).
double quotient_derivative(std::span<const double> u_derivs, std::span<const double> v_derivs,
                           int k);

/// k-th derivative of 1/v via partial Bell polynomials.
double reciprocal_derivative(std::span<const double> v_derivs, int k);

/// (t^{-1} d/dt)^m f = sum_k c_{k,m} f^{(k)} t^{k-2m}; returns (k, c_{k,m}) for k = 1..m.
std::vector<std::pair<int, double>> radial_derivative_coeffs(int m);

}  // namespace fraclab
