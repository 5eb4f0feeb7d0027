#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fraclab/fields.hpp"
#include "fraclab/report.hpp"

namespace fraclab {

/// Parameters of the fractional operators. eps doubles as the semigroup time t.
struct OperatorSpec {
  double alpha = 0.5;
  int ell = 2;
  double eps = 0.1;
  double series_tol = 1e-10;
  int shells_per_decade = 24;     ///< log-spaced radial shells of the quadrature path
  int gl_order = 8;
  int angular_points = 128;       ///< n = 2 only
  double y_max = 0.0;             ///< 0: L / (ell + 1)
  std::size_t max_shifts = 4000000;  ///< budget of shifted-field evaluations

  /// alpha in (0, ell), ell even, eps > 0, positive tolerances.
  void validate() const;
};

enum class PoissonPath { spectral, convolution };

/// P_t f: multiplier e^{-t|xi|}, or circular convolution with the periodized kernel
/// c_n t / (|x|^2 + t^2)^{(n+1)/2} sampled in physical space.
Field poisson_apply(const Field& f, double t, PoissonPath path = PoissonPath::spectral);

/// Periodized Poisson kernel sampled on the grid: closed form in 1-D, image sums plus a
/// mass-restoring constant in 2-D and 3-D.
Field poisson_kernel_physical(const Grid& grid, double t);

/// sum_j (-1)^j binom(ell, j) f(x - j h).
Field finite_difference(const Field& f, std::span<const double> h, int ell,
                        ShiftMethod method = ShiftMethod::spectral);

enum class DifferencePath { spectral, series };

struct SeriesInfo {
  long terms = 0;             ///< K: the series runs over k = 0..K
  double tail_bound = 0.0;    ///< bound on the sup-norm of the omitted terms
};

/// (I - P_t)^alpha f. Spectral: multiplier (1 - e^{-t|xi|})^alpha. Series: the binomial
/// series in P_{kt}, truncated once the omitted terms are below tol in sup norm.
Field frac_poisson_difference(const Field& f, double t, double alpha, double tol = 1e-10,
                              DifferencePath path = DifferencePath::spectral,
                              SeriesInfo* info = nullptr);

/// eps^{-alpha} (I - P_eps)^alpha f.
Field normalized_difference(const Field& f, double eps, double alpha,
                            DifferencePath path = DifferencePath::spectral);

/// gamma_n(alpha) = 2^alpha pi^{n/2} Gamma(alpha/2) / Gamma((n - alpha)/2).
double riesz_gamma(int n, double alpha);

/// I^alpha f: multiplier |xi|^{-alpha}, 0 < alpha < n. The DC coefficient is zeroed.
Field riesz_potential(const Field& f, double alpha, Diagnostics* diag = nullptr);

/// I^alpha f by direct convolution with the periodized kernel |x|^{alpha-1}/gamma_1(alpha)
/// (Hurwitz-zeta lattice sum) and a singular-endpoint correction. n = 1, zero-mean f.
Field riesz_potential_kernel(const Field& f, double alpha);

/// G^alpha f: multiplier (1 + |xi|^2)^{-alpha/2}.
Field bessel_potential(const Field& f, double alpha);

/// G^2 f in 1-D by convolution with the periodized kernel e^{-|x|}/2 and a kink correction.
Field bessel_potential_kernel(const Field& f, double alpha);

enum class HypersingularPath { spectral, quadrature };

struct QuadratureInfo {
  double y_max = 0.0;
  std::size_t shifts = 0;      ///< shifted fields evaluated
  double tail_bound = 0.0;     ///< sup-norm bound on what the tail treatment leaves out
};

/// Truncated hypersingular integral with the centered difference of step 2y,
///   D_eps f = (1/d) int_{|y|>eps} sum_j (-1)^j binom(ell,j) f(x + (ell - 2j) y) |y|^{-n-alpha} dy,
/// whose multiplier is w(eps|xi|) |xi|^alpha. Quadrature: Gauss-Legendre on log shells of
/// (eps, y_max]; beyond y_max the constant part is exact and, in 1-D, the oscillating part
/// is integrated over further periods with an integration-by-parts remainder.
Field hypersingular_truncated(const Field& f, const OperatorSpec& spec,
                              HypersingularPath path = HypersingularPath::spectral,
                              QuadratureInfo* info = nullptr);

/// Spectral |xi|^alpha f.
Field riesz_derivative_spectral(const Field& f, double alpha);

struct RieszDerivativeResult {
  Field value;                 ///< finest iterate
  ConvergenceReport report;    ///< error_norm = L2 distance to the previous iterate
  bool cauchy = false;         ///< successive differences shrink along the sequence
};

/// D_eps f along a strictly decreasing eps sequence; no extrapolation.
RieszDerivativeResult riesz_derivative(const Field& f, double alpha, int ell,
                                       const std::vector<double>& eps_sequence,
                                       HypersingularPath path = HypersingularPath::spectral);

}  // namespace fraclab
