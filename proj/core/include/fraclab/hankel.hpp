#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fraclab/jet.hpp"
#include "fraclab/numerics.hpp"
#include "fraclab/symbols.hpp"

namespace fraclab {

/// Jet of a radial profile f(t) up to the requested order.
using ProfileJet = std::function<Jet(double, int)>;

/// Abel regularization settings for inverse radial transforms: the factor e^{-eps t}
/// is applied for each eps in `eps_sequence` (strictly decreasing) and the results are
/// Neville-extrapolated to eps = 0. Integration stops at t = decay_cutoff / eps_min.
struct Regularization {
  std::vector<double> eps_sequence{0.2, 0.1, 0.05, 0.025, 0.0125};
  double decay_cutoff = 36.0;
  /// Relative extrapolation error above which the result is rejected.
  double max_relative_error = 1e-3;
};

/// Precomputed quadrature for
///   F_eps(r) = (2 pi)^{-nu} r^{1-nu} int_a^b e^{-eps t} f(t) t^nu J_{nu-1}(r t) dt,
/// nu = n/2, on fixed Gauss-Legendre nodes. With lift m > 0 the integrand is moved to
///   (-1)^m r^{-m} sum_k c_{k,m} g^{(k)}(t) t^{nu+k-m} J_{nu+m-1}(r t),  g = e^{-eps t} f,
/// which equals the plain form whenever the boundary terms vanish.
class RadialTransformPlan {
 public:
  /// `breakpoints` (sorted, at least two) bound the panels; each gap is cut into
  /// panels no wider than `panel_width`.
  RadialTransformPlan(int n, std::vector<double> breakpoints, double panel_width,
                      const ProfileJet& f, std::vector<double> eps, int lift = 0,
                      int gl_order = 12);

  /// One regularized value per eps.
  std::vector<double> evaluate(double r) const;
  /// Neville extrapolation of evaluate(r) to eps = 0.
  Extrapolation extrapolate(double r) const;

  /// Boundary terms of the lift at both ends for the smallest eps; throws DomainError
  /// naming the limit when one exceeds `tol` relative to the integrand scale.
  void check_lift_boundaries(double r, double tol = 1e-8) const;

  int n() const { return n_; }
  int lift() const { return lift_; }
  std::size_t node_count() const { return t_.size(); }
  const std::vector<double>& eps() const { return eps_; }

 private:
  int n_;
  double nu_;
  int lift_;
  double a_;
  double b_;
  std::vector<double> eps_;
  std::vector<double> t_;
  std::vector<std::vector<double>> coef_;  ///< [eps][node]
  Jet f_a_;
  Jet f_b_;
  double scale_ = 0.0;
};

/// Regularized inverse radial Fourier transform of a bounded profile (its value at
/// infinity already subtracted) at r > 0. Breakpoints default to [0, T].
struct RadialTransformResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::vector<double> eps;
  std::vector<double> regularized;
};
RadialTransformResult radial_inverse_fourier(const RadialSymbol& symbol, int n, double r,
                                             const Regularization& reg = {});

/// int_a^b f(t) t^nu J_{nu-1}(r t) dt computed in lifted form with m >= 0 steps.
/// Boundary terms at a and b must vanish; a violation raises DomainError naming the limit.
double hankel_tail_lift(const ProfileJet& f, double nu, int m, double r, double a, double b,
                        int panels_per_unit = 64);
/// The same integral without lifting.
double hankel_direct(const ProfileJet& f, double nu, double r, double a, double b,
                     int panels_per_unit = 64);

/// c + int a for the kernel a = F^{-1}[A - A(infty)] of the transference symbol, with
/// c = A(infty). The radial integral runs to R on a graded grid; the eps -> 0 limit is
/// extrapolated and the far-field tail is added from the non-smooth small-t terms.
struct KernelMassOptions {
  double radius = 20.0;
  Regularization reg{{0.4, 0.2, 0.1, 0.05}, 36.0, 1e-2};
  int r_panels_per_unit = 6;
};
struct KernelMassResult {
  double c = 0.0;
  double truncated_mass = 0.0;  ///< int_{|x|<R} a, extrapolated to eps = 0
  double tail = 0.0;            ///< analytic far-field mass beyond R
  double total = 0.0;           ///< c + truncated_mass + tail
  double extrapolation_error = 0.0;
  std::vector<double> eps;
  std::vector<double> regularized_mass;
};
KernelMassResult kernel_mass(int n, int ell, double alpha, const KernelMassOptions& options = {});

/// Decay probe for a3 = F^{-1}[mu3 (B - B(infty))] in R^n.
struct A3ProbeOptions {
  double eps = 1.0;
  double delta = 1.0;
  double N = 10.0;
  Regularization reg{{0.4, 0.2, 0.1, 0.05}, 36.0, 1e-1};
  double lift_from = 4.0;  ///< lift m = 2 for r >= lift_from
  std::vector<double> small_window{0.01, 0.1};
  std::vector<double> mid_window{4.0, 6.0};
  std::vector<double> far_window{40.0, 60.0};
  int window_samples = 24;
};
struct A3ProbeReport {
  std::vector<double> r;
  std::vector<double> value;
  std::vector<double> error_estimate;
  double small_r_exponent = 0.0;  ///< slope of log|a3| vs log r on small_window
  double mid_slope = 0.0;         ///< envelope slope on mid_window
  double far_slope = 0.0;         ///< envelope slope on far_window
  double radial_mass_inner = 0.0; ///< int_0^{R/2} |a3| r^{n-1} dr on the sampled list
  double radial_mass_outer = 0.0; ///< same up to R = max(r_list)
  bool steepening = false;
};
A3ProbeReport a3_decay_probe(int n, int ell, double alpha, const std::vector<double>& r_list,
                             const A3ProbeOptions& options = {});

}  // namespace fraclab
