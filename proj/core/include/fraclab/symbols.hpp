#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fraclab/jet.hpp"
#include "fraclab/special.hpp"

namespace fraclab {

/// I(X) = int_X^infty J_mu(x) x^{-beta} dx for X >= 1. Unit-width panels (scaled by
/// 1/resolution) are tabulated up to x_far; beyond it the by-parts relation
/// int_X J_mu x^{-b} = J_{mu-1}(X) X^{-b} + (mu-1-b) int_X J_{mu-1} x^{-b-1}
/// is unrolled until the terms are negligible.
class BesselPowerTail {
 public:
  BesselPowerTail(double mu, double beta, double resolution = 1.0);
  double eval(double X) const;
  double by_parts(double X) const;  ///< series only; accurate for X >= x_far()
  double x_far() const { return x_far_; }

 private:
  double integrand(double x) const;
  double mu_;
  double beta_;
  double panel_;
  double x_start_ = 1.0;
  double x_far_;
  double far_value_ = 0.0;  ///< by_parts(x_far_)
  std::vector<double> cumulative_;  ///< cumulative_[k] = int from x_start + k*panel to x_far
};

/// w(r) = c int_r^infty V(rho) rho^{-1-alpha} d rho with c fixed by w(0) = 1, and the
/// transference symbols A(r) = ((1-e^{-r})/r)^alpha / w(r), B = 1/A.
class HypersingularSymbol {
 public:
  HypersingularSymbol(int n, int ell, double alpha, double resolution = 1.0);

  int n() const { return V_.n(); }
  int ell() const { return V_.ell(); }
  double alpha() const { return alpha_; }
  double nu() const { return V_.nu(); }
  const SphericalSineIntegral& V() const { return V_; }

  /// T(r) = int_r^infty V rho^{-1-alpha}; T(0) = T0.
  double T(double r) const;
  double T0() const { return T0_; }
  /// d_{n,ell}(alpha) = (2i)^ell T0, real because ell is even.
  double d() const;
  /// c = (2i)^ell / d = 1 / T0.
  double c() const { return 1.0 / T0_; }

  double w(double r) const;
  Jet w_jet(double r, int order) const;
  double A(double r) const;
  double B(double r) const;
  Jet A_jet(double r, int order) const;
  /// Derivatives of B from those of A through the reciprocal recurrence.
  Jet B_jet(double r, int order) const;

  /// lim_{r->infty} B = c lambda / alpha.
  double B_infinity() const { return c() * V_.lambda() / alpha_; }
  /// lambda / alpha, the limit without the factor c.
  double B_infinity_uncorrected() const { return V_.lambda() / alpha_; }
  double A_infinity() const { return 1.0 / B_infinity(); }

  /// c [lambda/alpha + r^{-nu} sum_i C_i ell_i^{-nu} J_{nu-2}(ell_i r)], r >= 10.
  double B_asymptotic(double r, bool with_bessel_term) const;
  /// Size of the first omitted term, c sum_i |C_i| (2+alpha) ell_i^{-nu-1} r^{-nu-1} |J_{nu-3}(ell_i r)|.
  double B_asymptotic_next_term(double r) const;

  /// w(r) = 1 - kappa r^{ell-alpha} + O(r^{ell-alpha+2}).
  double small_r_kappa() const;

 private:
  double head(double r) const;  ///< int_0^r V rho^{-1-alpha} for r <= 1 (series)
  double check_positive(double w, double r) const;

  double alpha_;
  SphericalSineIntegral V_;
  BesselPowerTail tail_;
  double T0_ = 0.0;
  double T1_ = 0.0;
};

/// Process-wide cache of symbols keyed by (n, ell, alpha); internally synchronized.
const HypersingularSymbol& hypersingular_symbol(int n, int ell, double alpha);

double hypersingular_constant(int n, int ell, double alpha, double resolution = 1.0);
double w_eval(int n, int ell, double alpha, double r);
double A_eval(int n, int ell, double alpha, double r);
double B_eval(int n, int ell, double alpha, double r);
double B_asymptotic(int n, int ell, double alpha, double r, bool with_bessel_term);

/// Radial function of r >= 0 with derivative access. Jets are analytic when supplied,
/// otherwise Richardson-extrapolated central differences with steps proportional to r.
class RadialSymbol {
 public:
  using Eval = std::function<double(double)>;
  using JetFn = std::function<Jet(double, int)>;

  RadialSymbol(std::string name, Eval eval, JetFn jet = {});

  const std::string& name() const { return name_; }
  double operator()(double r) const { return eval_(r); }
  double eval(double r) const { return eval_(r); }
  bool has_analytic_derivatives() const { return static_cast<bool>(jet_); }
  /// deriv(0, r) == eval(r).
  double deriv(int k, double r) const;
  Jet jet(double r, int order) const;
  Jet jet_finite_difference(double r, int order) const;
  /// M(eps r), with chain-rule derivatives.
  RadialSymbol dilate(double eps) const;

  bool singular_at_zero = false;
  std::optional<double> limit_at_infinity;

 private:
  std::string name_;
  Eval eval_;
  JetFn jet_;
};

RadialSymbol constant_symbol(double value);
RadialSymbol sine_symbol();
RadialSymbol product(const RadialSymbol& a, const RadialSymbol& b);
RadialSymbol difference(const RadialSymbol& a, double shift);  ///< a - shift
RadialSymbol symbol_w(const HypersingularSymbol& s);
RadialSymbol symbol_A(const HypersingularSymbol& s);
RadialSymbol symbol_B(const HypersingularSymbol& s);

/// Smooth cutoffs built from the exp(-1/t) smoothstep: mu1 = 1 on [0, eps] and 0 past
/// eps + delta; mu3 = 0 below N - delta and 1 on [N, infty); mu2 = 1 - mu1 - mu3.
struct PartitionOfUnity {
  double eps = 1.0;
  double delta = 1.0;
  double N = 10.0;
  std::array<RadialSymbol, 3> mu;
};
PartitionOfUnity partition_unity(double eps = 1.0, double delta = 1.0, double N = 10.0);

/// Smoothstep S(t) = phi(t)/(phi(t)+phi(1-t)), phi(t) = e^{-1/t} for t > 0, as a jet.
Jet smoothstep_jet(double t, int order);

struct MikhlinGrid {
  double r_min = 1e-6;
  double r_max = 1e6;
  int points_per_decade = 60;
};

struct MikhlinBound {
  int k = 0;
  double sup_bound = 0.0;
  double argmax = 0.0;
  double refinement_delta = 0.0;   ///< relative change under points-per-decade doubling
  double inner_sup = 0.0;          ///< sup over the grid shrunk by one decade at each end
  bool divergent = false;          ///< sup keeps growing with grid extent
  double dilation_spread = 0.0;    ///< max relative deviation of dilated sups from eps = 1
};

struct MikhlinAudit {
  std::string symbol;
  int n = 1;
  int k_max = 0;
  MikhlinGrid grid;
  std::vector<double> dilations;
  std::vector<MikhlinBound> bounds;
  bool divergence_flagged = false;
  bool finite() const;
};

struct MikhlinOptions {
  int n = 1;  ///< dimension under audit; k_max <= n
  MikhlinGrid grid;
  std::vector<double> dilations{1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
  double divergence_ratio = 1.5;
};

MikhlinAudit mikhlin_audit(const RadialSymbol& symbol, int k_max, const MikhlinOptions& options);

}  // namespace fraclab
