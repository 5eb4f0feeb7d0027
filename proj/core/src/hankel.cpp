#include "fraclab/hankel.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "fraclab/error.hpp"
#include "fraclab/special.hpp"

namespace fraclab {

namespace {

constexpr double kPi = std::numbers::pi;

double binom(int n, int k) {
  double b = 1.0;
  for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
  return b;
}

// Derivatives of g = e^{-eps t} f from those of f.
Jet damped(const Jet& f, double eps, double t) {
  const int order = f.order();
  Jet g(order);
  const double e = std::exp(-eps * t);
  for (int k = 0; k <= order; ++k) {
    double s = 0.0;
    for (int i = 0; i <= k; ++i) s += binom(k, i) * std::pow(-eps, k - i) * f[i];
    g[k] = e * s;
  }
  return g;
}

// (t^{-1} d/dt)^j g = sum_k c_{k,j} g^{(k)} t^{k-2j}.
double radial_power_derivative(const Jet& g, int j, double t) {
  if (j == 0) return g[0];
  double s = 0.0;
  for (const auto& [k, c] : radial_derivative_coeffs(j)) s += c * g[k] * std::pow(t, k - 2 * j);
  return s;
}

// Lifted integrand without the (-1)^m r^{-m} factor.
double lifted_weight(const Jet& g, double nu, int m, double t) {
  if (m == 0) return g[0] * std::pow(t, nu);
  double s = 0.0;
  for (const auto& [k, c] : radial_derivative_coeffs(m)) s += c * g[k] * std::pow(t, nu + k - m);
  return s;
}

// Boundary term produced by the j-th integration by parts, evaluated at t.
double boundary_term(const Jet& g, double nu, int j, double r, double t) {
  return radial_power_derivative(g, j - 1, t) * std::pow(t, nu + j - 1) *
         bessel_j(nu + j - 1, r * t) / r;
}

void check_boundaries(const Jet& ga, const Jet& gb, double nu, int m, double r, double a,
                      double b, double scale, double tol) {
  for (int j = 1; j <= m; ++j) {
    const double lower = a > 0.0 ? boundary_term(ga, nu, j, r, a) : 0.0;
    const double upper = boundary_term(gb, nu, j, r, b);
    for (const auto& [value, t, label] : {std::tuple{lower, a, "lower"}, std::tuple{upper, b, "upper"}}) {
      if (std::abs(value) > tol * std::max(scale, 1e-300)) {
        std::ostringstream os;
        os << "hankel lift: boundary term of step " << j << " does not vanish at the " << label
           << " limit t = " << t << " (value " << value << ")";
        detail::throw_domain(os.str());
      }
    }
  }
}

std::vector<double> panel_nodes(const std::vector<double>& breaks, double width, int order,
                                std::vector<double>* weights) {
  const GaussRule& rule = gauss_legendre(order);
  std::vector<double> t;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = breaks[i + 1];
    if (!(b > a)) continue;
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = a + (p + 0.5) * h;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        t.push_back(mid + 0.5 * h * rule.nodes[q]);
        weights->push_back(0.5 * h * rule.weights[q]);
      }
    }
  }
  return t;
}

}  // namespace

RadialTransformPlan::RadialTransformPlan(int n, std::vector<double> breakpoints, double panel_width,
                                         const ProfileJet& f, std::vector<double> eps, int lift,
                                         int gl_order)
    : n_(n), nu_(0.5 * n), lift_(lift), eps_(std::move(eps)) {
  require_domain(n >= 1, "transform plan: n must be >= 1");
  require_domain(lift >= 0, "transform plan: lift must be >= 0");
  require_domain(panel_width > 0.0, "transform plan: panel width must be positive");
  require_domain(breakpoints.size() >= 2 && std::is_sorted(breakpoints.begin(), breakpoints.end()) &&
                     breakpoints.front() >= 0.0,
                 "transform plan: breakpoints must be sorted, nonnegative, at least two");
  require_domain(!eps_.empty(), "transform plan: eps list is empty");
  for (std::size_t i = 0; i < eps_.size(); ++i)
    require_domain(eps_[i] >= 0.0 && (i == 0 || eps_[i] < eps_[i - 1]),
                   "transform plan: eps must be nonnegative and strictly decreasing");
  a_ = breakpoints.front();
  b_ = breakpoints.back();
  std::vector<double> w;
  t_ = panel_nodes(breakpoints, panel_width, gl_order, &w);
  coef_.assign(eps_.size(), std::vector<double>(t_.size()));
  for (std::size_t j = 0; j < t_.size(); ++j) {
    const Jet fj = f(t_[j], lift_);
    scale_ = std::max(scale_, std::abs(fj[0]) * std::pow(t_[j], nu_));
    for (std::size_t e = 0; e < eps_.size(); ++e)
      coef_[e][j] = w[j] * lifted_weight(damped(fj, eps_[e], t_[j]), nu_, lift_, t_[j]);
  }
  f_a_ = f(a_, lift_);
  f_b_ = f(b_, lift_);
}

std::vector<double> RadialTransformPlan::evaluate(double r) const {
  require_domain(r > 0.0, "radial transform: r must be positive");
  const double order = nu_ + lift_ - 1.0;
  std::vector<double> acc(eps_.size(), 0.0);
  for (std::size_t j = 0; j < t_.size(); ++j) {
    const double J = bessel_j(order, r * t_[j]);
    for (std::size_t e = 0; e < eps_.size(); ++e) acc[e] += coef_[e][j] * J;
  }
  const double pref = std::pow(2.0 * kPi, -nu_) * std::pow(r, 1.0 - nu_) *
                      ((lift_ % 2) ? -1.0 : 1.0) * std::pow(r, -lift_);
  for (double& v : acc) v *= pref;
  return acc;
}

Extrapolation RadialTransformPlan::extrapolate(double r) const {
  const std::vector<double> y = evaluate(r);
  if (eps_.size() == 1) return {y[0], 0.0};
  return extrapolate_to_zero(eps_, y);
}

void RadialTransformPlan::check_lift_boundaries(double r, double tol) const {
  const double e = eps_.back();
  check_boundaries(damped(f_a_, e, a_), damped(f_b_, e, b_), nu_, lift_, r, a_, b_, scale_, tol);
}

RadialTransformResult radial_inverse_fourier(const RadialSymbol& symbol, int n, double r,
                                             const Regularization& reg) {
  require_domain(r > 0.0, "radial_inverse_fourier: r must be positive");
  require_domain(reg.eps_sequence.size() >= 2, "radial_inverse_fourier: need at least two eps values");
  const double T = reg.decay_cutoff / reg.eps_sequence.back();
  const ProfileJet f = [&symbol](double t, int order) { return Jet(order, symbol(t)); };
  const double width = std::min(0.5, 2.5 / r);
  const RadialTransformPlan plan(n, {0.0, 1e-3, 1e-2, 1e-1, 1.0, T}, width, f, reg.eps_sequence);
  RadialTransformResult out;
  out.eps = reg.eps_sequence;
  out.regularized = plan.evaluate(r);
  const Extrapolation x = extrapolate_to_zero(out.eps, out.regularized);
  out.value = x.value;
  out.error_estimate = x.error_estimate;
  double scale = 0.0;
  for (double v : out.regularized) scale = std::max(scale, std::abs(v));
  if (x.error_estimate > reg.max_relative_error * std::max(std::abs(x.value), 1e-3 * scale)) {
    std::ostringstream os;
    os << "radial_inverse_fourier: eps extrapolation did not converge at r = " << r
       << "; last regularized values";
    for (std::size_t i = out.eps.size() >= 3 ? out.eps.size() - 3 : 0; i < out.eps.size(); ++i)
      os << " (eps " << out.eps[i] << ": " << out.regularized[i] << ")";
    os << ", error estimate " << x.error_estimate;
    throw NumericalError(os.str());
  }
  return out;
}

double hankel_direct(const ProfileJet& f, double nu, double r, double a, double b, int panels_per_unit) {
  return hankel_tail_lift(f, nu, 0, r, a, b, panels_per_unit);
}

double hankel_tail_lift(const ProfileJet& f, double nu, int m, double r, double a, double b,
                        int panels_per_unit) {
  require_domain(m >= 0, "hankel_tail_lift: m must be >= 0");
  require_domain(r > 0.0 && b > a && a >= 0.0, "hankel_tail_lift: need r > 0 and 0 <= a < b");
  const double width = std::min(1.0 / panels_per_unit, 2.0 / r);
  std::vector<double> w;
  const std::vector<double> t = panel_nodes({a, b}, width, 12, &w);
  double scale = 0.0;
  double sum = 0.0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    const Jet g = f(t[j], m);
    scale = std::max(scale, std::abs(g[0]) * std::pow(t[j], nu));
    sum += w[j] * lifted_weight(g, nu, m, t[j]) * bessel_j(nu + m - 1.0, r * t[j]);
  }
  if (m > 0) check_boundaries(f(a, m), f(b, m), nu, m, r, a, b, scale, 1e-10);
  return ((m % 2) ? -1.0 : 1.0) * std::pow(r, -m) * sum;
}

namespace {

// F^{-1}[|xi|^s] = C_{n,s} |x|^{-n-s}; zero when s is an even integer.
double riesz_kernel_constant(int n, double s) {
  const double half = 0.5 * s;
  if (std::abs(half - std::round(half)) < 1e-12 && half >= 0.0) return 0.0;
  return std::pow(2.0, s) * std::tgamma(0.5 * (n + s)) / (std::pow(kPi, 0.5 * n) * std::tgamma(-half));
}

struct PowerTerm {
  double power;
  double coef;
};

// Non-smooth small-t terms of A(t): A = h^alpha / w with h = (1 - e^{-t})/t and
// 1/w = 1 + kappa t^s + kappa^2 t^{2s} + kappa2 t^{s+2} + ..., s = ell - alpha.
std::vector<PowerTerm> small_t_terms(const HypersingularSymbol& sym) {
  const double a = sym.alpha();
  const double h[4] = {1.0, -0.5 * a, a / 24.0 + a * a / 8.0, -(a * a * a + a * a) / 48.0};
  const double s = sym.ell() - a;
  const double kappa = sym.small_r_kappa();
  const int k1 = sym.ell() / 2 + 1;
  const double kappa2 = sym.V().series()[k1] / ((s + 2.0) * sym.T0());
  const PowerTerm inv_w[4] = {{0.0, 1.0}, {s, kappa}, {2.0 * s, kappa * kappa}, {s + 2.0, kappa2}};
  std::vector<PowerTerm> out;
  for (int i = 0; i < 4; ++i)
    for (const auto& u : inv_w) {
      const double p = i + u.power;
      if (p > 0.0 && p <= 4.0) out.push_back({p, h[i] * u.coef});
    }
  return out;
}

std::vector<double> graded_breaks(double R, const std::vector<int>& singular, double base_width) {
  std::vector<double> br{0.0, R};
  for (int li : singular) {
    if (li >= R) continue;
    br.push_back(li);
    for (double d = 0.5; d >= 1.0 / 128.0; d *= 0.5) {
      if (li - d > 0.0) br.push_back(li - d);
      if (li + d < R) br.push_back(li + d);
    }
  }
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const int k = std::max(1, static_cast<int>(std::ceil((br[i + 1] - br[i]) / base_width)));
    for (int j = 0; j < k; ++j) out.push_back(br[i] + (br[i + 1] - br[i]) * j / k);
  }
  out.push_back(R);
  return out;
}

}  // namespace

KernelMassResult kernel_mass(int n, int ell, double alpha, const KernelMassOptions& options) {
  require_domain(options.radius > 2.0 * ell, "kernel_mass: radius must exceed 2 ell");
  const Regularization& reg = options.reg;
  require_domain(reg.eps_sequence.size() >= 2, "kernel_mass: need at least two eps values");
  const HypersingularSymbol& sym = hypersingular_symbol(n, ell, alpha);
  const double A_inf = sym.A_infinity();
  const double R = options.radius;
  const ProfileJet f = [&sym, A_inf](double t, int order) { return Jet(order, sym.A(t) - A_inf); };
  const double T = reg.decay_cutoff / reg.eps_sequence.back();
  const RadialTransformPlan plan(n, {0.0, 1e-3, 1e-2, 1e-1, 1.0, T}, std::min(0.5, 2.5 / R), f,
                                 reg.eps_sequence);

  const std::vector<double> rb = graded_breaks(R, sym.V().ell_i(), 1.0 / options.r_panels_per_unit);
  const GaussRule& rule = gauss_legendre(8);
  std::vector<double> rs;
  std::vector<double> rw;
  for (std::size_t i = 0; i + 1 < rb.size(); ++i) {
    const double h = rb[i + 1] - rb[i];
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      rs.push_back(rb[i] + 0.5 * h * (1.0 + rule.nodes[q]));
      rw.push_back(0.5 * h * rule.weights[q]);
    }
  }
  std::vector<std::vector<double>> values(rs.size());
  parallel_for(rs.size(), [&](std::size_t i) { values[i] = plan.evaluate(rs[i]); });

  KernelMassResult out;
  out.c = A_inf;
  out.eps = reg.eps_sequence;
  out.regularized_mass.assign(out.eps.size(), 0.0);
  const double area = unit_sphere_area(n);
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t e = 0; e < out.eps.size(); ++e)
      out.regularized_mass[e] += area * rw[i] * std::pow(rs[i], n - 1) * values[i][e];
  const Extrapolation x = extrapolate_to_zero(out.eps, out.regularized_mass);
  out.truncated_mass = x.value;
  out.extrapolation_error = x.error_estimate;
  if (x.error_estimate > reg.max_relative_error * std::max(std::abs(x.value), 1e-12)) {
    std::ostringstream os;
    os << "kernel_mass: eps extrapolation did not converge (estimate " << x.error_estimate
       << ", last regularized mass " << out.regularized_mass.back() << ")";
    throw NumericalError(os.str());
  }
  for (const auto& term : small_t_terms(sym))
    out.tail += term.coef * riesz_kernel_constant(n, term.power) * area * std::pow(R, -term.power) / term.power;
  out.total = out.c + out.truncated_mass + out.tail;
  return out;
}

namespace {

double window_fit_envelope(const std::vector<double>& r, const std::vector<double>& v) {
  // Local maxima of |v| carry the envelope of an oscillating decay.
  std::vector<double> xr;
  std::vector<double> yv;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a >= std::abs(v[i - 1]) && a >= std::abs(v[i + 1]) && a > 0.0) {
      xr.push_back(r[i]);
      yv.push_back(a);
    }
  }
  if (xr.size() < 2) {
    xr = r;
    yv.clear();
    for (double y : v) yv.push_back(std::abs(y));
  }
  return fit_loglog(xr, yv).slope;
}

}  // namespace

A3ProbeReport a3_decay_probe(int n, int ell, double alpha, const std::vector<double>& r_list,
                             const A3ProbeOptions& options) {
  require_domain(!r_list.empty(), "a3_decay_probe: r_list is empty");
  for (double r : r_list) require_domain(r > 0.0, "a3_decay_probe: r must be positive");
  require_domain(options.small_window.size() == 2 && options.mid_window.size() == 2 &&
                     options.far_window.size() == 2,
                 "a3_decay_probe: windows are [lo, hi] pairs");
  require_domain(options.window_samples >= 4, "a3_decay_probe: need at least 4 window samples");
  const HypersingularSymbol& sym = hypersingular_symbol(n, ell, alpha);
  const PartitionOfUnity pu = partition_unity(options.eps, options.delta, options.N);
  const RadialSymbol mu3 = pu.mu[2];
  const double B_inf = sym.B_infinity();
  const ProfileJet f = [&sym, mu3, B_inf](double t, int order) {
    Jet b = sym.B_jet(t, order);
    b[0] -= B_inf;
    return mu3.jet(t, order) * b;
  };
  const Regularization& reg = options.reg;
  const double T = reg.decay_cutoff / reg.eps_sequence.back();
  const double lo = options.N - options.delta;

  // Samples: caller list plus the fitting windows.
  std::vector<double> rs = r_list;
  auto add_window = [&](const std::vector<double>& w, bool logarithmic) {
    const int k = options.window_samples;
    for (int i = 0; i < k; ++i) {
      const double u = static_cast<double>(i) / (k - 1);
      rs.push_back(logarithmic ? w[0] * std::pow(w[1] / w[0], u) : w[0] + (w[1] - w[0]) * u);
    }
  };
  add_window(options.small_window, true);
  add_window(options.mid_window, false);
  add_window(options.far_window, false);
  std::sort(rs.begin(), rs.end());
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());

  double r_near_max = 0.0;
  double r_far_max = 0.0;
  for (double r : rs) {
    if (r < options.lift_from)
      r_near_max = std::max(r_near_max, r);
    else
      r_far_max = std::max(r_far_max, r);
  }
  std::unique_ptr<RadialTransformPlan> near;
  std::unique_ptr<RadialTransformPlan> far;
  if (r_near_max > 0.0)
    near = std::make_unique<RadialTransformPlan>(n, std::vector<double>{lo, options.N, T},
                                                 std::min(0.25, 2.5 / r_near_max), f, reg.eps_sequence, 0);
  if (r_far_max > 0.0) {
    far = std::make_unique<RadialTransformPlan>(n, std::vector<double>{lo, options.N, T},
                                                std::min(0.25, 2.5 / r_far_max), f, reg.eps_sequence, 2);
    far->check_lift_boundaries(r_far_max);
  }

  A3ProbeReport out;
  out.r = rs;
  out.value.assign(rs.size(), 0.0);
  out.error_estimate.assign(rs.size(), 0.0);
  parallel_for(rs.size(), [&](std::size_t i) {
    const Extrapolation x = (rs[i] < options.lift_from ? *near : *far).extrapolate(rs[i]);
    out.value[i] = x.value;
    out.error_estimate[i] = x.error_estimate;
  });

  auto in_window = [&](const std::vector<double>& w, std::vector<double>& xr, std::vector<double>& yv) {
    for (std::size_t i = 0; i < rs.size(); ++i)
      if (rs[i] >= w[0] && rs[i] <= w[1]) {
        xr.push_back(rs[i]);
        yv.push_back(out.value[i]);
      }
  };
  {
    std::vector<double> xr, yv;
    in_window(options.small_window, xr, yv);
    out.small_r_exponent = fit_loglog(xr, yv).slope;
  }
  {
    std::vector<double> xr, yv;
    in_window(options.mid_window, xr, yv);
    out.mid_slope = window_fit_envelope(xr, yv);
  }
  {
    std::vector<double> xr, yv;
    in_window(options.far_window, xr, yv);
    out.far_slope = window_fit_envelope(xr, yv);
  }
  out.steepening = out.far_slope < out.mid_slope;

  // Trapezoid on the sampled list; the r^{n-1} weight makes the origin harmless.
  const double R = rs.back();
  for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
    const double piece = 0.5 * (rs[i + 1] - rs[i]) *
                         (std::abs(out.value[i]) * std::pow(rs[i], n - 1) +
                          std::abs(out.value[i + 1]) * std::pow(rs[i + 1], n - 1));
    out.radial_mass_outer += piece;
    if (rs[i + 1] <= 0.5 * R) out.radial_mass_inner += piece;
  }
  return out;
}

}  // namespace fraclab
