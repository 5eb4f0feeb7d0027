#include "fraclab/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "fraclab/error.hpp"
#include "fraclab/numerics.hpp"

namespace fraclab {

// ---------------------------------------------------------------------------
// BesselPowerTail

BesselPowerTail::BesselPowerTail(double mu, double beta, double resolution)
    : mu_(mu), beta_(beta), panel_(1.0 / resolution) {
  require_domain(resolution >= 0.25, "BesselPowerTail: resolution must be >= 1/4");
  require_domain(beta > -0.5, "BesselPowerTail: beta must exceed -1/2");
  const int panels = static_cast<int>(std::ceil(300.0 * resolution / panel_));
  x_far_ = x_start_ + panels * panel_;
  cumulative_.assign(panels + 1, 0.0);
  double acc = 0.0;
  for (int k = panels - 1; k >= 0; --k) {
    const double a = x_start_ + k * panel_;
    acc += integrate_composite([this](double x) { return integrand(x); }, a, a + panel_, 1, 12);
    cumulative_[k] = acc;
  }
  far_value_ = by_parts(x_far_);
}

double BesselPowerTail::integrand(double x) const { return bessel_j(mu_, x) * std::pow(x, -beta_); }

double BesselPowerTail::by_parts(double X) const {
  double sum = 0.0;
  double P = 1.0;
  double last_scale = std::numeric_limits<double>::infinity();
  const double envelope = std::sqrt(2.0 / (3.141592653589793 * X)) + 1.0 / X;
  for (int j = 0; j < 40; ++j) {
    const double scale = std::abs(P) * std::pow(X, -beta_ - j) * envelope;
    if (scale > last_scale) break;  // asymptotic regime exhausted
    sum += P * bessel_j(mu_ - 1.0 - j, X) * std::pow(X, -beta_ - j);
    if (scale < 1e-18 * std::max(std::abs(sum), 1e-300)) break;
    last_scale = scale;
    P *= (mu_ - beta_ - 1.0 - 2.0 * j);
    if (P == 0.0) break;
  }
  return sum;
}

double BesselPowerTail::eval(double X) const {
  require_domain(X >= x_start_, "BesselPowerTail: X below tabulated range");
  if (X >= x_far_) return by_parts(X);
  const int k = std::min(static_cast<int>((X - x_start_) / panel_),
                         static_cast<int>(cumulative_.size()) - 2);
  const double b = x_start_ + (k + 1) * panel_;
  const double partial =
      b > X ? integrate_composite([this](double x) { return integrand(x); }, X, b, 1, 12) : 0.0;
  return partial + cumulative_[k + 1] + far_value_;
}

// ---------------------------------------------------------------------------
// HypersingularSymbol

HypersingularSymbol::HypersingularSymbol(int n, int ell, double alpha, double resolution)
    : alpha_(alpha),
      V_((require_domain(ell >= 2 && ell % 2 == 0, "hypersingular: ell must be even and >= 2"),
          require_domain(alpha > 0.0 && alpha < ell, "hypersingular: need 0 < alpha < ell"), n),
         ell),
      tail_(0.5 * n - 1.0, 0.5 * n + alpha, resolution) {
  const double lam = V_.lambda();
  T1_ = lam / alpha_;
  for (std::size_t i = 0; i < V_.C().size(); ++i) {
    const double li = V_.ell_i()[i];
    T1_ += V_.C()[i] * std::pow(li, alpha_) * tail_.eval(li);
  }
  T0_ = head(1.0) + T1_;
  if (!(T0_ > 0.0)) throw InvariantError("hypersingular: int_0^infty V rho^{-1-alpha} is not positive");
}

double HypersingularSymbol::head(double r) const {
  const auto& a = V_.series();
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == 0.0) continue;
    const double p = 2.0 * static_cast<double>(k) - alpha_;
    s += a[k] * std::pow(r, p) / p;
  }
  return s;
}

double HypersingularSymbol::T(double r) const {
  require_domain(r >= 0.0, "hypersingular: r must be nonnegative");
  if (r < 1.0) return T0_ - head(r);
  double t = V_.lambda() * std::pow(r, -alpha_) / alpha_;
  for (std::size_t i = 0; i < V_.C().size(); ++i) {
    const double li = V_.ell_i()[i];
    t += V_.C()[i] * std::pow(li, alpha_) * tail_.eval(li * r);
  }
  return t;
}

double HypersingularSymbol::d() const {
  const int half = ell() / 2;
  return ((half % 2) ? -1.0 : 1.0) * std::ldexp(T0_, ell());
}

double HypersingularSymbol::check_positive(double w, double r) const {
  if (!(w > 0.0)) {
    std::ostringstream os;
    os << "w(r) is not positive at r = " << r << " (value " << w << ")";
    throw InvariantError(os.str());
  }
  return w;
}

double HypersingularSymbol::w(double r) const {
  require_domain(r >= 0.0, "w: r must be nonnegative");
  if (r < 1.0) return check_positive(1.0 - head(r) / T0_, r);
  return check_positive(T(r) / T0_, r);
}

Jet HypersingularSymbol::w_jet(double r, int order) const {
  Jet out(order, w(r));
  if (order == 0) return out;
  if (r < 1.0) {
    const auto& a = V_.series();
    for (int j = 1; j <= order; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] == 0.0) continue;
        const double p = 2.0 * static_cast<double>(k) - alpha_;
        double fall = 1.0;
        for (int i = 0; i < j; ++i) fall *= (p - i);
        s += a[k] / p * fall * std::pow(r, p - j);
      }
      out[j] = -s / T0_;
    }
    return out;
  }
  // w' = -V(r) r^{-1-alpha} / T0
  const Jet g = V_.jet(r, order - 1) * pow(Jet::variable(order - 1, r), -1.0 - alpha_);
  for (int j = 1; j <= order; ++j) out[j] = -g[j - 1] / T0_;
  return out;
}

namespace {

double h_ratio(double r) { return r == 0.0 ? 1.0 : -std::expm1(-r) / r; }

}  // namespace

double HypersingularSymbol::A(double r) const { return std::pow(h_ratio(r), alpha_) / w(r); }

double HypersingularSymbol::B(double r) const { return w(r) / std::pow(h_ratio(r), alpha_); }

Jet HypersingularSymbol::A_jet(double r, int order) const {
  const Jet u = pow(expm1_neg_over(Jet::variable(order, r)), alpha_);
  const Jet v = w_jet(r, order);
  Jet out(order);
  for (int k = 0; k <= order; ++k) out[k] = quotient_derivative(u.derivs(), v.derivs(), k);
  return out;
}

Jet HypersingularSymbol::B_jet(double r, int order) const {
  const Jet a = A_jet(r, order);
  Jet out(order);
  for (int k = 0; k <= order; ++k) out[k] = reciprocal_derivative(a.derivs(), k);
  return out;
}

double HypersingularSymbol::B_asymptotic(double r, bool with_bessel_term) const {
  require_domain(r >= 10.0, "B_asymptotic: valid for r >= 10 only");
  double s = V_.lambda() / alpha_;
  if (with_bessel_term) {
    const double nu = V_.nu();
    for (std::size_t i = 0; i < V_.C().size(); ++i) {
      const double li = V_.ell_i()[i];
      s += std::pow(r, -nu) * V_.C()[i] * std::pow(li, -nu) * bessel_j(nu - 2.0, li * r);
    }
  }
  return c() * s;
}

double HypersingularSymbol::B_asymptotic_next_term(double r) const {
  const double nu = V_.nu();
  double s = 0.0;
  for (std::size_t i = 0; i < V_.C().size(); ++i) {
    const double li = V_.ell_i()[i];
    s += std::abs(V_.C()[i]) * (2.0 + alpha_) * std::pow(li, -nu - 1.0) *
         std::abs(bessel_j(nu - 3.0, li * r));
  }
  return c() * s * std::pow(r, -nu - 1.0);
}

double HypersingularSymbol::small_r_kappa() const {
  const int k = ell() / 2;
  return V_.series()[k] / ((ell() - alpha_) * T0_);
}

const HypersingularSymbol& hypersingular_symbol(int n, int ell, double alpha) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, double>, std::unique_ptr<HypersingularSymbol>> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_tuple(n, ell, alpha);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<HypersingularSymbol>(n, ell, alpha)).first;
  return *it->second;
}

double hypersingular_constant(int n, int ell, double alpha, double resolution) {
  if (resolution == 1.0) return hypersingular_symbol(n, ell, alpha).d();
  return HypersingularSymbol(n, ell, alpha, resolution).d();
}

double w_eval(int n, int ell, double alpha, double r) { return hypersingular_symbol(n, ell, alpha).w(r); }
double A_eval(int n, int ell, double alpha, double r) { return hypersingular_symbol(n, ell, alpha).A(r); }
double B_eval(int n, int ell, double alpha, double r) { return hypersingular_symbol(n, ell, alpha).B(r); }
double B_asymptotic(int n, int ell, double alpha, double r, bool with_bessel_term) {
  return hypersingular_symbol(n, ell, alpha).B_asymptotic(r, with_bessel_term);
}

// ---------------------------------------------------------------------------
// RadialSymbol

RadialSymbol::RadialSymbol(std::string name, Eval eval, JetFn jet)
    : name_(std::move(name)), eval_(std::move(eval)), jet_(std::move(jet)) {}

Jet RadialSymbol::jet(double r, int order) const {
  if (jet_) {
    Jet j = jet_(r, order);
    j[0] = eval_(r);
    return j;
  }
  return jet_finite_difference(r, order);
}

double RadialSymbol::deriv(int k, double r) const {
  if (k == 0) return eval_(r);
  return jet(r, k)[k];
}

Jet RadialSymbol::jet_finite_difference(double r, int order) const {
  Jet out(order, eval_(r));
  if (order == 0) return out;
  require_domain(r > 0.0, "finite-difference derivatives need r > 0");
  const double h0 = 0.2 * std::min(r, 1.0);
  for (int k = 1; k <= order; ++k) {
    auto central = [&](double h) {
      double s = 0.0;
      double b = 1.0;
      for (int j = 0; j <= k; ++j) {
        s += ((j % 2) ? -1.0 : 1.0) * b * eval_(r + (0.5 * k - j) * h);
        b = b * (k - j) / (j + 1);
      }
      return s / std::pow(h, k);
    };
    // Richardson on the h^2 error expansion of the symmetric stencil.
    double d[4];
    for (int l = 0; l < 4; ++l) d[l] = central(h0 / std::pow(2.0, l));
    for (int m = 1; m < 4; ++m) {
      const double f = std::pow(4.0, m);
      for (int l = 0; l + m < 4; ++l) d[l] = (f * d[l + 1] - d[l]) / (f - 1.0);
    }
    out[k] = d[0];
  }
  return out;
}

RadialSymbol RadialSymbol::dilate(double eps) const {
  require_domain(eps > 0.0, "dilate: eps must be positive");
  const RadialSymbol base = *this;
  Eval e = [base, eps](double r) { return base.eval(eps * r); };
  JetFn j;
  if (jet_) {
    j = [base, eps](double r, int order) {
      Jet inner = base.jet(eps * r, order);
      double f = 1.0;
      for (int k = 0; k <= order; ++k, f *= eps) inner[k] *= f;
      return inner;
    };
  }
  std::ostringstream os;
  os << name_ << "(" << eps << " r)";
  RadialSymbol out(os.str(), e, j);
  out.singular_at_zero = singular_at_zero;
  out.limit_at_infinity = limit_at_infinity;
  return out;
}

RadialSymbol constant_symbol(double value) {
  RadialSymbol s("const", [value](double) { return value; },
                 [value](double, int order) { return Jet::constant(order, value); });
  s.limit_at_infinity = value;
  return s;
}

RadialSymbol sine_symbol() {
  return RadialSymbol("sin", [](double r) { return std::sin(r); },
                      [](double r, int order) {
                        Jet j(order);
                        for (int k = 0; k <= order; ++k) {
                          switch (k % 4) {
                            case 0: j[k] = std::sin(r); break;
                            case 1: j[k] = std::cos(r); break;
                            case 2: j[k] = -std::sin(r); break;
                            default: j[k] = -std::cos(r); break;
                          }
                        }
                        return j;
                      });
}

RadialSymbol product(const RadialSymbol& a, const RadialSymbol& b) {
  RadialSymbol::JetFn j;
  if (a.has_analytic_derivatives() && b.has_analytic_derivatives())
    j = [a, b](double r, int order) { return a.jet(r, order) * b.jet(r, order); };
  RadialSymbol out(a.name() + "*" + b.name(), [a, b](double r) { return a(r) * b(r); }, j);
  if (a.limit_at_infinity && b.limit_at_infinity)
    out.limit_at_infinity = *a.limit_at_infinity * *b.limit_at_infinity;
  return out;
}

RadialSymbol difference(const RadialSymbol& a, double shift) {
  RadialSymbol::JetFn j;
  if (a.has_analytic_derivatives())
    j = [a, shift](double r, int order) {
      Jet x = a.jet(r, order);
      x[0] -= shift;
      return x;
    };
  RadialSymbol out(a.name() + "-c", [a, shift](double r) { return a(r) - shift; }, j);
  if (a.limit_at_infinity) out.limit_at_infinity = *a.limit_at_infinity - shift;
  return out;
}

RadialSymbol symbol_w(const HypersingularSymbol& s) {
  RadialSymbol out("w", [&s](double r) { return s.w(r); },
                   [&s](double r, int order) { return s.w_jet(r, order); });
  out.limit_at_infinity = 0.0;
  return out;
}

RadialSymbol symbol_A(const HypersingularSymbol& s) {
  RadialSymbol out("A", [&s](double r) { return s.A(r); },
                   [&s](double r, int order) { return s.A_jet(r, order); });
  out.limit_at_infinity = s.A_infinity();
  return out;
}

RadialSymbol symbol_B(const HypersingularSymbol& s) {
  RadialSymbol out("B", [&s](double r) { return s.B(r); },
                   [&s](double r, int order) { return s.B_jet(r, order); });
  out.limit_at_infinity = s.B_infinity();
  return out;
}

// ---------------------------------------------------------------------------
// Partition of unity

Jet smoothstep_jet(double t, int order) {
  if (t <= 0.0) return Jet(order, 0.0);
  if (t >= 1.0) return Jet(order, 1.0);
  auto phi = [](const Jet& x) {
    // e^{-1/x}
    return exp(-1.0 * pow(x, -1.0));
  };
  const Jet x = Jet::variable(order, t);
  Jet y = Jet::variable(order, 1.0 - t);
  if (order >= 1) y[1] = -1.0;
  const Jet a = phi(x);
  const Jet b = phi(y);
  const Jet den = a + b;
  Jet out(order);
  for (int k = 0; k <= order; ++k) out[k] = quotient_derivative(a.derivs(), den.derivs(), k);
  return out;
}

PartitionOfUnity partition_unity(double eps, double delta, double N) {
  require_domain(eps > 0.0 && delta > 0.0 && eps + delta < N - delta,
                 "partition_unity: need 0 < eps < eps + delta < N - delta");
  auto mu1_jet = [eps, delta](double r, int order) {
    Jet s = smoothstep_jet((r - eps) / delta, order);
    Jet out(order, 1.0 - s[0]);
    double f = 1.0 / delta;
    for (int k = 1; k <= order; ++k, f /= delta) out[k] = -s[k] * f;
    return out;
  };
  auto mu3_jet = [delta, N](double r, int order) {
    Jet s = smoothstep_jet((r - (N - delta)) / delta, order);
    double f = 1.0 / delta;
    for (int k = 1; k <= order; ++k, f /= delta) s[k] *= f;
    return s;
  };
  auto mu2_jet = [mu1_jet, mu3_jet](double r, int order) {
    Jet one = Jet::constant(order, 1.0);
    return one - mu1_jet(r, order) - mu3_jet(r, order);
  };
  RadialSymbol mu1("mu1", [mu1_jet](double r) { return mu1_jet(r, 0)[0]; }, mu1_jet);
  RadialSymbol mu2("mu2", [mu2_jet](double r) { return mu2_jet(r, 0)[0]; }, mu2_jet);
  RadialSymbol mu3("mu3", [mu3_jet](double r) { return mu3_jet(r, 0)[0]; }, mu3_jet);
  mu1.limit_at_infinity = 0.0;
  mu2.limit_at_infinity = 0.0;
  mu3.limit_at_infinity = 1.0;
  return PartitionOfUnity{eps, delta, N, {mu1, mu2, mu3}};
}

// ---------------------------------------------------------------------------
// Mikhlin audit

bool MikhlinAudit::finite() const {
  for (const auto& b : bounds)
    if (!std::isfinite(b.sup_bound)) return false;
  return true;
}

namespace {

struct SupResult {
  double value = 0.0;
  double argmax = 0.0;
};

double weighted(const RadialSymbol& s, int k, double r) {
  const Jet j = s.jet(r, k);
  return std::abs(std::pow(r, k) * j[k]);
}

// Sup of |r^k M^{(k)}| over a log grid; the best sample is polished by golden-section
// search in log r between its neighbours.
SupResult grid_sup(const RadialSymbol& s, int k, double lo, double hi, int ppd) {
  const double decades = std::log10(hi / lo);
  const auto count = static_cast<std::size_t>(std::max(2.0, std::ceil(decades * ppd) + 1));
  const std::vector<double> r = logspace(lo, hi, count);
  SupResult best;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double v = weighted(s, k, r[i]);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "Mikhlin audit: |r^" << k << " M^(" << k << ")| not finite at r = " << r[i];
      throw NumericalError(os.str());
    }
    if (v > best.value) {
      best.value = v;
      arg = i;
    }
  }
  best.argmax = r[arg];
  if (best.value == 0.0) return best;
  double a = std::log(r[arg == 0 ? 0 : arg - 1]);
  double b = std::log(r[std::min(arg + 1, r.size() - 1)]);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = weighted(s, k, std::exp(x1));
  double f2 = weighted(s, k, std::exp(x2));
  for (int it = 0; it < 40; ++it) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = weighted(s, k, std::exp(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = weighted(s, k, std::exp(x2));
    }
  }
  const double polished = std::max(f1, f2);
  if (polished > best.value) {
    best.value = polished;
    best.argmax = std::exp(f1 > f2 ? x1 : x2);
  }
  return best;
}

}  // namespace

MikhlinAudit mikhlin_audit(const RadialSymbol& symbol, int k_max, const MikhlinOptions& options) {
  require_domain(k_max >= 0 && k_max <= options.n, "mikhlin_audit: need 0 <= k_max <= n");
  const MikhlinGrid& g = options.grid;
  require_domain(g.r_min > 0.0 && g.r_max > 100.0 * g.r_min && g.points_per_decade >= 4,
                 "mikhlin_audit: grid must span at least two decades");
  MikhlinAudit audit;
  audit.symbol = symbol.name();
  audit.n = options.n;
  audit.k_max = k_max;
  audit.grid = g;
  audit.dilations = options.dilations;
  for (int k = 0; k <= k_max; ++k) {
    MikhlinBound b;
    b.k = k;
    const SupResult base = grid_sup(symbol, k, g.r_min, g.r_max, g.points_per_decade);
    const SupResult fine = grid_sup(symbol, k, g.r_min, g.r_max, 2 * g.points_per_decade);
    const SupResult inner = grid_sup(symbol, k, 10.0 * g.r_min, g.r_max / 10.0, g.points_per_decade);
    b.sup_bound = std::max(base.value, fine.value);
    b.argmax = fine.value >= base.value ? fine.argmax : base.argmax;
    b.refinement_delta = b.sup_bound > 0.0 ? std::abs(fine.value - base.value) / b.sup_bound : 0.0;
    b.inner_sup = inner.value;
    b.divergent = b.sup_bound > 0.0 && b.sup_bound > options.divergence_ratio * inner.value;
    for (double eps : options.dilations) {
      if (eps == 1.0) continue;
      const SupResult d = grid_sup(symbol.dilate(eps), k, g.r_min, g.r_max, g.points_per_decade);
      if (b.sup_bound > 0.0)
        b.dilation_spread = std::max(b.dilation_spread, std::abs(d.value - b.sup_bound) / b.sup_bound);
      else
        b.dilation_spread = std::max(b.dilation_spread, d.value);
    }
    audit.divergence_flagged = audit.divergence_flagged || b.divergent;
    audit.bounds.push_back(b);
  }
  return audit;
}

}  // namespace fraclab
