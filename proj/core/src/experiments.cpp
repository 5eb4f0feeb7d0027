#include "fraclab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "fraclab/error.hpp"
#include "fraclab/numerics.hpp"
#include "fraclab/operators.hpp"
#include "fraclab/symbols.hpp"

namespace fraclab {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void require_decreasing(const std::vector<double>& eps) {
  require_domain(!eps.empty(), "eps list must not be empty");
  for (double e : eps) require_domain(e > 0.0 && std::isfinite(e), "eps must be positive");
  for (std::size_t i = 1; i < eps.size(); ++i)
    require_structure(eps[i] < eps[i - 1], "eps list must be strictly decreasing");
}

void describe_grid(ConvergenceReport& r, const Grid& g) {
  r.parameters["n"] = std::to_string(g.n);
  r.parameters["points"] = std::to_string(g.points);
  r.parameters["L"] = fmt(g.L);
}

double lux(const Field& f, const ExponentField& p) { return luxemburg_norm(f, p); }

}  // namespace

std::vector<double> dyadic_eps(int first, int last) {
  require_domain(last >= first, "dyadic_eps: last must be >= first");
  std::vector<double> out;
  for (int k = first; k <= last; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

ConvergenceReport run_theorem_main(const Field& f, double alpha, int ell,
                                   const std::vector<double>& eps_list, const ExponentFamily& p,
                                   const TheoremMainOptions& options) {
  require_decreasing(eps_list);
  OperatorSpec base;
  base.alpha = alpha;
  base.ell = ell;
  base.eps = eps_list.front();
  base.validate();

  const ExponentField pf = exponent_from_family(f.grid, p);
  const Field reference = riesz_derivative_spectral(f, alpha);
  const double ref_norm = lux(reference, pf);

  const std::size_t m = eps_list.size();
  std::vector<double> err(m), hyper_err(m, 0.0), gap(m, 0.0), nval(m);
  parallel_for(m, [&](std::size_t i) {
    const Field N = normalized_difference(f, eps_list[i], alpha);
    err[i] = lux(N - reference, pf);
    nval[i] = lux(N, pf);
    if (options.compare_hypersingular) {
      OperatorSpec s = base;
      s.eps = eps_list[i];
      const Field D = hypersingular_truncated(f, s);
      hyper_err[i] = lux(D - reference, pf);
      gap[i] = lux(N - D, pf);
    }
  });

  ConvergenceReport rep;
  rep.experiment = "theorem_main";
  describe_grid(rep, f.grid);
  rep.parameters["field"] = options.field_name;
  rep.parameters["alpha"] = fmt(alpha);
  rep.parameters["ell"] = std::to_string(ell);
  rep.parameters["exponent"] = p.name();
  rep.parameters["threshold"] = fmt(options.threshold);
  for (std::size_t i = 0; i < m; ++i) rep.records.push_back({eps_list[i], err[i], nval[i]});

  bool decreasing = true;
  for (std::size_t i = 1; i < m; ++i) decreasing = decreasing && err[i] < err[i - 1];
  rep.metrics["reference_norm"] = ref_norm;
  rep.metrics["final_error"] = err.back();
  rep.metrics["relative_final_error"] = ref_norm > 0.0 ? err.back() / ref_norm : err.back();
  rep.metrics["monotone"] = decreasing ? 1.0 : 0.0;
  if (options.compare_hypersingular) {
    rep.metrics["hypersingular_final_error"] = hyper_err.back();
    rep.metrics["operator_gap_final"] = gap.back();
  }
  if (m >= 4) {
    rep.fit = fit_records(rep.records);
    rep.has_fit = true;
    rep.metrics["order"] = rep.fit.slope;
    rep.metrics["order_within_tolerance"] =
        std::abs(rep.fit.slope - options.order_target) <= options.order_tolerance ? 1.0 : 0.0;
  }
  if (!decreasing) rep.notes.push_back("error is not strictly decreasing in eps");
  if (!(err.back() < options.threshold)) rep.notes.push_back("final error above threshold");
  rep.verdict = decreasing && err.back() < options.threshold ? "PASS" : "FAIL";
  return rep;
}

ConvergenceReport run_theorem_rate(const Field& f, double alpha, const std::vector<double>& eps_list,
                                   const ExponentFamily& p, const TheoremRateOptions& options) {
  require_decreasing(eps_list);
  require_domain(alpha > 0.0, "alpha must be positive");
  require_domain(eps_list.size() >= 4, "rate experiment needs at least 4 eps values");
  const ExponentField pf = exponent_from_family(f.grid, p);
  const double deriv_norm = lux(riesz_derivative_spectral(f, alpha), pf);

  const std::size_t m = eps_list.size();
  std::vector<double> norm(m);
  parallel_for(m, [&](std::size_t i) {
    norm[i] = lux(frac_poisson_difference(f, eps_list[i], alpha), pf);
  });

  ConvergenceReport rep;
  rep.experiment = "theorem_rate";
  rep.expected_negative = options.expected_negative;
  describe_grid(rep, f.grid);
  rep.parameters["field"] = options.field_name;
  rep.parameters["alpha"] = fmt(alpha);
  rep.parameters["exponent"] = p.name();
  rep.parameters["slope_tolerance"] = fmt(options.slope_tolerance);
  double ratio_max = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double scaled = norm[i] / std::pow(eps_list[i], alpha);
    rep.records.push_back({eps_list[i], norm[i], scaled});
    if (deriv_norm > 0.0) ratio_max = std::max(ratio_max, scaled / deriv_norm);
  }
  rep.fit = fit_records(rep.records);
  rep.has_fit = true;
  rep.metrics["slope"] = rep.fit.slope;
  rep.metrics["slope_deviation"] = rep.fit.slope - alpha;
  rep.metrics["derivative_norm"] = deriv_norm;
  rep.metrics["constant_ratio_max"] = ratio_max;
  const bool ok = std::abs(rep.fit.slope - alpha) <= options.slope_tolerance;
  if (!ok) rep.notes.push_back("fitted slope outside alpha +- tolerance");
  rep.verdict = ok ? "PASS" : "FAIL";
  return rep;
}

ConvergenceReport run_bessel_characterization(const Field& phi, double alpha, const ExponentFamily& p,
                                              const BesselCharacterizationOptions& options) {
  const int n = phi.grid.n;
  require_domain(alpha > 0.0 && alpha < n, "bessel characterization needs 0 < alpha < n");
  require_decreasing(options.eps_list);
  require_domain(options.eps_list.size() >= 2, "bessel characterization needs two eps values");
  const ExponentField pf = exponent_from_family(phi.grid, p);
  require_domain(pf.p_plus < n / alpha, "bessel characterization needs p_plus < n / alpha");

  const Field f = bessel_potential(phi, alpha);
  const auto& eps = options.eps_list;
  const std::size_t m = eps.size();
  std::vector<Field> N(m);
  std::vector<double> nval(m);
  parallel_for(m, [&](std::size_t i) {
    N[i] = normalized_difference(f, eps[i], alpha);
    nval[i] = lux(N[i], pf);
  });

  ConvergenceReport rep;
  rep.experiment = "bessel_characterization";
  describe_grid(rep, phi.grid);
  rep.parameters["field"] = options.field_name;
  rep.parameters["alpha"] = fmt(alpha);
  rep.parameters["exponent"] = p.name();
  rep.records.push_back({eps[0], std::numeric_limits<double>::quiet_NaN(), nval[0]});
  for (std::size_t i = 1; i < m; ++i) {
    const double d = lux(N[i] - N[i - 1], pf);
    rep.records.push_back({eps[i], nval[i] > 0.0 ? d / nval[i] : d, nval[i]});
  }
  const double cauchy = rep.records.back().error_norm;

  const double phi_norm = lux(phi, pf);
  require_domain(phi_norm > 0.0, "phi must not vanish");
  const double ratio = (lux(f, pf) + nval.back()) / phi_norm;

  Field phi0 = phi;
  const double mean = integral(phi) / phi.grid.measure();
  for (double& v : phi0.values) v -= mean;
  const double phi0_norm = lux(phi0, pf);
  double inversion = 0.0;
  if (phi0_norm > 0.0) {
    const Field back = riesz_derivative_spectral(riesz_potential(phi0, alpha), alpha);
    inversion = lux(back - phi0, pf) / phi0_norm;
  }

  rep.metrics["cauchy_final"] = cauchy;
  rep.metrics["norm_ratio"] = ratio;
  rep.metrics["inversion_error"] = inversion;
  const bool c_ok = cauchy <= options.cauchy_tolerance;
  const bool r_ok = ratio >= options.ratio_low && ratio <= options.ratio_high;
  const bool i_ok = inversion <= options.inversion_tolerance;
  rep.metrics["cauchy_pass"] = c_ok ? 1.0 : 0.0;
  rep.metrics["ratio_pass"] = r_ok ? 1.0 : 0.0;
  rep.metrics["inversion_pass"] = i_ok ? 1.0 : 0.0;
  if (!c_ok) rep.notes.push_back("normalized differences not Cauchy to tolerance");
  if (!r_ok) rep.notes.push_back("norm ratio outside bounds");
  if (!i_ok) rep.notes.push_back("inversion error above tolerance");
  rep.verdict = c_ok && r_ok && i_ok ? "PASS" : "FAIL";
  return rep;
}

ConvergenceReport run_norm_equivalence(const std::vector<Field>& catalogue, double alpha,
                                       const ExponentFamily& p) {
  require_domain(!catalogue.empty(), "catalogue must not be empty");
  require_domain(alpha > 0.0, "alpha must be positive");
  const std::size_t m = catalogue.size();
  std::vector<double> ratio(m);
  parallel_for(m, [&](std::size_t i) {
    const Field& phi = catalogue[i];
    const ExponentField pf = exponent_from_family(phi.grid, p);
    const Field f = bessel_potential(phi, alpha);
    const double num = lux(f, pf) + lux(riesz_derivative_spectral(f, alpha), pf);
    const double den = lux(phi, pf);
    require_domain(den > 0.0, "catalogue field must not vanish");
    ratio[i] = num / den;
  });
  ConvergenceReport rep;
  rep.experiment = "norm_equivalence";
  describe_grid(rep, catalogue.front().grid);
  rep.parameters["alpha"] = fmt(alpha);
  rep.parameters["exponent"] = p.name();
  rep.parameters["fields"] = std::to_string(m);
  const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
  rep.metrics["ratio_min"] = *lo;
  rep.metrics["ratio_max"] = *hi;
  rep.metrics["ratio_spread"] = *hi / *lo;
  for (std::size_t i = 0; i < m; ++i) rep.metrics["ratio_" + std::to_string(i)] = ratio[i];
  rep.verdict = *lo >= 0.1 && *hi <= 10.0 ? "PASS" : "FAIL";
  return rep;
}

const KernelMassResult& kernel_mass_cached(int n, int ell, double alpha) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, double>, std::unique_ptr<KernelMassResult>> cache;
  const auto key = std::make_tuple(n, ell, alpha);
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return *it->second;
  }
  auto result = std::make_unique<KernelMassResult>(kernel_mass(n, ell, alpha));
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(key, std::move(result));
  return *it->second;
}

ConvergenceReport run_fourier_identity(const Field& f, double alpha, int ell,
                                       const std::vector<double>& eps_list,
                                       const FourierIdentityOptions& options) {
  require_decreasing(eps_list);
  const Grid& g = f.grid;
  const HypersingularSymbol& sym = hypersingular_symbol(g.n, ell, alpha);

  const std::size_t m = eps_list.size();
  std::vector<double> forward(m), inverse(m);
  parallel_for(m, [&](std::size_t k) {
    OperatorSpec s;
    s.alpha = alpha;
    s.ell = ell;
    s.eps = eps_list[k];
    s.validate();
    const SpectralField D = to_spectral(hypersingular_truncated(f, s));
    const SpectralField N = to_spectral(normalized_difference(f, s.eps, alpha));
    double scale_n = 0.0;
    double scale_d = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      scale_n = std::max(scale_n, std::abs(N.coefficients[i]));
      scale_d = std::max(scale_d, std::abs(D.coefficients[i]));
    }
    double fw = 0.0;
    double iv = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = s.eps * g.abs_frequency(i);
      if (r == 0.0) continue;
      fw = std::max(fw, std::abs(sym.A(r) * D.coefficients[i] - N.coefficients[i]));
      iv = std::max(iv, std::abs(sym.B(r) * N.coefficients[i] - D.coefficients[i]));
    }
    forward[k] = scale_n > 0.0 ? fw / scale_n : fw;
    inverse[k] = scale_d > 0.0 ? iv / scale_d : iv;
  });

  ConvergenceReport rep;
  rep.experiment = "fourier_identity";
  describe_grid(rep, g);
  rep.parameters["alpha"] = fmt(alpha);
  rep.parameters["ell"] = std::to_string(ell);
  rep.parameters["tolerance"] = fmt(options.tolerance);
  double worst = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    rep.records.push_back({eps_list[k], std::max(forward[k], inverse[k]), forward[k]});
    worst = std::max(worst, std::max(forward[k], inverse[k]));
  }
  rep.metrics["max_forward_deviation"] = *std::max_element(forward.begin(), forward.end());
  rep.metrics["max_inverse_deviation"] = *std::max_element(inverse.begin(), inverse.end());
  bool ok = worst <= options.tolerance;
  if (!ok) rep.notes.push_back("coefficient identity deviates beyond tolerance");
  if (options.check_kernel_mass) {
    const KernelMassResult& km = kernel_mass_cached(g.n, ell, alpha);
    rep.metrics["kernel_mass_c"] = km.c;
    rep.metrics["kernel_mass_total"] = km.total;
    rep.metrics["kernel_mass_error"] = std::abs(km.total - 1.0);
    rep.metrics["kernel_mass_extrapolation_error"] = km.extrapolation_error;
    const bool km_ok = std::abs(km.total - 1.0) <= options.kernel_mass_tolerance;
    if (!km_ok) rep.notes.push_back("kernel mass c + int a differs from 1 beyond tolerance");
    ok = ok && km_ok;
  }
  rep.verdict = ok ? "PASS" : "FAIL";
  return rep;
}

}  // namespace fraclab
