#include "fraclab_cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "fraclab/error.hpp"
#include "fraclab/experiments.hpp"
#include "fraclab/operators.hpp"

namespace fraclab::cli {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

void row(std::ostream& out, const std::string& name, double value, const std::string& extra = {}) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-28s %24.15g", name.c_str(), value);
  out << buf;
  if (!extra.empty()) out << "  " << extra;
  out << '\n';
}

std::vector<Field> catalogue(const RunConfig& c, const Grid& g) {
  std::vector<Field> out;
  for (int i = 0; i < c.catalogue_size; ++i) {
    TestFieldSpec s = c.field;
    s.seed = c.field.seed + static_cast<std::uint64_t>(i);
    out.push_back(test_field(s, g));
  }
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& dir) {
  return p.is_absolute() || dir.empty() ? p : dir / p;
}

}  // namespace

double t0_closed_form_1d(double alpha) {
  const double pi = std::numbers::pi;
  return std::pow(2.0, alpha - 1.0) * pi / (std::tgamma(1.0 + alpha) * std::sin(pi * alpha / 2.0));
}

int cmd_constants(int n, int ell, double alpha, std::ostream& out) {
  if (n < 1 || n > 3 || ell < 2 || ell % 2 != 0 || !(alpha > 0.0) || !(alpha < ell))
    throw ConfigError("constants: need n in {1,2,3}, even ell >= 2, 0 < alpha < ell");
  const HypersingularSymbol& s = hypersingular_symbol(n, ell, alpha);
  const SphericalSineIntegral& V = s.V();
  out << "n = " << n << ", ell = " << ell << ", alpha = " << g17(alpha) << '\n';
  if (alpha < n)
    row(out, "gamma_n(alpha)", riesz_gamma(n, alpha));
  else
    out << "gamma_n(alpha)               undefined (alpha >= n)\n";
  std::string ref;
  if (n == 1 && ell == 2) {
    const double d_ref = -4.0 * t0_closed_form_1d(alpha);
    ref = "closed form " + g17(d_ref) + " (rel. diff " + g17(std::abs(s.d() / d_ref - 1.0)) + ")";
    if (alpha == 0.5) ref += ", -8 sqrt(pi) = " + g17(-8.0 * std::sqrt(std::numbers::pi));
  }
  row(out, "d_{n,ell}(alpha)", s.d(), ref);
  row(out, "T0", s.T0());
  row(out, "lambda (quadrature oracle)", V.lambda());
  row(out, "lambda (closed form)", V.lambda_closed_form());
  row(out, "lambda closed form / oracle", V.lambda_closed_form() / V.lambda(),
      "sqrt(pi) = " + g17(std::sqrt(std::numbers::pi)));
  row(out, "B(inf) = c lambda / alpha", s.B_infinity());
  row(out, "lambda / alpha (uncorrected)", s.B_infinity_uncorrected());
  row(out, "A(inf) = alpha / (c lambda)", s.A_infinity());
  row(out, "small-r kappa", s.small_r_kappa());
  for (std::size_t i = 0; i < V.C().size(); ++i)
    row(out, "C_" + std::to_string(i), V.C()[i], "ell_i = " + std::to_string(V.ell_i()[i]));
  return kPass;
}

ConvergenceReport execute(const RunConfig& c) {
  validate_config(c);
  const Grid g = make_grid(c.n, c.points, c.L);
  const std::string field_name = to_string(c.field.kind);
  switch (c.experiment) {
    case Experiment::theorem_main: {
      TheoremMainOptions o;
      o.field_name = field_name;
      o.threshold = c.threshold;
      return run_theorem_main(test_field(c.field, g), c.alpha, c.ell, c.eps, c.exponent, o);
    }
    case Experiment::theorem_rate: {
      TheoremRateOptions o;
      o.field_name = field_name;
      o.slope_tolerance = c.slope_tolerance;
      o.expected_negative = c.expected_negative;
      return run_theorem_rate(test_field(c.field, g), c.alpha, c.eps, c.exponent, o);
    }
    case Experiment::bessel_characterization: {
      BesselCharacterizationOptions o;
      o.field_name = field_name;
      if (!c.eps.empty()) o.eps_list = c.eps;
      return run_bessel_characterization(test_field(c.field, g), c.alpha, c.exponent, o);
    }
    case Experiment::norm_equivalence:
      return run_norm_equivalence(catalogue(c, g), c.alpha, c.exponent);
    case Experiment::fourier_identity: {
      FourierIdentityOptions o;
      o.check_kernel_mass = c.kernel_mass;
      return run_fourier_identity(test_field(c.field, g), c.alpha, c.ell, c.eps, o);
    }
  }
  throw ConfigError("unknown experiment");
}

int cmd_run(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
            std::ostream& out, std::ostream& err) {
  RunConfig c;
  try {
    c = load_config(config_path);
    validate_config(c);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  }
  try {
    ConvergenceReport rep = execute(c);
    rep.expected_negative = rep.expected_negative || c.expected_negative;
    rep.parameters["seed"] = std::to_string(c.field.seed);
    rep.parameters["config"] = config_path.filename().string();
    const auto json = resolve(c.output_json, out_dir);
    const auto csv = resolve(c.output_csv, out_dir);
    write_report_files(rep, json, csv);
    out << rep.experiment << ": " << rep.verdict
        << (rep.expected_negative ? " (expected negative)" : "") << ", " << rep.records.size()
        << " records -> " << json.string() << ", " << csv.string() << '\n';
    for (const auto& note : rep.notes) out << "  note: " << note << '\n';
    return rep.as_expected() ? kPass : kFail;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "precondition violated: " << e.what() << '\n';
    return kUsage;
  } catch (const StructuralError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumerical;
  }
}

RadialSymbol audit_symbol(const std::string& name, int n, int ell, double alpha) {
  if (name == "sin") return sine_symbol();
  if (name == "mu1" || name == "mu2" || name == "mu3") {
    const PartitionOfUnity pu = partition_unity();
    return pu.mu[static_cast<std::size_t>(name[2] - '1')];
  }
  if (n < 1 || n > 3 || ell < 2 || ell % 2 != 0 || !(alpha > 0.0) || !(alpha < ell))
    throw ConfigError("audit: need n in {1,2,3}, even ell >= 2, 0 < alpha < ell");
  const HypersingularSymbol& s = hypersingular_symbol(n, ell, alpha);
  if (name == "A") return symbol_A(s);
  if (name == "B") return symbol_B(s);
  if (name == "w") return symbol_w(s);
  if (name == "composite") {
    const PartitionOfUnity pu = partition_unity();
    return product(pu.mu[2], difference(symbol_B(s), s.B_infinity()));
  }
  throw ConfigError("unknown symbol '" + name + "' (expected A, B, w, mu1, mu2, mu3, sin, composite)");
}

int cmd_audit(const std::string& symbol, int n, int ell, double alpha, std::optional<int> k_max,
              const std::filesystem::path& output, std::ostream& out, std::ostream& err) {
  try {
    const RadialSymbol m = audit_symbol(symbol, n, ell, alpha);
    const int k = k_max.value_or(n);
    if (k < 0 || k > n) throw ConfigError("audit: k_max must lie in [0, n]");
    MikhlinOptions opt;
    opt.n = n;
    const MikhlinAudit a = mikhlin_audit(m, k, opt);
    const std::string json = audit_to_json(a);
    if (output.empty())
      out << json;
    else
      write_file_atomic(output, json);
    for (const auto& b : a.bounds)
      err << "k = " << b.k << ": sup " << g17(b.sup_bound) << (b.divergent ? " (divergent)" : "")
          << '\n';
    return a.finite() && !a.divergence_flagged ? kPass : kFail;
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "precondition violated: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumerical;
  }
}

}  // namespace fraclab::cli
