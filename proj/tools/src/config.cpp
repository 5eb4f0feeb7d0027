#include "fraclab_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fraclab/error.hpp"
#include "fraclab/experiments.hpp"

namespace fraclab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  return out;
}

long to_long(const std::string& key, const std::string& v) {
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

Experiment to_experiment(const std::string& v) {
  if (v == "theorem_main") return Experiment::theorem_main;
  if (v == "theorem_rate") return Experiment::theorem_rate;
  if (v == "bessel_characterization") return Experiment::bessel_characterization;
  if (v == "norm_equivalence") return Experiment::norm_equivalence;
  if (v == "fourier_identity") return Experiment::fourier_identity;
  throw ConfigError("unknown experiment '" + v + "'");
}

const std::set<std::string> kKeys = {
    "experiment", "n", "points", "L", "alpha", "ell", "eps", "eps_dyadic", "field", "sigma",
    "t", "cutoff", "spectral_decay", "radius", "zero_dc", "seed", "exponent", "p_infinity",
    "p_a", "threshold", "slope_tolerance", "expected_negative", "catalogue_size",
    "kernel_mass", "output_json", "output_csv"};

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::theorem_main: return "theorem_main";
    case Experiment::theorem_rate: return "theorem_rate";
    case Experiment::bessel_characterization: return "bessel_characterization";
    case Experiment::norm_equivalence: return "norm_equivalence";
    case Experiment::fourier_identity: return "fourier_identity";
  }
  return "unknown";
}

RunConfig parse_config(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!kKeys.count(key))
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (value.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty value for '" + key + "'");
    if (!kv.emplace(key, value).second)
      throw ConfigError("line " + std::to_string(lineno) + ": repeated key '" + key + "'");
  }

  RunConfig c;
  auto has = [&](const char* k) { return kv.count(k) != 0; };
  if (!has("experiment")) throw ConfigError("missing required key 'experiment'");
  c.experiment = to_experiment(kv["experiment"]);
  if (has("n")) c.n = static_cast<int>(to_long("n", kv["n"]));
  if (has("points")) c.points = static_cast<int>(to_long("points", kv["points"]));
  if (has("L")) c.L = to_double("L", kv["L"]);
  if (has("alpha")) c.alpha = to_double("alpha", kv["alpha"]);
  if (has("ell")) c.ell = static_cast<int>(to_long("ell", kv["ell"]));
  if (has("eps") && has("eps_dyadic")) throw ConfigError("give either 'eps' or 'eps_dyadic'");
  if (has("eps")) c.eps = to_list("eps", kv["eps"]);
  if (has("eps_dyadic")) {
    const auto r = to_list("eps_dyadic", kv["eps_dyadic"]);
    if (r.size() != 2 || r[0] != static_cast<int>(r[0]) || r[1] != static_cast<int>(r[1]) ||
        r[1] < r[0])
      throw ConfigError("key 'eps_dyadic': expected 'first,last' integers with first <= last");
    c.eps = dyadic_eps(static_cast<int>(r[0]), static_cast<int>(r[1]));
  }
  try {
    if (has("field")) c.field.kind = parse_test_field_kind(kv["field"]);
    c.exponent = parse_exponent_family(
        has("exponent") ? kv["exponent"] : "constant",
        has("p_infinity") ? to_double("p_infinity", kv["p_infinity"]) : 2.0,
        has("p_a") ? to_double("p_a", kv["p_a"]) : 0.0);
  } catch (const fraclab::DomainError& e) {
    throw ConfigError(e.what());
  }
  if (has("sigma")) c.field.sigma = to_double("sigma", kv["sigma"]);
  if (has("t")) c.field.t = to_double("t", kv["t"]);
  if (has("cutoff")) c.field.cutoff = to_double("cutoff", kv["cutoff"]);
  if (has("spectral_decay")) c.field.spectral_decay = to_double("spectral_decay", kv["spectral_decay"]);
  if (has("radius")) c.field.radius = to_double("radius", kv["radius"]);
  if (has("zero_dc")) c.field.zero_dc = to_bool("zero_dc", kv["zero_dc"]);
  if (has("seed")) {
    const long s = to_long("seed", kv["seed"]);
    if (s < 0) throw ConfigError("key 'seed' must be nonnegative");
    c.field.seed = static_cast<std::uint64_t>(s);
  }
  if (has("threshold")) c.threshold = to_double("threshold", kv["threshold"]);
  if (has("slope_tolerance")) c.slope_tolerance = to_double("slope_tolerance", kv["slope_tolerance"]);
  if (has("expected_negative")) c.expected_negative = to_bool("expected_negative", kv["expected_negative"]);
  if (has("catalogue_size"))
    c.catalogue_size = static_cast<int>(to_long("catalogue_size", kv["catalogue_size"]));
  if (has("kernel_mass")) c.kernel_mass = to_bool("kernel_mass", kv["kernel_mass"]);
  const std::string stem = to_string(c.experiment);
  c.output_json = has("output_json") ? kv["output_json"] : stem + ".json";
  c.output_csv = has("output_csv") ? kv["output_csv"] : stem + ".csv";
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  return parse_config(in);
}

void validate_config(const RunConfig& c) {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("precondition violated: " + what);
  };
  need(c.n >= 1 && c.n <= 3, "n in {1, 2, 3}");
  need(c.points >= 16 && (c.points & (c.points - 1)) == 0, "points a power of two >= 16");
  need(c.L > 0.0, "L > 0");
  need(c.ell >= 2 && c.ell % 2 == 0, "ell even and >= 2");
  need(c.alpha > 0.0, "alpha > 0");
  need(c.alpha < c.ell, "alpha < ell");
  need(c.exponent.p_infinity >= 1.0, "p_infinity >= 1");
  const double p_lo = std::min(c.exponent.value(0.0), c.exponent.p_infinity);
  const double p_hi = std::max(c.exponent.value(0.0), c.exponent.p_infinity);
  need(p_lo >= 1.0, "p(x) >= 1 everywhere");
  need(c.field.sigma > 0.0 && c.field.t > 0.0 && c.field.cutoff > 0.0 && c.field.radius > 0.0,
       "positive field parameters");
  need(c.catalogue_size >= 1, "catalogue_size >= 1");
  need(!c.output_json.empty() && !c.output_csv.empty() && c.output_json != c.output_csv,
       "distinct output paths");
  const bool needs_eps = c.experiment != Experiment::norm_equivalence &&
                         c.experiment != Experiment::bessel_characterization;
  if (needs_eps || !c.eps.empty()) {
    need(!c.eps.empty(), "eps list given");
    for (std::size_t i = 0; i < c.eps.size(); ++i) {
      need(c.eps[i] > 0.0, "eps > 0");
      if (i > 0) need(c.eps[i] < c.eps[i - 1], "eps strictly decreasing");
    }
  }
  if (c.experiment == Experiment::theorem_main) need(c.eps.size() >= 4, "at least 4 eps values");
  if (c.experiment == Experiment::theorem_rate) need(c.eps.size() >= 4, "at least 4 eps values");
  if (c.experiment == Experiment::bessel_characterization) {
    need(c.alpha < c.n, "alpha < n");
    need(p_hi < c.n / c.alpha, "p_plus < n / alpha");
  }
}

}  // namespace fraclab::cli
