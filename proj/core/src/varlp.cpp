#include "fraclab/varlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "fraclab/error.hpp"

namespace fraclab {

namespace {

double distance(const Grid& g, std::size_t i, std::size_t j) {
  int a[3], b[3];
  g.unflatten(i, a);
  g.unflatten(j, b);
  double s = 0.0;
  for (int k = 0; k < g.n; ++k) {
    const double d = g.coord(a[k]) - g.coord(b[k]);
    s += d * d;
  }
  return std::sqrt(s);
}

double log_quotient(const ExponentField& p, std::size_t i, std::size_t j) {
  const double d = distance(p.grid, i, j);
  return std::abs(p.samples[i] - p.samples[j]) * (-std::log(d));
}

double decay_quotient(const ExponentField& p, std::size_t i) {
  return std::abs(p.samples[i] - p.p_infinity) * std::log(2.0 + p.grid.abs_coord(i));
}

void require_same_grid(const Field& f, const ExponentField& p) {
  require_structure(f.grid == p.grid && f.values.size() == p.samples.size(),
                    "field and exponent do not share a grid");
}

double scaled_modular(const Field& f, const ExponentField& p, double lambda) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const double v = std::abs(f.values[i]) / lambda;
    if (v != 0.0) s += std::pow(v, p.samples[i]);
  }
  return s * f.grid.cell_volume();
}

}  // namespace

ExponentField make_exponent(const Grid& grid, std::vector<double> samples, double p_infinity) {
  require_structure(samples.size() == grid.size(), "exponent: sample count does not match grid");
  ExponentField p{grid, std::move(samples), 0.0, 0.0, p_infinity};
  p.p_minus = std::numeric_limits<double>::infinity();
  p.p_plus = -std::numeric_limits<double>::infinity();
  for (double v : p.samples) {
    require_domain(std::isfinite(v) && v >= 1.0, "exponent: samples must be finite and >= 1");
    p.p_minus = std::min(p.p_minus, v);
    p.p_plus = std::max(p.p_plus, v);
  }
  require_domain(std::isfinite(p_infinity) && p_infinity >= 1.0, "exponent: p_infinity must be >= 1");
  return p;
}

ExponentField constant_exponent(const Grid& grid, double p) {
  return make_exponent(grid, std::vector<double>(grid.size(), p), p);
}

double ExponentFamily::value(double r) const {
  switch (kind) {
    case Kind::constant: return p_infinity;
    case Kind::rational_decay: return p_infinity + a / (1.0 + r * r);
    case Kind::log_decay: return p_infinity + a / std::log(2.0 + r);
  }
  return p_infinity;
}

std::string ExponentFamily::name() const {
  switch (kind) {
    case Kind::constant: return "constant";
    case Kind::rational_decay: return "rational_decay";
    case Kind::log_decay: return "log_decay";
  }
  return "unknown";
}

ExponentFamily parse_exponent_family(const std::string& name, double p_infinity, double a) {
  ExponentFamily f;
  if (name == "constant") {
    f.kind = ExponentFamily::Kind::constant;
  } else if (name == "rational_decay") {
    f.kind = ExponentFamily::Kind::rational_decay;
  } else if (name == "log_decay") {
    f.kind = ExponentFamily::Kind::log_decay;
  } else {
    detail::throw_domain("unknown exponent family '" + name + "'");
  }
  f.p_infinity = p_infinity;
  f.a = f.kind == ExponentFamily::Kind::constant ? 0.0 : a;
  require_domain(p_infinity >= 1.0 && p_infinity + std::min(0.0, f.a) >= 1.0,
                 "exponent family must stay >= 1");
  return f;
}

ExponentField exponent_from_family(const Grid& grid, const ExponentFamily& family) {
  std::vector<double> s(grid.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = family.value(grid.abs_coord(i));
  return make_exponent(grid, std::move(s), family.p_infinity);
}

double modular(const Field& f, const ExponentField& p) {
  require_same_grid(f, p);
  return scaled_modular(f, p, 1.0);
}

double luxemburg_norm(const Field& f, const ExponentField& p, double tol) {
  require_same_grid(f, p);
  require_domain(tol > 0.0, "luxemburg_norm: tol must be positive");
  const double fmax = max_abs(f);
  if (fmax == 0.0) return 0.0;
  // rho(f/lambda) <= |box| (fmax/lambda)^{p_minus} once lambda >= fmax.
  double hi = fmax * std::pow(std::max(1.0, f.grid.measure()), 1.0 / p.p_minus);
  int guard = 0;
  while (scaled_modular(f, p, hi) > 1.0) {
    hi *= 2.0;
    if (++guard > 200) detail::throw_numerical("luxemburg_norm: upper bracket not found");
  }
  double lo = hi * 0.5;
  while (scaled_modular(f, p, lo) <= 1.0) {
    hi = lo;
    lo *= 0.5;
    if (++guard > 400) detail::throw_numerical("luxemburg_norm: lower bracket not found");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double rho = scaled_modular(f, p, mid);
    if (std::abs(rho - 1.0) <= tol) return mid;
    if (rho > 1.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      const double rho_hi = scaled_modular(f, p, hi);
      if (std::abs(rho_hi - 1.0) <= tol) return hi;
      break;
    }
  }
  std::ostringstream os;
  os.precision(17);
  os << "luxemburg_norm: bisection stalled with bracket [" << lo << ", " << hi
     << "], modular values " << scaled_modular(f, p, lo) << " / " << scaled_modular(f, p, hi);
  throw NumericalError(os.str());
}

ConditionCertificate check_log_condition(const ExponentField& p, std::size_t pair_budget,
                                         std::uint64_t seed) {
  require_domain(pair_budget >= 1, "check_log_condition: pair_budget must be >= 1");
  const Grid& g = p.grid;
  ConditionCertificate c;
  c.kind = ConditionCertificate::Kind::log;
  auto consider = [&](std::size_t i, std::size_t j) {
    const double d = distance(g, i, j);
    if (d <= 0.0 || d > 0.5) return;
    ++c.pairs_examined;
    const double q = log_quotient(p, i, j);
    if (q > c.constant) {
      c.constant = q;
      c.witness_x = i;
      c.witness_y = j;
    }
  };
  // Nearest neighbours along every axis (periodic wrap excluded: it is not a short pair).
  int idx[3];
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.unflatten(i, idx);
    std::size_t stride = 1;
    for (int a = g.n - 1; a >= 0; --a) {
      if (idx[a] + 1 < g.points) consider(i, i + stride);
      stride *= static_cast<std::size_t>(g.points);
    }
  }
  // Random pairs with per-axis offsets inside the 1/2-ball.
  const int reach = std::max(1, static_cast<int>(std::floor(0.5 / g.h())));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
  std::uniform_int_distribution<int> off(-reach, reach);
  for (std::size_t b = 0; b < pair_budget; ++b) {
    const std::size_t i = pick(rng);
    g.unflatten(i, idx);
    std::size_t j = 0;
    bool inside = true;
    for (int a = 0; a < g.n; ++a) {
      const int k = idx[a] + off(rng);
      if (k < 0 || k >= g.points) inside = false;
      j = j * static_cast<std::size_t>(g.points) + static_cast<std::size_t>(std::clamp(k, 0, g.points - 1));
    }
    if (inside) consider(i, j);
  }
  return c;
}

ConditionCertificate check_decay_condition(const ExponentField& p) {
  ConditionCertificate c;
  c.kind = ConditionCertificate::Kind::decay;
  for (std::size_t i = 0; i < p.samples.size(); ++i) {
    const double q = decay_quotient(p, i);
    ++c.pairs_examined;
    if (q > c.constant) {
      c.constant = q;
      c.witness_x = i;
      c.witness_y = i;
    }
  }
  return c;
}

double certificate_quotient(const ExponentField& p, const ConditionCertificate& c) {
  if (c.kind == ConditionCertificate::Kind::decay) return decay_quotient(p, c.witness_x);
  if (c.witness_x == c.witness_y) return 0.0;
  return log_quotient(p, c.witness_x, c.witness_y);
}

RefinementTrend log_condition_trend(const std::function<ExponentField(const Grid&)>& make,
                                    const std::vector<Grid>& grids, std::size_t pair_budget,
                                    std::uint64_t seed) {
  RefinementTrend t;
  for (const Grid& g : grids) t.constants.push_back(check_log_condition(make(g), pair_budget, seed).constant);
  t.monotone_growth = t.constants.size() >= 2;
  for (std::size_t i = 1; i < t.constants.size(); ++i)
    t.monotone_growth = t.monotone_growth && t.constants[i] > t.constants[i - 1] * 1.01;
  return t;
}

ExponentField conjugate_exponent(const ExponentField& p) {
  require_domain(p.p_minus > 1.0, "conjugate_exponent: p_minus must exceed 1");
  std::vector<double> s(p.samples.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = p.samples[i] / (p.samples[i] - 1.0);
  const double pinf = p.p_infinity > 1.0 ? p.p_infinity / (p.p_infinity - 1.0)
                                         : std::numeric_limits<double>::infinity();
  ExponentField q{p.grid, std::move(s), 0.0, 0.0, pinf};
  q.p_minus = *std::min_element(q.samples.begin(), q.samples.end());
  q.p_plus = *std::max_element(q.samples.begin(), q.samples.end());
  return q;
}

}  // namespace fraclab
