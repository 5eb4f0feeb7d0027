#include "fraclab/fields.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "fraclab/error.hpp"

namespace fraclab {

namespace {

using cplx = std::complex<double>;

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place unnormalized DFT; sign = FFTW_FORWARD or FFTW_BACKWARD.
void dft(std::vector<cplx>& data, const Grid& g, int sign) {
  int dims[3] = {g.points, g.points, g.points};
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft(g.n, dims, ptr, ptr, sign, FFTW_ESTIMATE);
  }
  require_structure(plan != nullptr, "fftw: plan creation failed");
  fftw_execute(plan);
  std::lock_guard lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

// (-1)^{k_1 + ... + k_n}: phase e^{i L xi} relating the box origin -L to the DFT origin.
double origin_phase(const Grid& g, std::size_t flat) {
  int idx[3];
  g.unflatten(flat, idx);
  int s = 0;
  for (int a = 0; a < g.n; ++a) s += idx[a];
  return (s % 2) ? -1.0 : 1.0;
}

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

void require_finite(const Field& f) {
  for (double v : f.values)
    if (!std::isfinite(v)) detail::throw_structural("field contains non-finite values");
}

}  // namespace

std::size_t Grid::size() const {
  std::size_t s = 1;
  for (int a = 0; a < n; ++a) s *= static_cast<std::size_t>(points);
  return s;
}

double Grid::measure() const { return std::pow(2.0 * L, n); }
double Grid::cell_volume() const { return std::pow(h(), n); }

double Grid::frequency(int i) const {
  const int k = i < points / 2 ? i : i - points;
  return std::numbers::pi * k / L;
}

void Grid::unflatten(std::size_t flat, int* idx) const {
  for (int a = n - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % points);
    flat /= points;
  }
}

double Grid::abs_frequency(std::size_t flat) const {
  int idx[3];
  unflatten(flat, idx);
  double s = 0.0;
  for (int a = 0; a < n; ++a) {
    const double xi = frequency(idx[a]);
    s += xi * xi;
  }
  return std::sqrt(s);
}

double Grid::abs_coord(std::size_t flat) const {
  int idx[3];
  unflatten(flat, idx);
  double s = 0.0;
  for (int a = 0; a < n; ++a) {
    const double x = coord(idx[a]);
    s += x * x;
  }
  return std::sqrt(s);
}

Grid make_grid(int n, int points, double L) {
  require_domain(n >= 1 && n <= 3, "grid: dimension must be 1, 2 or 3");
  require_domain(is_power_of_two(points) && points >= 16,
                 "grid: points per axis must be a power of two >= 16");
  require_domain(L > 0.0 && std::isfinite(L), "grid: half-width must be positive");
  return Grid{n, points, L};
}

Field::Field(const Grid& g, double fill) : grid(g), values(g.size(), fill) {}

Field::Field(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  require_structure(values.size() == grid.size(), "field: value count does not match grid");
}

Field& Field::operator+=(const Field& o) {
  require_structure(grid == o.grid, "field: grid mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  require_structure(grid == o.grid, "field: grid mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values) v *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

Field sample(const Grid& grid, const std::function<double(std::span<const double>)>& g) {
  Field f(grid);
  int idx[3];
  double x[3];
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    grid.unflatten(i, idx);
    for (int a = 0; a < grid.n; ++a) x[a] = grid.coord(idx[a]);
    f.values[i] = g(std::span<const double>(x, grid.n));
  }
  return f;
}

SpectralField to_spectral(const Field& f) {
  require_structure(f.values.size() == f.grid.size(), "to_spectral: value count mismatch");
  require_finite(f);
  SpectralField F{f.grid, std::vector<cplx>(f.values.begin(), f.values.end())};
  dft(F.coefficients, f.grid, FFTW_FORWARD);
  const double vol = f.grid.cell_volume();
  for (std::size_t i = 0; i < F.coefficients.size(); ++i)
    F.coefficients[i] *= vol * origin_phase(f.grid, i);
  return F;
}

Field from_spectral(const SpectralField& F) {
  require_structure(F.coefficients.size() == F.grid.size(), "from_spectral: coefficient count mismatch");
  std::vector<cplx> data(F.coefficients);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= origin_phase(F.grid, i);
  dft(data, F.grid, FFTW_BACKWARD);
  const double scale = 1.0 / F.grid.measure();
  Field f(F.grid);
  for (std::size_t i = 0; i < data.size(); ++i) f.values[i] = data[i].real() * scale;
  return f;
}

void multiply_radial(SpectralField& F, const std::function<double(double)>& m, Diagnostics* diag) {
  double max_coef = 0.0;
  for (const auto& c : F.coefficients) max_coef = std::max(max_coef, std::abs(c));
  for (std::size_t i = 0; i < F.coefficients.size(); ++i) {
    const double r = F.grid.abs_frequency(i);
    const double v = m(r);
    if (std::isfinite(v)) {
      F.coefficients[i] *= v;
      continue;
    }
    if (r == 0.0) {
      if (diag && std::abs(F.coefficients[i]) > 1e-12 * max_coef)
        diag->warnings.push_back("multiplier singular at 0: DC component zeroed");
      F.coefficients[i] = 0.0;
      continue;
    }
    std::ostringstream os;
    os << "multiplier is not finite at |xi| = " << r;
    detail::throw_domain(os.str());
  }
}

Field apply_radial_multiplier(const Field& f, const std::function<double(double)>& m,
                              Diagnostics* diag) {
  SpectralField F = to_spectral(f);
  multiply_radial(F, m, diag);
  return from_spectral(F);
}

namespace {

Field shift_spectral(const Field& f, std::span<const double> offset) {
  return shift_from_spectral(to_spectral(f), offset);
}

// Four-point periodic Lagrange interpolation along one axis.
void shift_axis_cubic(Field& f, int axis, double d) {
  const Grid& g = f.grid;
  const int N = g.points;
  const double s = -d / g.h();
  const double fl = std::floor(s);
  const double t = s - fl;
  const int base = static_cast<int>(fl);
  const double w[4] = {-t * (t - 1.0) * (t - 2.0) / 6.0, (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
                       -(t + 1.0) * t * (t - 2.0) / 2.0, (t + 1.0) * t * (t - 1.0) / 6.0};
  std::size_t stride = 1;
  for (int a = g.n - 1; a > axis; --a) stride *= N;
  const std::vector<double> src = f.values;
  int idx[3];
  for (std::size_t i = 0; i < src.size(); ++i) {
    g.unflatten(i, idx);
    const std::size_t row = i - static_cast<std::size_t>(idx[axis]) * stride;
    double v = 0.0;
    for (int q = 0; q < 4; ++q) {
      int j = (idx[axis] + base - 1 + q) % N;
      if (j < 0) j += N;
      v += w[q] * src[row + static_cast<std::size_t>(j) * stride];
    }
    f.values[i] = v;
  }
}

}  // namespace

Field shift_from_spectral(const SpectralField& F, std::span<const double> offset) {
  require_structure(static_cast<int>(offset.size()) == F.grid.n,
                    "shift_from_spectral: offset dimension does not match grid");
  SpectralField G = F;
  int idx[3];
  for (std::size_t i = 0; i < G.coefficients.size(); ++i) {
    F.grid.unflatten(i, idx);
    double phase = 0.0;
    for (int a = 0; a < F.grid.n; ++a) phase += F.grid.frequency(idx[a]) * offset[a];
    G.coefficients[i] *= cplx(std::cos(phase), -std::sin(phase));
  }
  return from_spectral(G);
}

Field shift_evaluate(const Field& f, std::span<const double> offset, ShiftMethod method) {
  require_structure(static_cast<int>(offset.size()) == f.grid.n,
                    "shift_evaluate: offset dimension does not match grid");
  for (double o : offset)
    require_domain(std::abs(o) < f.grid.L, "shift_evaluate: |offset| must be below L");
  if (method == ShiftMethod::spectral) return shift_spectral(f, offset);
  Field out = f;
  for (int a = 0; a < f.grid.n; ++a)
    if (offset[a] != 0.0) shift_axis_cubic(out, a, offset[a]);
  return out;
}

double l2_norm(const Field& f) {
  double s = 0.0;
  for (double v : f.values) s += v * v;
  return std::sqrt(s * f.grid.cell_volume());
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

double integral(const Field& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  return s * f.grid.cell_volume();
}

double relative_l2_error(const Field& approx, const Field& reference) {
  const double ref = l2_norm(reference);
  require_domain(ref > 0.0, "relative_l2_error: reference is zero");
  return l2_norm(approx - reference) / ref;
}

namespace {

Field periodized_poisson(const Grid& g, double t) {
  const double pi = std::numbers::pi;
  if (g.n == 1) {
    const double a = pi * t / g.L;
    // sum_m t / (pi ((x + 2Lm)^2 + t^2)) in closed form
    return sample(g, [&](std::span<const double> x) {
      return std::sinh(a) / (2.0 * g.L * (std::cosh(a) - std::cos(pi * x[0] / g.L)));
    });
  }
  // Poisson summation: Fourier coefficients e^{-t|xi|}, aliases folded onto the grid.
  const double step = 2.0 * pi / g.h();
  const int A = std::max(1, static_cast<int>(std::ceil(40.0 / (t * step))) + 1);
  SpectralField F{g, std::vector<cplx>(g.size())};
  int idx[3];
  for (std::size_t i = 0; i < F.coefficients.size(); ++i) {
    g.unflatten(i, idx);
    double xi[3] = {0, 0, 0};
    for (int a = 0; a < g.n; ++a) xi[a] = g.frequency(idx[a]);
    double s = 0.0;
    const int span = 2 * A + 1;
    int total = 1;
    for (int a = 0; a < g.n; ++a) total *= span;
    for (int c = 0; c < total; ++c) {
      int rem = c;
      double r2 = 0.0;
      for (int a = 0; a < g.n; ++a) {
        const int shift = rem % span - A;
        rem /= span;
        const double v = xi[a] + step * shift;
        r2 += v * v;
      }
      s += std::exp(-t * std::sqrt(r2));
    }
    F.coefficients[i] = s;
  }
  return from_spectral(F);
}

}  // namespace

Field test_field(const TestFieldSpec& spec, const Grid& grid) {
  using Kind = TestFieldSpec::Kind;
  switch (spec.kind) {
    case Kind::gaussian: {
      require_domain(spec.sigma >= grid.h() && spec.sigma <= grid.L / 4.0,
                     "gaussian: sigma must lie in [h, L/4]");
      const double inv = 1.0 / (2.0 * spec.sigma * spec.sigma);
      return sample(grid, [&](std::span<const double> x) {
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        return std::exp(-r2 * inv);
      });
    }
    case Kind::poisson_kernel:
      require_domain(spec.t >= grid.h(), "poisson_kernel: t must be at least the grid spacing");
      return periodized_poisson(grid, spec.t);
    case Kind::band_limited: {
      require_domain(spec.cutoff > 0.0, "band_limited: cutoff must be positive");
      require_domain(spec.cutoff <= grid.max_frequency() * (1.0 + 1e-12),
                     "band_limited: cutoff exceeds the grid's largest frequency");
      std::mt19937_64 rng(spec.seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      Field noise(grid);
      for (double& v : noise.values) v = normal(rng);
      SpectralField F = to_spectral(noise);
      int idx[3];
      for (std::size_t i = 0; i < F.coefficients.size(); ++i) {
        grid.unflatten(i, idx);
        bool nyquist = false;
        for (int a = 0; a < grid.n; ++a) nyquist = nyquist || idx[a] == grid.points / 2;
        const double r = grid.abs_frequency(i);
        if (nyquist || r > spec.cutoff || (spec.zero_dc && i == 0)) {
          F.coefficients[i] = 0.0;
          continue;
        }
        if (spec.spectral_decay != 0.0)
          F.coefficients[i] *= std::pow(1.0 + r * r, -0.5 * spec.spectral_decay);
      }
      Field f = from_spectral(F);
      const double rms = l2_norm(f) / std::sqrt(grid.measure());
      require_domain(rms > 0.0, "band_limited: cutoff keeps no frequencies");
      return (1.0 / rms) * f;
    }
    case Kind::bump: {
      require_domain(spec.radius > 2.0 * grid.h() && spec.radius <= grid.L,
                     "bump: radius must lie in (2h, L]");
      const double R2 = spec.radius * spec.radius;
      return sample(grid, [&](std::span<const double> x) {
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        const double s = r2 / R2;
        return s < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s)) : 0.0;
      });
    }
  }
  detail::throw_domain("test_field: unknown kind");
}

std::string to_string(TestFieldSpec::Kind kind) {
  switch (kind) {
    case TestFieldSpec::Kind::gaussian: return "gaussian";
    case TestFieldSpec::Kind::poisson_kernel: return "poisson_kernel";
    case TestFieldSpec::Kind::band_limited: return "band_limited";
    case TestFieldSpec::Kind::bump: return "bump";
  }
  return "unknown";
}

TestFieldSpec::Kind parse_test_field_kind(const std::string& name) {
  if (name == "gaussian") return TestFieldSpec::Kind::gaussian;
  if (name == "poisson_kernel") return TestFieldSpec::Kind::poisson_kernel;
  if (name == "band_limited") return TestFieldSpec::Kind::band_limited;
  if (name == "bump") return TestFieldSpec::Kind::bump;
  detail::throw_domain("unknown test field kind '" + name + "'");
}

void write_field_binary(const Field& f, std::ostream& os) {
  const std::int32_t n = f.grid.n;
  const std::int32_t pts = f.grid.points;
  const double L = f.grid.L;
  os.write(reinterpret_cast<const char*>(&n), sizeof n);
  os.write(reinterpret_cast<const char*>(&pts), sizeof pts);
  os.write(reinterpret_cast<const char*>(&L), sizeof L);
  os.write(reinterpret_cast<const char*>(f.values.data()),
           static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  require_structure(static_cast<bool>(os), "write_field_binary: stream failure");
}

Field read_field_binary(std::istream& is) {
  std::int32_t n = 0;
  std::int32_t pts = 0;
  double L = 0.0;
  is.read(reinterpret_cast<char*>(&n), sizeof n);
  is.read(reinterpret_cast<char*>(&pts), sizeof pts);
  is.read(reinterpret_cast<char*>(&L), sizeof L);
  require_structure(static_cast<bool>(is), "read_field_binary: truncated header");
  const Grid g = make_grid(n, pts, L);
  std::vector<double> v(g.size());
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  require_structure(static_cast<bool>(is), "read_field_binary: truncated payload");
  Field f(g, std::move(v));
  require_finite(f);
  return f;
}

void write_field_csv(const Field& f, std::ostream& os) {
  require_structure(f.grid.n == 1, "write_field_csv: only 1-D fields");
  os << "x,value\n";
  os.precision(17);
  for (int i = 0; i < f.grid.points; ++i) os << f.grid.coord(i) << ',' << f.values[i] << '\n';
}

}  // namespace fraclab
