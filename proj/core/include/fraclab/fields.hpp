#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fraclab {

/// Uniform periodic box [-L, L)^n with `points` samples per axis.
struct Grid {
  int n = 1;
  int points = 64;
  double L = 1.0;

  double h() const { return 2.0 * L / points; }
  std::size_t size() const;
  double measure() const;       ///< (2L)^n
  double cell_volume() const;   ///< h^n
  double coord(int i) const { return -L + i * h(); }
  /// Signed wavenumber pi*k/L of FFT index i along one axis.
  double frequency(int i) const;
  /// Per-axis indices of a flat (row-major) index.
  void unflatten(std::size_t flat, int* idx) const;
  /// Euclidean length of the frequency vector at a flat index.
  double abs_frequency(std::size_t flat) const;
  /// Euclidean length of the coordinate vector at a flat index.
  double abs_coord(std::size_t flat) const;
  double max_frequency() const { return 3.141592653589793 * (points / 2) / L; }

  bool operator==(const Grid&) const = default;
};

/// Validates n in {1,2,3}, points a power of two >= 16, L > 0.
Grid make_grid(int n, int points, double L);

struct Field {
  Grid grid;
  std::vector<double> values;

  Field() = default;
  Field(const Grid& g, double fill = 0.0);
  Field(const Grid& g, std::vector<double> v);

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double s);
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

/// Samples g(x) at every grid point; x has grid.n entries.
Field sample(const Grid& grid, const std::function<double(std::span<const double>)>& g);

/// Coefficients approximating the continuous transform F f(xi) = int f(x) e^{-i x.xi} dx
/// at the grid's discrete frequencies (FFT order, row-major).
struct SpectralField {
  Grid grid;
  std::vector<std::complex<double>> coefficients;
};

SpectralField to_spectral(const Field& f);
/// Inverse of to_spectral; the imaginary part of the back-transform is dropped.
Field from_spectral(const SpectralField& F);

/// Collected non-fatal notes (DC zeroing, clipped ranges).
struct Diagnostics {
  std::vector<std::string> warnings;
};

/// Multiplies coefficients by m(|xi|). A non-finite m(0) zeroes the DC coefficient
/// (warning recorded unless the field is already zero-mean); any other non-finite
/// value is a domain error.
void multiply_radial(SpectralField& F, const std::function<double(double)>& m,
                     Diagnostics* diag = nullptr);
Field apply_radial_multiplier(const Field& f, const std::function<double(double)>& m,
                              Diagnostics* diag = nullptr);

enum class ShiftMethod { spectral, cubic };

/// (tau_h f)(x) = f(x - h) on the periodic box.
Field shift_evaluate(const Field& f, std::span<const double> offset,
                     ShiftMethod method = ShiftMethod::spectral);

/// Spectral shift f(x - h) from precomputed coefficients; any real offset (periodic wrap).
Field shift_from_spectral(const SpectralField& F, std::span<const double> offset);

/// Norms under trapezoidal quadrature on the box.
double l2_norm(const Field& f);
double max_abs(const Field& f);
double integral(const Field& f);
double relative_l2_error(const Field& approx, const Field& reference);

struct TestFieldSpec {
  enum class Kind { gaussian, poisson_kernel, band_limited, bump };
  Kind kind = Kind::gaussian;
  double sigma = 1.0;      ///< gaussian: exp(-|x|^2 / (2 sigma^2))
  double t = 1.0;          ///< poisson_kernel parameter
  std::uint64_t seed = 1;  ///< band_limited
  double cutoff = 4.0;     ///< band_limited: max |xi| kept
  bool zero_dc = true;     ///< band_limited
  double spectral_decay = 0.0;  ///< band_limited: weight (1 + |xi|^2)^{-decay/2}
  double radius = 1.0;     ///< bump support radius
};

/// Test-field catalogue. The Poisson kernel is periodized over the box so its
/// discrete mass is 1.
Field test_field(const TestFieldSpec& spec, const Grid& grid);

std::string to_string(TestFieldSpec::Kind kind);
TestFieldSpec::Kind parse_test_field_kind(const std::string& name);

/// Binary layout: int32 n, int32 points, float64 L, then points^n float64 values in
/// row-major order (last axis fastest), all little-endian host order.
void write_field_binary(const Field& f, std::ostream& os);
Field read_field_binary(std::istream& is);
/// CSV for n = 1: header "x,value", one row per grid point.
void write_field_csv(const Field& f, std::ostream& os);

}  // namespace fraclab
