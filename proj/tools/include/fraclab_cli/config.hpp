#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraclab/fields.hpp"
#include "fraclab/varlp.hpp"

namespace fraclab::cli {

/// Malformed, incomplete or inadmissible configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment {
  theorem_main,
  theorem_rate,
  bessel_characterization,
  norm_equivalence,
  fourier_identity
};

std::string to_string(Experiment e);

/// Flat `key = value` configuration; `#` starts a comment. Unknown or repeated keys are
/// rejected. Keys and defaults:
///   experiment        (required) theorem_main | theorem_rate | bessel_characterization |
///                     norm_equivalence | fourier_identity
///   n = 1, points = 1024, L = 16          grid [-L, L)^n
///   alpha = 0.5, ell = 2
///   eps                comma-separated, strictly decreasing; or
///   eps_dyadic         "first,last" for 2^-first .. 2^-last
///   field = gaussian   gaussian | poisson_kernel | band_limited | bump
///   sigma = 1, t = 1, cutoff = 4, spectral_decay = 0, radius = 1, zero_dc = true
///   seed = 1
///   exponent = constant, p_infinity = 2, p_a = 0
///   threshold = 1e-3                      theorem_main
///   slope_tolerance = 0.05                theorem_rate
///   expected_negative = false
///   catalogue_size = 10                   norm_equivalence (seeds seed, seed+1, ...)
///   kernel_mass = true                    fourier_identity
///   output_json, output_csv               default <experiment>.json / .csv
struct RunConfig {
  Experiment experiment = Experiment::theorem_main;
  int n = 1;
  int points = 1024;
  double L = 16.0;
  double alpha = 0.5;
  int ell = 2;
  std::vector<double> eps;
  TestFieldSpec field;
  ExponentFamily exponent;
  double threshold = 1e-3;
  double slope_tolerance = 0.05;
  bool expected_negative = false;
  int catalogue_size = 10;
  bool kernel_mass = true;
  std::filesystem::path output_json;
  std::filesystem::path output_csv;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

/// Module preconditions checked before dispatch; throws ConfigError naming the violation.
void validate_config(const RunConfig& config);

}  // namespace fraclab::cli
