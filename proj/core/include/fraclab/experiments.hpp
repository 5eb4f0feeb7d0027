#pragma once

#include <string>
#include <vector>

#include "fraclab/fields.hpp"
#include "fraclab/hankel.hpp"
#include "fraclab/report.hpp"
#include "fraclab/varlp.hpp"

namespace fraclab {

/// eps = 2^{-first} .. 2^{-last}.
std::vector<double> dyadic_eps(int first, int last);

struct TheoremMainOptions {
  std::string field_name = "custom";
  double threshold = 1e-3;
  double order_target = 1.0;     ///< first order from A(r) = 1 - alpha r / 2 + O(r^2)
  double order_tolerance = 0.3;
  bool compare_hypersingular = true;
};

/// e(eps) = || eps^{-alpha}(I - P_eps)^alpha f - |xi|^alpha f ||_{p(.)}. PASS when e strictly
/// decreases along eps and the last value is below the threshold. The fitted order and the
/// distance between the two truncated operators are recorded as metrics.
ConvergenceReport run_theorem_main(const Field& f, double alpha, int ell,
                                   const std::vector<double>& eps_list, const ExponentFamily& p,
                                   const TheoremMainOptions& options = {});

struct TheoremRateOptions {
  std::string field_name = "custom";
  double slope_tolerance = 0.05;
  bool expected_negative = false;
};

/// Slope of log ||(I - P_eps)^alpha f||_{p(.)} against log eps; PASS when within tolerance of
/// alpha. norm_value holds ||(I - P_eps)^alpha f|| / eps^alpha.
ConvergenceReport run_theorem_rate(const Field& f, double alpha, const std::vector<double>& eps_list,
                                   const ExponentFamily& p, const TheoremRateOptions& options = {});

struct BesselCharacterizationOptions {
  std::string field_name = "custom";
  std::vector<double> eps_list{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
  double cauchy_tolerance = 1e-6;
  double ratio_low = 0.1;
  double ratio_high = 10.0;
  double inversion_tolerance = 1e-6;
};

/// f = G^alpha phi: (i) eps^{-alpha}(I - P_eps)^alpha f is Cauchy in eps, (ii) the ratio
/// (||f|| + ||limit||) / ||phi|| lies in [ratio_low, ratio_high], (iii) D^alpha I^alpha phi0 = phi0
/// for the zero-mean part phi0. Requires 0 < alpha < n and p_plus < n / alpha.
ConvergenceReport run_bessel_characterization(const Field& phi, double alpha, const ExponentFamily& p,
                                              const BesselCharacterizationOptions& options = {});

/// Norm ratio (||G^alpha phi|| + ||D^alpha G^alpha phi||) / ||phi|| over a catalogue;
/// metrics ratio_min, ratio_max, ratio_spread = max/min.
ConvergenceReport run_norm_equivalence(const std::vector<Field>& catalogue, double alpha,
                                       const ExponentFamily& p);

struct FourierIdentityOptions {
  double tolerance = 1e-10;
  bool check_kernel_mass = true;
  double kernel_mass_tolerance = 1e-3;
};

/// (i) A(eps|xi|) F(D_eps f) = F(eps^{-alpha}(I - P_eps)^alpha f) and its inverse with B,
/// coefficientwise; (ii) c + int a = 1 in dimension f.grid.n (kernel_mass_cached).
ConvergenceReport run_fourier_identity(const Field& f, double alpha, int ell,
                                       const std::vector<double>& eps_list,
                                       const FourierIdentityOptions& options = {});

/// Cached kernel_mass keyed by (n, ell, alpha) with default options.
const KernelMassResult& kernel_mass_cached(int n, int ell, double alpha);

}  // namespace fraclab
