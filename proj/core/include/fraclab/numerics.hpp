#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fraclab {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached Gauss-Legendre rule with `order` points (Newton iteration on P_order).
const GaussRule& gauss_legendre(int order);

/// Composite Gauss-Legendre over [a, b] split into `panels` equal panels.
double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           int panels, int order = 10);

/// Adaptive Gauss-Kronrod (G7-K15) over a finite interval. Throws NumericalError
/// when the estimated error stays above `tol * max(1, |result|)`.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-12, unsigned max_depth = 18);

/// Double-exponential rule for integrands with integrable endpoint singularities.
double integrate_endpoint_singular(const std::function<double(double)>& f, double a,
                                   double b, double tol = 1e-12);

/// Polynomial (Neville) extrapolation of samples y(h_i) to h = 0.
struct Extrapolation {
  double value = 0.0;
  double error_estimate = 0.0;  ///< |last - previous| diagonal entries
};
Extrapolation extrapolate_to_zero(std::span<const double> h, std::span<const double> y);

/// Least-squares line y = intercept + slope * x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::size_t points = 0;
};
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Slope of log|y| against log x.
LinearFit fit_loglog(std::span<const double> x, std::span<const double> y);

/// Logarithmically spaced points, both ends included.
std::vector<double> logspace(double lo, double hi, std::size_t count);

/// Worker count: FRACLAB_THREADS if set and positive, else hardware concurrency (>= 1).
unsigned worker_threads();

/// Runs body(i) for i in [0, count) on worker_threads() threads. Each index is visited
/// exactly once; the first exception thrown by any body is rethrown after joining.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Surface area of the unit sphere S^{n-1} in R^n (|S^0| = 2).
double unit_sphere_area(int n);

}  // namespace fraclab
