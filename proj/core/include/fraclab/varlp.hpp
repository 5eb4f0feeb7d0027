#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fraclab/fields.hpp"

namespace fraclab {

/// Variable exponent sampled on a grid. p_minus / p_plus are the exact min / max of
/// the samples; p_infinity is the limit value toward the box boundary.
struct ExponentField {
  Grid grid;
  std::vector<double> samples;
  double p_minus = 1.0;
  double p_plus = 1.0;
  double p_infinity = 1.0;
};

/// Validates 1 <= p < infinity at every sample and fills p_minus / p_plus.
ExponentField make_exponent(const Grid& grid, std::vector<double> samples, double p_infinity);
ExponentField constant_exponent(const Grid& grid, double p);

/// Named exponent families: constant p; rational decay p_inf + a/(1+|x|^2);
/// log decay p_inf + a/ln(2+|x|).
struct ExponentFamily {
  enum class Kind { constant, rational_decay, log_decay };
  Kind kind = Kind::constant;
  double p_infinity = 2.0;
  double a = 0.0;

  double value(double r) const;
  std::string name() const;
};

ExponentFamily parse_exponent_family(const std::string& name, double p_infinity, double a);
ExponentField exponent_from_family(const Grid& grid, const ExponentFamily& family);

/// Trapezoidal rho_p(f) = sum |f|^p h^n over the periodic box.
double modular(const Field& f, const ExponentField& p);

/// Luxemburg norm inf{lambda > 0 : rho_p(f/lambda) <= 1} by bisection; the result
/// satisfies |rho_p(f/lambda) - 1| <= tol, or is 0 when f vanishes on the grid.
double luxemburg_norm(const Field& f, const ExponentField& p, double tol = 1e-12);

struct ConditionCertificate {
  enum class Kind { log, decay };
  Kind kind = Kind::log;
  double constant = 0.0;
  std::size_t witness_x = 0;  ///< flat grid indices
  std::size_t witness_y = 0;  ///< equals witness_x for the decay condition
  std::size_t pairs_examined = 0;
};

/// max |p(x)-p(y)| (-ln|x-y|) over pairs with 0 < |x-y| <= 1/2. Every nearest-neighbour
/// pair is examined, plus `pair_budget` random pairs drawn from `seed`.
ConditionCertificate check_log_condition(const ExponentField& p, std::size_t pair_budget,
                                         std::uint64_t seed = 0);

/// max_x |p(x) - p_infinity| ln(2 + |x|).
ConditionCertificate check_decay_condition(const ExponentField& p);

/// Re-evaluates the defining quotient at the certificate's witness.
double certificate_quotient(const ExponentField& p, const ConditionCertificate& c);

/// Log-condition constants along a refinement sequence; monotone_growth flags a
/// constant that increases at every refinement (the signature of a discontinuity).
struct RefinementTrend {
  std::vector<double> constants;
  bool monotone_growth = false;
};
RefinementTrend log_condition_trend(const std::function<ExponentField(const Grid&)>& make,
                                    const std::vector<Grid>& grids, std::size_t pair_budget,
                                    std::uint64_t seed = 0);

/// p' = p/(p-1) pointwise; requires p_minus > 1.
ExponentField conjugate_exponent(const ExponentField& p);

}  // namespace fraclab
