#pragma once

#include <span>
#include <vector>

namespace fraclab {

/// Truncated Taylor data of a scalar function at one point: d[k] is the k-th
/// derivative (not divided by k!). All operands of a binary op share the order.
class Jet {
 public:
  Jet() = default;
  explicit Jet(int order, double value = 0.0);
  static Jet constant(int order, double value);
  static Jet variable(int order, double x);  ///< identity function at x
  static Jet from(std::vector<double> derivs);

  int order() const { return static_cast<int>(d_.size()) - 1; }
  double operator[](int k) const { return d_[k]; }
  double& operator[](int k) { return d_[k]; }
  const std::vector<double>& derivs() const { return d_; }

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);

 private:
  std::vector<double> d_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(Jet a, double s);
Jet operator*(double s, Jet a);
Jet operator*(const Jet& a, const Jet& b);  ///< Leibniz rule
Jet operator/(const Jet& u, const Jet& v);  ///< quotient recurrence

/// Faa di Bruno: outer[j] = f^{(j)}(g(x)) for j = 0..order, g given as a jet.
Jet compose(std::span<const double> outer, const Jet& g);

Jet reciprocal(const Jet& v);
Jet pow(const Jet& g, double a);  ///< requires g[0] > 0 unless a is a nonnegative integer
Jet exp(const Jet& g);
Jet expm1_neg_over(const Jet& x);  ///< (1 - e^{-x}) / x, analytic at x = 0

/// Partial Bell polynomial B_{k,j}(x_1, ..., x_{k-j+1}); x[i-1] holds x_i.
double partial_bell(int k, int j, std::span<const double> x);

}  // namespace fraclab
