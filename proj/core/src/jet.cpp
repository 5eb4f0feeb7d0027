#include "fraclab/jet.hpp"

#include <cmath>

#include "fraclab/error.hpp"

namespace fraclab {

namespace {

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

// table[k][j] = B_{k,j}(x_1, ...), 0 <= j <= k <= K.
std::vector<std::vector<double>> bell_table(std::span<const double> x, int K) {
  std::vector<std::vector<double>> t(K + 1, std::vector<double>(K + 1, 0.0));
  t[0][0] = 1.0;
  for (int k = 1; k <= K; ++k) {
    for (int j = 1; j <= k; ++j) {
      double s = 0.0;
      for (int i = 1; i <= k - j + 1; ++i) {
        if (i - 1 >= static_cast<int>(x.size())) break;
        s += binomial(k - 1, i - 1) * x[i - 1] * t[k - i][j - 1];
      }
      t[k][j] = s;
    }
  }
  return t;
}

void require_same_order(const Jet& a, const Jet& b) {
  require_structure(a.order() == b.order(), "Jet: operands have different orders");
}

}  // namespace

Jet::Jet(int order, double value) : d_(order + 1, 0.0) {
  require_domain(order >= 0, "Jet: negative order");
  d_[0] = value;
}

Jet Jet::constant(int order, double value) { return Jet(order, value); }

Jet Jet::variable(int order, double x) {
  Jet j(order, x);
  if (order >= 1) j.d_[1] = 1.0;
  return j;
}

Jet Jet::from(std::vector<double> derivs) {
  require_structure(!derivs.empty(), "Jet::from: empty derivative list");
  Jet j;
  j.d_ = std::move(derivs);
  return j;
}

Jet& Jet::operator+=(const Jet& o) {
  require_same_order(*this, o);
  for (std::size_t k = 0; k < d_.size(); ++k) d_[k] += o.d_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  require_same_order(*this, o);
  for (std::size_t k = 0; k < d_.size(); ++k) d_[k] -= o.d_[k];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& v : d_) v *= s;
  return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator*(double s, Jet a) { return a *= s; }

Jet operator*(const Jet& a, const Jet& b) {
  require_same_order(a, b);
  const int K = a.order();
  Jet out(K);
  for (int k = 0; k <= K; ++k) {
    double s = 0.0;
    for (int j = 0; j <= k; ++j) s += binomial(k, j) * a[j] * b[k - j];
    out[k] = s;
  }
  return out;
}

Jet operator/(const Jet& u, const Jet& v) {
  require_same_order(u, v);
  require_domain(v[0] != 0.0, "Jet quotient: denominator vanishes");
  const int K = u.order();
  Jet q(K);
  // (u/v)^{(k)} = (u^{(k)} - sum_{j<k} binom(k,j) v^{(k-j)} (u/v)^{(j)}) / v
  for (int k = 0; k <= K; ++k) {
    double s = u[k];
    for (int j = 0; j < k; ++j) s -= binomial(k, j) * v[k - j] * q[j];
    q[k] = s / v[0];
  }
  return q;
}

double partial_bell(int k, int j, std::span<const double> x) {
  require_domain(k >= 0 && j >= 0, "partial_bell: negative index");
  if (j > k) return 0.0;
  return bell_table(x, k)[k][j];
}

Jet compose(std::span<const double> outer, const Jet& g) {
  const int K = g.order();
  require_structure(static_cast<int>(outer.size()) >= K + 1,
                    "compose: outer derivative list shorter than jet order");
  std::vector<double> x(g.derivs().begin() + 1, g.derivs().end());
  const auto t = bell_table(x, K);
  Jet out(K, outer[0]);
  for (int k = 1; k <= K; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += outer[j] * t[k][j];
    out[k] = s;
  }
  return out;
}

Jet reciprocal(const Jet& v) {
  require_domain(v[0] != 0.0, "Jet reciprocal: value vanishes");
  const int K = v.order();
  std::vector<double> outer(K + 1);
  double fact = 1.0;
  for (int j = 0; j <= K; ++j) {
    if (j > 0) fact *= j;
    outer[j] = ((j % 2) ? -1.0 : 1.0) * fact * std::pow(v[0], -j - 1);
  }
  return compose(outer, v);
}

Jet pow(const Jet& g, double a) {
  const int K = g.order();
  std::vector<double> outer(K + 1);
  double coef = 1.0;
  for (int j = 0; j <= K; ++j) {
    outer[j] = coef == 0.0 ? 0.0 : coef * std::pow(g[0], a - j);
    coef *= (a - j);
  }
  return compose(outer, g);
}

Jet exp(const Jet& g) {
  std::vector<double> outer(g.order() + 1, std::exp(g[0]));
  return compose(outer, g);
}

Jet expm1_neg_over(const Jet& x) {
  const int K = x.order();
  const double x0 = x[0];
  std::vector<double> outer(K + 1, 0.0);
  if (std::abs(x0) < 0.5) {
    // h(x) = sum_j (-x)^j / (j+1)!, differentiated termwise.
    for (int k = 0; k <= K; ++k) {
      double s = 0.0;
      double fall = 1.0;  // j!/(j-k)!
      for (int i = 1; i <= k; ++i) fall *= i;
      double inv_fact = 1.0;  // 1/(j+1)!
      for (int i = 2; i <= k + 1; ++i) inv_fact /= i;
      double xp = 1.0;
      for (int j = k; j < k + 60; ++j) {
        const double term = ((j % 2) ? -1.0 : 1.0) * fall * xp * inv_fact;
        s += term;
        if (std::abs(term) < 1e-18 * std::abs(s) && j > k + 3) break;
        fall *= static_cast<double>(j + 1) / static_cast<double>(j + 1 - k);
        inv_fact /= (j + 2);
        xp *= x0;
      }
      outer[k] = s;
    }
  } else {
    const double e = std::exp(-x0);
    Jet u(K, -std::expm1(-x0));
    for (int j = 1; j <= K; ++j) u[j] = ((j % 2) ? 1.0 : -1.0) * e;
    Jet inv(K);
    double fact = 1.0;
    for (int j = 0; j <= K; ++j) {
      if (j > 0) fact *= j;
      inv[j] = ((j % 2) ? -1.0 : 1.0) * fact / std::pow(x0, j + 1);
    }
    const Jet h = u * inv;
    for (int k = 0; k <= K; ++k) outer[k] = h[k];
  }
  return compose(outer, x);
}

}  // namespace fraclab
