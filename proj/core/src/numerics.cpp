#include "fraclab/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "fraclab/error.hpp"

namespace fraclab {

namespace {

GaussRule build_gauss_legendre(int order) {
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  require_domain(order >= 2 && order <= 128, "gauss_legendre: order must lie in [2, 128]");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_gauss_legendre(order)).first;
  return it->second;
}

double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           int panels, int order) {
  require_domain(panels >= 1, "integrate_composite: panels must be positive");
  const GaussRule& rule = gauss_legendre(order);
  const double width = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    double panel = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      panel += rule.weights[i] * f(mid + 0.5 * width * rule.nodes[i]);
    sum += 0.5 * width * panel;
  }
  return sum;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, unsigned max_depth) {
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, max_depth, tol, &error);
  if (!std::isfinite(value) || error > 100.0 * tol * std::max(1.0, std::abs(value))) {
    std::ostringstream os;
    os << "adaptive quadrature on [" << a << ", " << b << "] did not converge: estimate "
       << value << ", error " << error;
    throw NumericalError(os.str());
  }
  return value;
}

double integrate_endpoint_singular(const std::function<double(double)>& f, double a,
                                   double b, double tol) {
  boost::math::quadrature::tanh_sinh<double> integrator(12);
  double error = 0.0;
  double l1 = 0.0;
  const double value = integrator.integrate(f, a, b, tol, &error, &l1);
  if (!std::isfinite(value) || error > 1e3 * tol * std::max(1.0, l1)) {
    std::ostringstream os;
    os << "tanh-sinh quadrature on [" << a << ", " << b << "] did not converge: error "
       << error;
    throw NumericalError(os.str());
  }
  return value;
}

Extrapolation extrapolate_to_zero(std::span<const double> h, std::span<const double> y) {
  require_structure(h.size() == y.size() && !h.empty(),
                    "extrapolate_to_zero: need matching non-empty samples");
  const std::size_t m = h.size();
  std::vector<double> table(y.begin(), y.end());
  std::vector<double> diagonal{table[m - 1]};
  // Neville: after pass k, table[i] holds the degree-k interpolant at 0 through h[i..i+k].
  for (std::size_t k = 1; k < m; ++k) {
    for (std::size_t i = 0; i + k < m; ++i) {
      table[i] = (h[i + k] * table[i] - h[i] * table[i + 1]) / (h[i + k] - h[i]);
    }
    diagonal.push_back(table[m - 1 - k]);
  }
  Extrapolation out;
  out.value = diagonal.back();
  out.error_estimate =
      diagonal.size() >= 2 ? std::abs(diagonal.back() - diagonal[diagonal.size() - 2]) : 0.0;
  return out;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  require_structure(x.size() == y.size() && x.size() >= 2, "fit_line: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require_domain(sxx > 0.0, "fit_line: abscissae are all equal");
  LinearFit fit;
  fit.points = x.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_stderr = std::sqrt(rss / (n - 2.0) / sxx);
  }
  return fit;
}

LinearFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  lx.reserve(x.size());
  ly.reserve(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    require_domain(x[i] > 0.0 && y[i] != 0.0, "fit_loglog: needs positive x and nonzero y");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(std::abs(y[i])));
  }
  return fit_line(lx, ly);
}

std::vector<double> logspace(double lo, double hi, std::size_t count) {
  require_domain(lo > 0.0 && hi > 0.0 && count >= 2, "logspace: positive bounds, >= 2 points");
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

unsigned worker_threads() {
  if (const char* env = std::getenv("FRACLAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(worker_threads(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double unit_sphere_area(int n) {
  require_domain(n >= 1, "unit_sphere_area: n >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

}  // namespace fraclab
