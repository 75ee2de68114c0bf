#include "revmass/numerics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

namespace revmass {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(std::size_t n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (std::size_t k = 2; k <= n; ++k) {
    const double pk =
        ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
    p0 = p1;
    p1 = pk;
  }
  const double dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

GaussRule compute_rule(std::size_t n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

GaussRule gauss_legendre(std::size_t n) {
  if (n == 0) throw NumericsError("gauss_legendre: n must be positive");
  static std::mutex mutex;
  static std::map<std::size_t, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

void QuadSpec::validate() const {
  if (panels == 0) throw NumericsError("QuadSpec: panels must be positive");
  if (nodes_per_panel < 4 || nodes_per_panel > 64)
    throw NumericsError("QuadSpec: nodes_per_panel must lie in [4, 64]");
  if (!(tol > 0.0)) throw NumericsError("QuadSpec: tol must be positive");
  if (!(pole_margin >= 0.0 && pole_margin < 0.01))
    throw NumericsError("QuadSpec: pole_margin must lie in [0, 0.01)");
}

double composite_gauss(const std::function<double(double)>& f, double lo,
                       double hi, std::size_t panels,
                       std::size_t nodes_per_panel) {
  const GaussRule rule = gauss_legendre(nodes_per_panel);
  const double width = (hi - lo) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = lo + width * static_cast<double>(p);
    const double mid = a + 0.5 * width;
    double panel_sum = 0.0;
    for (std::size_t k = 0; k < nodes_per_panel; ++k) {
      const double x = mid + 0.5 * width * rule.nodes[k];
      const double fx = f(x);
      if (!std::isfinite(fx))
        throw NumericsError("integrate: non-finite integrand at x = " +
                            std::to_string(x));
      panel_sum += rule.weights[k] * fx;
    }
    total += 0.5 * width * panel_sum;
  }
  return total;
}

Integral integrate(const std::function<double(double)>& f, double lo,
                   double hi, const QuadSpec& spec) {
  spec.validate();
  Integral out;
  std::size_t panels = spec.panels;
  double coarse = composite_gauss(f, lo, hi, panels, spec.nodes_per_panel);
  for (std::size_t d = 0; d < spec.max_doublings; ++d) {
    panels *= 2;
    const double fine = composite_gauss(f, lo, hi, panels, spec.nodes_per_panel);
    out.value = fine;
    out.error_estimate = std::abs(fine - coarse);
    out.panels_used = panels;
    if (out.error_estimate < spec.tol) {
      out.converged = true;
      return out;
    }
    coarse = fine;
  }
  throw NumericsError("integrate: no convergence after " +
                      std::to_string(spec.max_doublings) +
                      " panel doublings (last estimate " +
                      std::to_string(out.error_estimate) + ")");
}

std::vector<double> composite_nodes(double lo, double hi, std::size_t panels,
                                    std::size_t nodes_per_panel) {
  const GaussRule rule = gauss_legendre(nodes_per_panel);
  const double width = (hi - lo) / static_cast<double>(panels);
  std::vector<double> xs;
  xs.reserve(panels * nodes_per_panel);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = lo + width * (static_cast<double>(p) + 0.5);
    for (double t : rule.nodes) xs.push_back(mid + 0.5 * width * t);
  }
  return xs;
}

OrderFit fit_order(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 3)
    throw NumericsError("fit_order: need at least 3 (a, error) pairs");
  const double n = static_cast<double>(pairs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [a, e] : pairs) {
    if (!(a > 0.0) || !(e > 0.0))
      throw NumericsError("fit_order: scales and errors must be positive");
    const double x = std::log(a);
    const double y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom <= 0.0) throw NumericsError("fit_order: scales must be distinct");
  OrderFit fit;
  fit.pairs.assign(pairs.begin(), pairs.end());
  fit.fitted_order = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.fitted_order * sx) / n;
  fit.fitted_constant = std::exp(intercept);
  const double mean_y = sy / n;
  double ss_tot = 0.0, ss_res = 0.0;
  for (const auto& [a, e] : pairs) {
    const double y = std::log(e);
    const double yhat = intercept + fit.fitted_order * std::log(a);
    ss_tot += (y - mean_y) * (y - mean_y);
    ss_res += (y - yhat) * (y - yhat);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

double check_derivatives(const std::function<double(double)>& f,
                         const std::function<double(double)>& df, double lo,
                         double hi, std::size_t samples) {
  const double step = 1e-6 * (hi - lo);
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x =
        lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(samples);
    const double fd = (f(x + step) - f(x - step)) / (2.0 * step);
    const double exact = df(x);
    worst = std::max(worst, std::abs(exact - fd) / (std::abs(exact) + 1e-14));
  }
  return worst;
}

double even_pole_limit(const std::function<double(double)>& raw, double end,
                       double l) {
  // Richardson table in h^2 on samples at h, 2h, 4h, 8h.
  constexpr int kLevels = 4;
  const double sign = end == 0.0 ? 1.0 : -1.0;
  const double h = 1e-3 * l;
  std::array<double, kLevels> f;
  for (int i = 0; i < kLevels; ++i) f[i] = raw(end + sign * h * double(1 << i));
  for (int k = 1; k < kLevels; ++k) {
    const double p = std::pow(4.0, k);
    for (int i = 0; i + k < kLevels; ++i) f[i] = (p * f[i] - f[i + 1]) / (p - 1.0);
  }
  return f[0];
}

double pole_safe(const std::function<double(double)>& raw, double phi,
                 double l, double margin) {
  const double eps = margin * l;
  if (phi >= eps && phi <= l - eps) return raw(phi);
  const bool left = phi < eps;
  const double end = left ? 0.0 : l;
  const double dist = left ? phi : l - phi;
  const double f0 = even_pole_limit(raw, end, l);
  if (eps <= 0.0) return f0;
  const double fe = raw(left ? eps : l - eps);
  const double s = dist / eps;
  return f0 + (fe - f0) * s * s;
}

}  // namespace revmass
