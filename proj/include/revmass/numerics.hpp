#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace revmass {

/// Raised for numerical failures: non-finite integrands, non-convergent
/// quadrature, ill-posed fits.
class NumericsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gauss-Legendre nodes and weights on [-1, 1], ascending nodes.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(std::size_t n);

/// Composite Gauss-Legendre settings.
///
/// pole_margin is the fraction of the parameter interval near each pole
/// inside which curvature formulas switch to their pole expansions.
struct QuadSpec {
  std::size_t panels = 16;
  std::size_t nodes_per_panel = 16;
  double tol = 1e-10;
  double pole_margin = 1e-4;
  std::size_t max_doublings = 8;

  void validate() const;
};

struct Integral {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t panels_used = 0;
  bool converged = false;
};

/// Composite Gauss-Legendre sum over a fixed number of panels.
double composite_gauss(const std::function<double(double)>& f, double lo,
                       double hi, std::size_t panels,
                       std::size_t nodes_per_panel);

/// Integrates f over [lo, hi], doubling panels until two successive sums
/// agree within spec.tol. Throws NumericsError on a non-finite sample or
/// when max_doublings is exhausted.
Integral integrate(const std::function<double(double)>& f, double lo,
                   double hi, const QuadSpec& spec);

/// Interior nodes of the composite rule, ascending. Useful for evaluating
/// sup-norms on the same points a quadrature sees.
std::vector<double> composite_nodes(double lo, double hi, std::size_t panels,
                                    std::size_t nodes_per_panel);

struct OrderFit {
  std::vector<std::pair<double, double>> pairs;
  double fitted_order = 0.0;
  double fitted_constant = 0.0;
  double r_squared = 0.0;
};

/// Least-squares fit of log(error) = log(C) + order * log(a).
OrderFit fit_order(std::span<const std::pair<double, double>> pairs);

/// Max over interior samples of |df(x) - FD(f, x)| / (|df(x)| + 1e-14),
/// central differences with step 1e-6 * (hi - lo).
double check_derivatives(const std::function<double(double)>& f,
                         const std::function<double(double)>& df, double lo,
                         double hi, std::size_t samples);

/// Evaluates a quantity that is even about both ends of [0, l] and whose
/// raw formula degenerates (0/0) at the ends. Inside the pole zone
/// [0, margin*l) the value is the quadratic through the pole limit and the
/// zone boundary; the pole limit is obtained by Richardson extrapolation
/// from raw samples at 0.001*l, 0.002*l, 0.004*l and 0.008*l.
double pole_safe(const std::function<double(double)>& raw, double phi,
                 double l, double margin);

/// Richardson limit of an even function at the endpoint `end` of [0, l]
/// approached from inside (end is 0 or l).
double even_pole_limit(const std::function<double(double)>& raw, double end,
                       double l);

}  // namespace revmass
