#include "revmass/chebyshev.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "revmass/numerics.hpp"

namespace revmass {

ChebyshevSeries::ChebyshevSeries(std::vector<double> coeffs, double lo,
                                 double hi)
    : coeffs_(std::move(coeffs)), lo_(lo), hi_(hi) {
  if (!(hi > lo)) throw NumericsError("ChebyshevSeries: empty interval");
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

ChebyshevSeries ChebyshevSeries::interpolate(
    const std::function<double(double)>& f, double lo, double hi,
    std::size_t degree) {
  if (degree == 0) return ChebyshevSeries({f(0.5 * (lo + hi))}, lo, hi);
  const std::size_t n = degree;
  std::vector<double> values(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const double t = std::cos(std::numbers::pi * static_cast<double>(j) /
                              static_cast<double>(n));
    values[j] = f(0.5 * (hi + lo) + 0.5 * (hi - lo) * t);
  }
  // Discrete cosine transform on the Lobatto grid.
  std::vector<double> c(n + 1, 0.0);
  for (std::size_t k = 0; k <= n; ++k) {
    double sum = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
      const double weight = (j == 0 || j == n) ? 0.5 : 1.0;
      sum += weight * values[j] *
             std::cos(std::numbers::pi * static_cast<double>(k * j) /
                      static_cast<double>(n));
    }
    c[k] = 2.0 * sum / static_cast<double>(n);
  }
  c[0] *= 0.5;
  c[n] *= 0.5;
  return ChebyshevSeries(std::move(c), lo, hi);
}

ChebyshevSeries ChebyshevSeries::fit(std::span<const double> xs,
                                     std::span<const double> ys, double lo,
                                     double hi, std::size_t degree) {
  if (xs.size() != ys.size() || xs.size() < degree + 1)
    throw NumericsError("ChebyshevSeries::fit: need at least degree+1 samples");
  const auto rows = static_cast<Eigen::Index>(xs.size());
  const auto cols = static_cast<Eigen::Index>(degree + 1);
  Eigen::MatrixXd basis(rows, cols);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double t = (2.0 * xs[i] - lo - hi) / (hi - lo);
    double tkm1 = 1.0;
    double tk = t;
    basis(i, 0) = 1.0;
    if (cols > 1) basis(i, 1) = t;
    for (Eigen::Index k = 2; k < cols; ++k) {
      const double next = 2.0 * t * tk - tkm1;
      tkm1 = tk;
      tk = next;
      basis(i, k) = tk;
    }
    rhs(i) = ys[i];
  }
  const Eigen::VectorXd sol = basis.colPivHouseholderQr().solve(rhs);
  return ChebyshevSeries(std::vector<double>(sol.data(), sol.data() + sol.size()),
                         lo, hi);
}

double ChebyshevSeries::operator()(double x) const {
  const double t = (2.0 * x - lo_ - hi_) / (hi_ - lo_);
  // Clenshaw recurrence
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 1;) {
    const double b0 = 2.0 * t * b1 - b2 + coeffs_[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + coeffs_[0];
}

ChebyshevSeries ChebyshevSeries::derivative() const {
  const std::size_t n = coeffs_.size();
  if (n <= 1) return ChebyshevSeries({0.0}, lo_, hi_);
  std::vector<double> d(n - 1, 0.0);
  // c'_{k-1} = c'_{k+1} + 2k c_k, then halve the constant term.
  double next2 = 0.0;
  double next1 = 0.0;
  for (std::size_t k = n - 1; k >= 1; --k) {
    const double value = next2 + 2.0 * static_cast<double>(k) * coeffs_[k];
    d[k - 1] = value;
    next2 = next1;
    next1 = value;
  }
  d[0] *= 0.5;
  const double scale = 2.0 / (hi_ - lo_);
  for (double& v : d) v *= scale;
  return ChebyshevSeries(std::move(d), lo_, hi_);
}

double ChebyshevSeries::tail_magnitude(std::size_t count) const {
  double worst = 0.0;
  const std::size_t n = coeffs_.size();
  for (std::size_t k = n > count ? n - count : 0; k < n; ++k)
    worst = std::max(worst, std::abs(coeffs_[k]));
  return worst;
}

}  // namespace revmass
