#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace revmass {

/// Chebyshev series sum_k c_k T_k(x) mapped onto [lo, hi].
class ChebyshevSeries {
 public:
  ChebyshevSeries() = default;
  ChebyshevSeries(std::vector<double> coeffs, double lo, double hi);

  /// Interpolates f at the degree+1 Chebyshev-Lobatto points.
  static ChebyshevSeries interpolate(const std::function<double(double)>& f,
                                     double lo, double hi, std::size_t degree);

  /// Least-squares fit to scattered samples.
  static ChebyshevSeries fit(std::span<const double> xs,
                             std::span<const double> ys, double lo, double hi,
                             std::size_t degree);

  double operator()(double x) const;
  ChebyshevSeries derivative() const;

  std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  /// Largest |c_k| among the last `count` coefficients.
  double tail_magnitude(std::size_t count) const;

 private:
  std::vector<double> coeffs_;
  double lo_ = -1.0;
  double hi_ = 1.0;
};

}  // namespace revmass
