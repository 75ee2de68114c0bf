#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "revmass/numerics.hpp"
#include "revmass/surface_geometry.hpp"

namespace revmass {

class EmbeddingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Generating-curve data of the Euclidean image at one parameter value.
/// The image is (a u cos t, a u sin t, a v).
struct EmbeddingJet {
  double u = 0.0, du = 0.0, d2u = 0.0;
  double dv = 0.0, d2v = 0.0;
  double T = 0.0, dT = 0.0;
};

class EmbeddedCurve {
 public:
  EmbeddedCurve(InducedMetric im, double a, double v0, double pole_margin);

  EmbeddingJet jet(double phi) const;
  double u(double phi) const;
  /// v0 + integral of v' over [0, phi].
  double v(double phi) const;
  /// v(l) - v(0)
  double closure_gap() const;

  /// Metric induced on the image by the Euclidean metric.
  InducedMetric reinduced() const;

  const InducedMetric& metric() const { return im_; }
  double a() const { return a_; }
  double l() const { return im_.l(); }
  double v0() const { return v0_; }
  double pole_margin() const { return margin_; }

 private:
  EmbeddingJet raw_jet(double phi) const;

  InducedMetric im_;
  double a_;
  double v0_;
  double margin_;
};

/// Throws EmbeddingError when K <= 0 or the radicand E - R'^2 is negative
/// beyond roundoff somewhere on (0, l).
EmbeddedCurve embed_revolution(const InducedMetric& im, double a, double v0 = 0.0,
                               double pole_margin = kDefaultPoleMargin);

/// Euclidean mean curvature of the image.
double reference_mean_curvature(const EmbeddedCurve& ec, double phi);

/// Gauss curvature of the image computed from (u, v).
double embedded_gauss_curvature(const EmbeddedCurve& ec, double phi);

/// sup over interior quadrature nodes of |H0(im2) - H0(im1)|.
double embedding_perturbation_gap(const InducedMetric& im1, const InducedMetric& im2, double a,
                                  const QuadSpec& quad = {});

/// min over interior nodes of (E - R'^2) / (a^2 phi^4 h'^2), phi the
/// conformal factor on the surface. Equals 1 for the Euclidean metric.
double radicand_margin(const Profile& p, double a, const AmbientMetric& metric,
                       const QuadSpec& quad = {});

}  // namespace revmass
