#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

#include "revmass/ambient_metric.hpp"
#include "revmass/profiles.hpp"

namespace revmass {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultPoleMargin = 1e-4;

/// Rotationally symmetric 2-metric E dphi^2 + G dtheta^2, carried through
/// E and R = sqrt(G) (R is the circumference radius of the parallel).
struct MetricJet {
  double E = 0.0, dE = 0.0, d2E = 0.0;
  double R = 0.0, dR = 0.0, d2R = 0.0;

  double G() const { return R * R; }
  double dG() const { return 2.0 * R * dR; }
  double d2G() const { return 2.0 * (dR * dR + R * d2R); }
};

enum class InducedSource { euclidean, conformal, perturbed, custom };

class InducedMetric {
 public:
  using Evaluator = std::function<MetricJet(double)>;

  InducedMetric(InducedSource source, double l, Evaluator eval);

  MetricJet operator()(double phi) const { return (*eval_)(phi); }
  double l() const { return l_; }
  InducedSource source() const { return source_; }

 private:
  InducedSource source_;
  double l_;
  std::shared_ptr<const Evaluator> eval_;
};

/// Restriction of phi = 1 + m/(2r) to the profile, with parameter
/// derivatives.
struct FactorJet {
  double value = 1.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

FactorJet factor_along(const Profile& p, double a, const ConformalFactor& factor, double phi);

/// Surface point, parameter tangent, and outward Euclidean unit normal at
/// theta = 0.
Vec3 surface_point(const CurveJet& j, double a);
Vec3 outward_normal(const CurveJet& j);

/// Metric induced on S_a by the ambient metric. For the perturbed kind the
/// cross term E_phi_theta must vanish (checked at sample nodes).
InducedMetric induce_metric(const Profile& p, double a, const AmbientMetric& metric);

double euclid_mean_curvature(const Profile& p, double a, double phi,
                             double pole_margin = kDefaultPoleMargin);
double euclid_gauss_curvature(const Profile& p, double a, double phi,
                              double pole_margin = kDefaultPoleMargin);

struct PoleLimits {
  double w_over_hprime_at_0 = 0.0;
  double w_over_hprime_at_l = 0.0;
};

/// lim w/h' at both poles by L'Hospital: w'/h''.
PoleLimits pole_limits(const Profile& p);

/// phi^-2 (Hbar + 4 phi^-1 n(phi)) in the Schwarzschild metric.
double conformal_mean_curvature(const Profile& p, double a, double phi,
                                const AmbientMetric& metric,
                                double pole_margin = kDefaultPoleMargin);

/// Gauss curvature of the 2-metric, K = -(2 E R'' - E' R') / (2 E^2 R).
double induced_gauss_curvature(const InducedMetric& im, double phi,
                               double pole_margin = kDefaultPoleMargin);

/// Mean curvature in an arbitrary ambient metric from the ambient
/// Christoffel symbols and the second-order parametrization data.
double general_mean_curvature(const Profile& p, double a, double phi,
                              const AmbientMetric& metric,
                              double pole_margin = kDefaultPoleMargin);

/// Mean curvature with the route matching the metric kind: Euclidean
/// revolution formula, conformal formula, or the general construction.
double ambient_mean_curvature(const Profile& p, double a, double phi,
                              const AmbientMetric& metric,
                              double pole_margin = kDefaultPoleMargin);

struct CurvatureSample {
  double phi = 0.0;
  double kappa1 = 0.0;  // meridian
  double kappa2 = 0.0;  // parallel
  double H = 0.0;
  double K = 0.0;       // intrinsic, of the induced 2-metric
};

CurvatureSample sample_curvatures(const Profile& p, double a, double phi,
                                  const AmbientMetric& metric,
                                  double pole_margin = kDefaultPoleMargin);

/// First and second fundamental forms at theta = 0 in the (phi, theta)
/// chart, outward unit normal. H = -tr(I^-1 II).
struct FundamentalForms {
  Eigen::Matrix2d first;
  Eigen::Matrix2d second;
};

FundamentalForms fundamental_forms(const CurveJet& j, double a, const Mat3& g,
                                   const Christoffel& gamma);

}  // namespace revmass
