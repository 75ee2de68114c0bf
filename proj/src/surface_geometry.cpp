#include "revmass/surface_geometry.hpp"

#include <cmath>

#include "revmass/numerics.hpp"

namespace revmass {

namespace {

Vec3 meridian_vector(const CurveJet& j, int order) {
  return Vec3(j.w[order], 0.0, j.h[order]);
}

void require_regular(const CurveJet& j, double phi) {
  if (!(j.speed_squared() > 0.0))
    throw GeometryError("degenerate tangent (T = 0) at phi = " + std::to_string(phi));
}

}  // namespace

InducedMetric::InducedMetric(InducedSource source, double l, Evaluator eval)
    : source_(source), l_(l), eval_(std::make_shared<const Evaluator>(std::move(eval))) {}

Vec3 surface_point(const CurveJet& j, double a) { return a * meridian_vector(j, 0); }

Vec3 outward_normal(const CurveJet& j) {
  const double speed = std::sqrt(j.speed_squared());
  return Vec3(-j.h[1], 0.0, j.w[1]) / speed;
}

FactorJet factor_along(const Profile& p, double a, const ConformalFactor& factor, double phi) {
  FactorJet f;
  if (factor.m == 0.0) return f;
  const CurveJet j = p(phi);
  const Vec3 x = surface_point(j, a);
  const Vec3 x1 = a * meridian_vector(j, 1);
  const Vec3 x2 = a * meridian_vector(j, 2);
  const Vec3 grad = factor.gradient(x);
  f.value = factor.value(x);
  f.d1 = grad.dot(x1);
  f.d2 = x1.dot(factor.hessian(x) * x1) + grad.dot(x2);
  return f;
}

InducedMetric induce_metric(const Profile& p, double a, const AmbientMetric& metric) {
  const InducedSource source = metric.kind() == MetricKind::euclidean ? InducedSource::euclidean
                               : metric.kind() == MetricKind::schwarzschild
                                   ? InducedSource::conformal
                                   : InducedSource::perturbed;

  auto eval = [p, a, metric](double phi) {
    const CurveJet j = p(phi);
    const FactorJet f = factor_along(p, a, metric.conformal_factor(), phi);
    const double f2 = f.value * f.value;
    const double f3 = f2 * f.value;
    const double f4 = f2 * f2;

    const double tp = j.speed_squared();
    const double dtp = 2.0 * (j.w[1] * j.w[2] + j.h[1] * j.h[2]);
    const double d2tp =
        2.0 * (j.w[2] * j.w[2] + j.w[1] * j.w[3] + j.h[2] * j.h[2] + j.h[1] * j.h[3]);

    // E / a^2 and its derivatives
    double e0 = f4 * tp;
    double e1 = 4.0 * f3 * f.d1 * tp + f4 * dtp;
    double e2 = 12.0 * f2 * f.d1 * f.d1 * tp + 4.0 * f3 * f.d2 * tp + 8.0 * f3 * f.d1 * dtp +
                f4 * d2tp;

    // s = R / (a w) and its derivatives
    double s0 = f2;
    double s1 = 2.0 * f.value * f.d1;
    double s2 = 2.0 * f.d1 * f.d1 + 2.0 * f.value * f.d2;

    if (metric.perturbation()) {
      const PerturbationField& b = *metric.perturbation();
      const Vec3 x = surface_point(j, a);
      const Vec3 x1 = a * meridian_vector(j, 1);
      const Vec3 x2 = a * meridian_vector(j, 2);
      const Vec3 m1 = meridian_vector(j, 1);
      const Vec3 m2 = meridian_vector(j, 2);
      const Vec3 m3 = meridian_vector(j, 3);
      const Mat3 B = b.b_at(x);
      const Deriv1 dB = b.db_at(x);
      const Deriv2 d2B = b.d2b_at(x);
      Mat3 Bdot = Mat3::Zero();
      Mat3 Bddot = Mat3::Zero();
      for (int m = 0; m < 3; ++m) {
        Bdot += dB[m] * x1(m);
        Bddot += dB[m] * x2(m);
        for (int l = 0; l < 3; ++l) Bddot += d2B[l][m] * x1(l) * x1(m);
      }
      e0 += m1.dot(B * m1);
      e1 += m1.dot(Bdot * m1) + 2.0 * m1.dot(B * m2);
      e2 += m1.dot(Bddot * m1) + 4.0 * m2.dot(Bdot * m1) + 2.0 * m2.dot(B * m2) +
            2.0 * m1.dot(B * m3);
      const double q0 = f4 + B(1, 1);
      const double q1 = 4.0 * f3 * f.d1 + Bdot(1, 1);
      const double q2 = 12.0 * f2 * f.d1 * f.d1 + 4.0 * f3 * f.d2 + Bddot(1, 1);
      s0 = std::sqrt(q0);
      s1 = q1 / (2.0 * s0);
      s2 = (q2 - 2.0 * s1 * s1) / (2.0 * s0);
    }

    MetricJet mj;
    mj.E = a * a * e0;
    mj.dE = a * a * e1;
    mj.d2E = a * a * e2;
    mj.R = a * j.w[0] * s0;
    mj.dR = a * (j.w[1] * s0 + j.w[0] * s1);
    mj.d2R = a * (j.w[2] * s0 + 2.0 * j.w[1] * s1 + j.w[0] * s2);
    return mj;
  };

  if (metric.perturbation()) {
    const PerturbationField& b = *metric.perturbation();
    for (int i = 1; i <= 9; ++i) {
      const double phi = p.l() * i / 10.0;
      const CurveJet j = p(phi);
      const Vec3 x = surface_point(j, a);
      const Mat3 B = b.b_at(x);
      const double cross = meridian_vector(j, 1).dot(B * Vec3::UnitY());
      if (std::abs(cross) > 1e-12 * (B.cwiseAbs().maxCoeff() + 1.0))
        throw GeometryError("induced metric has a dphi dtheta term; perturbation '" + b.name() +
                            "' is not reflection symmetric about the axis");
    }
  }
  return InducedMetric(source, p.l(), eval);
}

double euclid_mean_curvature(const Profile& p, double a, double phi, double pole_margin) {
  const CurveJet j = p(phi);
  require_regular(j, phi);
  const double eps = pole_margin * p.l();
  if (phi > eps && phi < p.l() - eps && !(j.w[0] > 0.0))
    throw GeometryError("w vanishes away from the poles at phi = " + std::to_string(phi));
  return p.curvatures(phi, pole_margin).mean() / a;
}

double euclid_gauss_curvature(const Profile& p, double a, double phi, double pole_margin) {
  const CurveJet j = p(phi);
  require_regular(j, phi);
  const double eps = pole_margin * p.l();
  if (phi > eps && phi < p.l() - eps && !(j.w[0] > 0.0))
    throw GeometryError("w vanishes away from the poles at phi = " + std::to_string(phi));
  return p.curvatures(phi, pole_margin).gauss() / (a * a);
}

PoleLimits pole_limits(const Profile& p) {
  const CurveJet start = p(0.0);
  const CurveJet end = p(p.l());
  constexpr double kThreshold = 1e-8;
  if (std::abs(start.h[2]) < kThreshold || std::abs(end.h[2]) < kThreshold)
    throw GeometryError("pole_limits: h'' vanishes at a pole (flat pole, K = 0)");
  return {start.w[1] / start.h[2], end.w[1] / end.h[2]};
}

double conformal_mean_curvature(const Profile& p, double a, double phi,
                                const AmbientMetric& metric, double pole_margin) {
  if (metric.kind() != MetricKind::schwarzschild)
    throw GeometryError("conformal_mean_curvature needs the Schwarzschild metric");
  const double hbar = euclid_mean_curvature(p, a, phi, pole_margin);
  const CurveJet j = p(phi);
  const Vec3 x = surface_point(j, a);
  const double f = metric.conformal_factor().value(x);
  const double dn = normal_derivative_phi(metric, x, outward_normal(j));
  return (hbar + 4.0 * dn / f) / (f * f);
}

double induced_gauss_curvature(const InducedMetric& im, double phi, double pole_margin) {
  auto raw = [&im](double t) {
    const MetricJet m = im(t);
    if (!(m.E > 0.0) || !(m.R > 0.0))
      throw GeometryError("induced_gauss_curvature: EG <= 0 at phi = " + std::to_string(t));
    return -(2.0 * m.E * m.d2R - m.dE * m.dR) / (2.0 * m.E * m.E * m.R);
  };
  return pole_safe(raw, phi, im.l(), pole_margin);
}

FundamentalForms fundamental_forms(const CurveJet& j, double a, const Mat3& g,
                                   const Christoffel& gamma) {
  const Vec3 xp = a * meridian_vector(j, 1);
  const Vec3 xt(0.0, a * j.w[0], 0.0);
  const Vec3 xpp = a * meridian_vector(j, 2);
  const Vec3 xpt(0.0, a * j.w[1], 0.0);
  const Vec3 xtt(-a * j.w[0], 0.0, 0.0);

  // Euclidean cross product of the tangents is a conormal in any metric.
  const Vec3 conormal(-j.h[1], 0.0, j.w[1]);
  const Mat3 ginv = g.inverse();
  const double norm = std::sqrt(conormal.dot(ginv * conormal));
  if (!(norm > 0.0)) throw GeometryError("fundamental_forms: normal construction failed");
  const Vec3 nu = conormal / norm;

  auto second = [&](const Vec3& xab, const Vec3& xa, const Vec3& xb) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s += nu(k) * (xab(k) + xa.dot(gamma[k] * xb));
    return s;
  };

  FundamentalForms ff;
  ff.first << xp.dot(g * xp), xp.dot(g * xt), xt.dot(g * xp), xt.dot(g * xt);
  const double off = second(xpt, xp, xt);
  ff.second << second(xpp, xp, xp), off, off, second(xtt, xt, xt);
  return ff;
}

double general_mean_curvature(const Profile& p, double a, double phi,
                              const AmbientMetric& metric, double pole_margin) {
  auto raw = [&](double t) {
    const CurveJet j = p(t);
    require_regular(j, t);
    const Vec3 x = surface_point(j, a);
    const FundamentalForms ff =
        fundamental_forms(j, a, metric.metric_at(x), metric.christoffel_at(x));
    if (!(ff.first.determinant() > 0.0))
      throw GeometryError("general_mean_curvature: degenerate induced metric at phi = " +
                          std::to_string(t));
    return -(ff.first.inverse() * ff.second).trace();
  };
  return pole_safe(raw, phi, p.l(), pole_margin);
}

double ambient_mean_curvature(const Profile& p, double a, double phi, const AmbientMetric& metric,
                              double pole_margin) {
  switch (metric.kind()) {
    case MetricKind::euclidean: return euclid_mean_curvature(p, a, phi, pole_margin);
    case MetricKind::schwarzschild:
      return conformal_mean_curvature(p, a, phi, metric, pole_margin);
    case MetricKind::perturbed: return general_mean_curvature(p, a, phi, metric, pole_margin);
  }
  return 0.0;
}

CurvatureSample sample_curvatures(const Profile& p, double a, double phi,
                                  const AmbientMetric& metric, double pole_margin) {
  CurvatureSample s;
  s.phi = phi;
  const UnitCurvatures unit = p.curvatures(phi, pole_margin);
  switch (metric.kind()) {
    case MetricKind::euclidean:
      s.kappa1 = unit.meridian / a;
      s.kappa2 = unit.parallel / a;
      break;
    case MetricKind::schwarzschild: {
      // lambda_i = phi^-2 lambda_bar_i + 2 phi^-3 n(phi)
      const CurveJet j = p(phi);
      const Vec3 x = surface_point(j, a);
      const double f = metric.conformal_factor().value(x);
      const double dn = normal_derivative_phi(metric, x, outward_normal(j));
      s.kappa1 = unit.meridian / (a * f * f) + 2.0 * dn / (f * f * f);
      s.kappa2 = unit.parallel / (a * f * f) + 2.0 * dn / (f * f * f);
      break;
    }
    case MetricKind::perturbed: {
      // the chart is orthogonal and II is diagonal by reflection symmetry
      auto ratio = [&](int idx) {
        return [&, idx](double t) {
          const CurveJet j = p(t);
          const Vec3 x = surface_point(j, a);
          const FundamentalForms ff =
              fundamental_forms(j, a, metric.metric_at(x), metric.christoffel_at(x));
          return -ff.second(idx, idx) / ff.first(idx, idx);
        };
      };
      s.kappa1 = ratio(0)(phi);
      s.kappa2 = pole_safe(ratio(1), phi, p.l(), pole_margin);
      break;
    }
  }
  s.H = s.kappa1 + s.kappa2;
  s.K = induced_gauss_curvature(induce_metric(p, a, metric), phi, pole_margin);
  return s;
}

}  // namespace revmass
