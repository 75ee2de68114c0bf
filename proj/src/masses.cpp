#include "revmass/masses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "revmass/embedding.hpp"
#include "revmass/surface_geometry.hpp"

namespace revmass {

namespace {

constexpr double kPi = std::numbers::pi;

Integral scaled(Integral in, double factor) {
  in.value *= factor;
  in.error_estimate *= std::abs(factor);
  return in;
}

}  // namespace

Integral brown_york(const Profile& p, double a, const AmbientMetric& metric,
                    const QuadSpec& quad) {
  const InducedMetric im = induce_metric(p, a, metric);
  const EmbeddedCurve ec = embed_revolution(im, a, 0.0, quad.pole_margin);
  auto f = [&](double phi) {
    const MetricJet m = im(phi);
    const double h0 = reference_mean_curvature(ec, phi);
    const double h = ambient_mean_curvature(p, a, phi, metric, quad.pole_margin);
    return (h0 - h) * std::sqrt(m.E) * m.R;
  };
  // 2 pi / 8 pi
  return scaled(integrate(f, 0.0, p.l(), quad), 0.25);
}

Integral brown_york_flat_area(const Profile& p, double a, const AmbientMetric& metric,
                              const QuadSpec& quad) {
  const InducedMetric im = induce_metric(p, a, metric);
  const EmbeddedCurve ec = embed_revolution(im, a, 0.0, quad.pole_margin);
  auto f = [&](double phi) {
    const CurveJet c = p(phi);
    const double h0 = reference_mean_curvature(ec, phi);
    const double h = ambient_mean_curvature(p, a, phi, metric, quad.pole_margin);
    return (h0 - h) * a * a * c.w[0] * std::sqrt(c.speed_squared());
  };
  return scaled(integrate(f, 0.0, p.l(), quad), 0.25);
}

Integral area(const Profile& p, double a, const AmbientMetric& metric, const QuadSpec& quad) {
  const InducedMetric im = induce_metric(p, a, metric);
  auto f = [&](double phi) {
    const MetricJet m = im(phi);
    return std::sqrt(m.E) * m.R / (a * a);
  };
  return scaled(integrate(f, 0.0, p.l(), quad), 2.0 * kPi * a * a);
}

Integral flat_area(const Profile& p, double a, const QuadSpec& quad) {
  auto f = [&](double phi) {
    const CurveJet c = p(phi);
    return c.w[0] * std::sqrt(c.speed_squared());
  };
  return scaled(integrate(f, 0.0, p.l(), quad), 2.0 * kPi * a * a);
}

Integral hawking(const Profile& p, double a, const AmbientMetric& metric, const QuadSpec& quad) {
  const InducedMetric im = induce_metric(p, a, metric);
  const Integral A = area(p, a, metric, quad);
  auto f = [&](double phi) {
    const MetricJet m = im(phi);
    const double h = ambient_mean_curvature(p, a, phi, metric, quad.pole_margin);
    return h * h * std::sqrt(m.E) * m.R;
  };
  const Integral W = scaled(integrate(f, 0.0, p.l(), quad), 2.0 * kPi);
  const double radius = std::sqrt(A.value / (16.0 * kPi));
  const double deficit = 1.0 - W.value / (16.0 * kPi);
  Integral out;
  out.value = radius * deficit;
  out.error_estimate = std::abs(deficit) * A.error_estimate / (32.0 * kPi * radius) +
                       radius * W.error_estimate / (16.0 * kPi);
  out.panels_used = std::max(A.panels_used, W.panels_used);
  out.converged = A.converged && W.converged;
  return out;
}

Integral adm_flux(const Profile& p, double a, const AmbientMetric& metric, const QuadSpec& quad) {
  if (metric.kind() == MetricKind::euclidean) {
    Integral zero;
    zero.converged = true;
    return zero;
  }
  auto f = [&](double phi) {
    const CurveJet c = p(phi);
    const double speed = std::sqrt(c.speed_squared());
    const Vec3 x = surface_point(c, a);
    const Vec3 nu = outward_normal(c);
    const Deriv1 dg = metric.dmetric_at(x);
    double flux = 0.0;
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int i = 0; i < 3; ++i) s += dg[i](i, j) - dg[j](i, i);
      flux += s * nu(j);
    }
    return flux * a * a * c.w[0] * speed;
  };
  // 2 pi / 16 pi
  return scaled(integrate(f, 0.0, p.l(), quad), 0.125);
}

Integral cancellation_diagnostic(const Profile& p, double a, const AmbientMetric& metric,
                                 const QuadSpec& quad) {
  if (metric.mass() == 0.0) {
    Integral zero;
    zero.converged = true;
    return zero;
  }
  const double l = p.l();
  auto f = [&](double phi) {
    if (phi <= 0.0 || phi >= l) return 0.0;
    const CurveJet c = p(phi);
    const FactorJet fj = factor_along(p, a, metric.conformal_factor(), phi);
    const double w = c.w[0], dw = c.w[1], dh = c.h[1], d2h = c.h[2];
    return 4.0 * fj.d1 * w * dw / dh + 2.0 * fj.d2 * w * w / dh -
           2.0 * fj.d1 * w * w * d2h / (dh * dh);
  };
  return scaled(integrate(f, 0.0, l, quad), 2.0 * kPi * a);
}

MassReport mass_report(const Profile& p, double a, const AmbientMetric& metric,
                       const QuadSpec& quad) {
  MassReport r;
  r.a = a;
  r.metric = metric.name();
  r.profile = p.name();
  const Integral by = brown_york(p, a, metric, quad);
  const Integral mh = hawking(p, a, metric, quad);
  const Integral adm = adm_flux(p, a, metric, quad);
  const Integral ar = area(p, a, metric, quad);
  const Integral diag = cancellation_diagnostic(p, a, metric, quad);
  r.m_by = by.value;
  r.m_hawking = mh.value;
  r.m_adm_flux = adm.value;
  r.area = ar.value;
  r.diag_cancellation = diag.value;
  r.quad_err = std::max({by.error_estimate, mh.error_estimate, adm.error_estimate,
                         diag.error_estimate});

  const EmbeddedCurve ec = embed_revolution(induce_metric(p, a, metric), a, 0.0, quad.pole_margin);
  for (double phi : composite_nodes(0.0, p.l(), quad.panels, quad.nodes_per_panel)) {
    const double gap = reference_mean_curvature(ec, phi) -
                       ambient_mean_curvature(p, a, phi, metric, quad.pole_margin);
    r.sup_H0_minus_H = std::max(r.sup_H0_minus_H, std::abs(gap));
  }
  return r;
}

}  // namespace revmass
