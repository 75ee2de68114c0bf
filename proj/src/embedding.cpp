#include "revmass/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace revmass {

namespace {

constexpr double kRadicandTolerance = 1e-10;

bool near_pole(double phi, double l, double margin) {
  const double eps = margin * l;
  return phi < eps || phi > l - eps;
}

}  // namespace

EmbeddedCurve::EmbeddedCurve(InducedMetric im, double a, double v0, double pole_margin)
    : im_(std::move(im)), a_(a), v0_(v0), margin_(pole_margin) {}

EmbeddingJet EmbeddedCurve::raw_jet(double phi) const {
  const MetricJet m = im_(phi);
  if (!(m.E > 0.0)) throw EmbeddingError("embedding: E <= 0 at phi = " + std::to_string(phi));
  EmbeddingJet j;
  const double sqrtE = std::sqrt(m.E);
  j.u = m.R / a_;
  j.du = m.dR / a_;
  j.d2u = m.d2R / a_;
  j.T = sqrtE / a_;
  j.dT = m.dE / (2.0 * a_ * sqrtE);
  double rho = j.T * j.T - j.du * j.du;
  if (rho < -kRadicandTolerance * j.T * j.T)
    throw EmbeddingError("embedding: radicand E - R'^2 < 0 at phi = " + std::to_string(phi) +
                         " (scale too small)");
  rho = std::max(rho, 0.0);
  j.dv = -std::sqrt(rho);
  j.d2v = j.dv != 0.0 ? (j.T * j.dT - j.du * j.d2u) / j.dv : 0.0;
  return j;
}

EmbeddingJet EmbeddedCurve::jet(double phi) const {
  EmbeddingJet j = raw_jet(phi);
  if (near_pole(phi, l(), margin_))
    j.d2v = pole_safe([this](double t) { return raw_jet(t).d2v; }, phi, l(), margin_);
  return j;
}

double EmbeddedCurve::u(double phi) const { return im_(phi).R / a_; }

double EmbeddedCurve::v(double phi) const {
  if (phi == 0.0) return v0_;
  return v0_ + composite_gauss([this](double t) { return raw_jet(t).dv; }, 0.0, phi, 16, 16);
}

double EmbeddedCurve::closure_gap() const { return v(l()) - v(0.0); }

InducedMetric EmbeddedCurve::reinduced() const {
  const EmbeddedCurve self = *this;
  const double fd_step = 1e-5 * l();
  auto dE = [self](double t) {
    const EmbeddingJet j = self.jet(t);
    return 2.0 * self.a_ * self.a_ * (j.du * j.d2u + j.dv * j.d2v);
  };
  return InducedMetric(InducedSource::custom, l(), [self, dE, fd_step](double t) {
    const EmbeddingJet j = self.jet(t);
    const double a2 = self.a_ * self.a_;
    MetricJet m;
    m.E = a2 * (j.du * j.du + j.dv * j.dv);
    m.dE = dE(t);
    // third derivatives of (u, v) are not carried
    const double lo = std::max(t - fd_step, 0.0);
    const double hi = std::min(t + fd_step, self.l());
    m.d2E = (dE(hi) - dE(lo)) / (hi - lo);
    m.R = self.a_ * j.u;
    m.dR = self.a_ * j.du;
    m.d2R = self.a_ * j.d2u;
    return m;
  });
}

EmbeddedCurve embed_revolution(const InducedMetric& im, double a, double v0, double pole_margin) {
  if (!(a > 0.0)) throw EmbeddingError("embedding: scale must be positive");
  EmbeddedCurve ec(im, a, v0, pole_margin);
  const int n = 64;
  for (int i = 1; i < n; ++i) {
    const double phi = im.l() * i / n;
    const EmbeddingJet j = ec.jet(phi);
    if (!(j.dv < 0.0))
      throw EmbeddingError("embedding: v' vanishes at interior phi = " + std::to_string(phi));
    const double K = induced_gauss_curvature(im, phi, pole_margin);
    if (!(K > 0.0))
      throw EmbeddingError("embedding: Gauss curvature K <= 0 at phi = " + std::to_string(phi));
  }
  return ec;
}

double reference_mean_curvature(const EmbeddedCurve& ec, double phi) {
  const double a = ec.a();
  auto raw = [&ec, a](double t) {
    const EmbeddingJet j = ec.jet(t);
    if (j.dv == 0.0)
      throw EmbeddingError("reference_mean_curvature: v' = 0 at phi = " + std::to_string(t));
    return j.d2u / (a * j.T * j.dv) - j.dT * j.du / (a * j.T * j.T * j.dv) -
           j.dv / (a * j.T * j.u);
  };
  return pole_safe(raw, phi, ec.l(), ec.pole_margin());
}

double embedded_gauss_curvature(const EmbeddedCurve& ec, double phi) {
  const double a = ec.a();
  auto raw = [&ec, a](double t) {
    const EmbeddingJet j = ec.jet(t);
    const double t2 = j.T * j.T;
    return j.dv * (j.du * j.d2v - j.d2u * j.dv) / (a * a * j.u * t2 * t2);
  };
  return pole_safe(raw, phi, ec.l(), ec.pole_margin());
}

double embedding_perturbation_gap(const InducedMetric& im1, const InducedMetric& im2, double a,
                                  const QuadSpec& quad) {
  const EmbeddedCurve e1 = embed_revolution(im1, a, 0.0, quad.pole_margin);
  const EmbeddedCurve e2 = embed_revolution(im2, a, 0.0, quad.pole_margin);
  double gap = 0.0;
  for (double phi : composite_nodes(0.0, im1.l(), quad.panels, quad.nodes_per_panel))
    gap = std::max(gap, std::abs(reference_mean_curvature(e2, phi) -
                                 reference_mean_curvature(e1, phi)));
  return gap;
}

double radicand_margin(const Profile& p, double a, const AmbientMetric& metric,
                       const QuadSpec& quad) {
  const InducedMetric im = induce_metric(p, a, metric);
  double margin = HUGE_VAL;
  for (double phi : composite_nodes(0.0, p.l(), quad.panels, quad.nodes_per_panel)) {
    const MetricJet m = im(phi);
    const CurveJet c = p(phi);
    const double f = factor_along(p, a, metric.conformal_factor(), phi).value;
    const double f2 = f * f;
    margin = std::min(margin, (m.E - m.dR * m.dR) / (a * a * f2 * f2 * c.h[1] * c.h[1]));
  }
  return margin;
}

}  // namespace revmass
