#include "revmass/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "revmass/chebyshev.hpp"
#include "revmass/numerics.hpp"

namespace revmass {

namespace {

constexpr double kPi = std::numbers::pi;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Cumulative arclength over a fixed panel table, 16-point Gauss per panel.
class ArclengthTable {
 public:
  ArclengthTable(const Profile& p, std::size_t panels)
      : p_(p), width_(p.l() / static_cast<double>(panels)), rule_(gauss_legendre(16)) {
    cumulative_.assign(panels + 1, 0.0);
    for (std::size_t k = 0; k < panels; ++k) {
      const double t0 = width_ * static_cast<double>(k);
      cumulative_[k + 1] = cumulative_[k] + segment(t0, t0 + width_);
    }
  }

  double total() const { return cumulative_.back(); }

  double speed(double t) const { return std::sqrt(p_(t).speed_squared()); }

  double length_to(double t) const {
    const auto panels = cumulative_.size() - 1;
    auto k = static_cast<std::size_t>(std::floor(t / width_));
    k = std::min(k, panels - 1);
    const double t0 = width_ * static_cast<double>(k);
    return cumulative_[k] + segment(t0, t);
  }

  // Solves length_to(t) = s by bracketed Newton.
  double invert(double s) const {
    if (s <= 0.0) return 0.0;
    if (s >= total()) return p_.l();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
    const auto k = static_cast<std::size_t>(std::distance(cumulative_.begin(), it)) - 1;
    double lo = width_ * static_cast<double>(k);
    double hi = std::min(lo + width_, p_.l());
    double t = lo + (s - cumulative_[k]) / (cumulative_[k + 1] - cumulative_[k]) * (hi - lo);
    for (int iter = 0; iter < 60; ++iter) {
      const double residual = length_to(t) - s;
      if (std::abs(residual) <= 1e-15 * total()) return t;
      if (residual > 0.0) hi = t; else lo = t;
      double next = t - residual / speed(t);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - t) <= 1e-16 * p_.l()) return next;
      t = next;
    }
    throw ProfileError("reparametrize_arclength: inversion did not converge");
  }

 private:
  double segment(double a, double b) const {
    if (b <= a) return 0.0;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule_.nodes.size(); ++i)
      sum += rule_.weights[i] * speed(mid + half * rule_.nodes[i]);
    return half * sum;
  }

  Profile p_;
  double width_;
  GaussRule rule_;
  std::vector<double> cumulative_;
};

}  // namespace

UnitCurvatures unit_curvatures(const CurveJet& jet) {
  const double speed = std::sqrt(jet.speed_squared());
  UnitCurvatures k;
  k.meridian = -jet.turning() / (speed * speed * speed);
  k.parallel = -jet.h[1] / (speed * jet.w[0]);
  return k;
}

Profile::Profile(std::string name, double l, Evaluator eval, bool arclength)
    : name_(std::move(name)),
      l_(l),
      eval_(std::make_shared<const Evaluator>(std::move(eval))),
      arclength_(arclength) {
  if (!(l > 0.0)) throw ProfileError("Profile: parameter length must be positive");
}

Profile Profile::flipped() const {
  auto base = eval_;
  return Profile(name_, l_,
                 [base](double phi) {
                   CurveJet j = (*base)(phi);
                   for (double& v : j.h) v = -v;
                   return j;
                 },
                 arclength_);
}

UnitCurvatures Profile::curvatures(double phi, double pole_margin) const {
  const double eps = pole_margin * l_;
  if (phi >= eps && phi <= l_ - eps) return unit_curvatures((*this)(phi));
  const bool left = phi < eps;
  UnitCurvatures k = unit_curvatures((*this)(phi));
  const double pole = unit_curvatures((*this)(left ? 0.0 : l_)).meridian;
  if (eps <= 0.0) {
    k.parallel = pole;
    return k;
  }
  const double edge = unit_curvatures((*this)(left ? eps : l_ - eps)).parallel;
  const double s = (left ? phi : l_ - phi) / eps;
  k.parallel = pole + (edge - pole) * s * s;
  return k;
}

Builtin builtin_from_string(const std::string& name) {
  if (name == "sphere") return Builtin::sphere;
  if (name == "ellipsoid_112") return Builtin::ellipsoid_112;
  if (name == "custom") return Builtin::custom;
  throw ProfileError("unknown builtin profile '" + name + "'");
}

std::string to_string(Builtin b) {
  switch (b) {
    case Builtin::sphere: return "sphere";
    case Builtin::ellipsoid_112: return "ellipsoid_112";
    case Builtin::custom: return "custom";
  }
  return "custom";
}

Profile make_builtin(Builtin which, const std::vector<double>& params) {
  double A = 1.0;
  double B = 1.0;
  std::string name = to_string(which);
  switch (which) {
    case Builtin::sphere:
      break;
    case Builtin::ellipsoid_112:
      B = 2.0;
      break;
    case Builtin::custom:
      if (params.size() != 2)
        throw ProfileError("custom spheroid needs params {A, B}");
      A = params[0];
      B = params[1];
      if (!(A > 0.0) || !(B > 0.0))
        throw ProfileError("custom spheroid: axis ratios must be positive");
      break;
  }
  const bool arclength = A == 1.0 && B == 1.0;
  return Profile(name, kPi,
                 [A, B](double phi) {
                   const double s = std::sin(phi);
                   const double c = std::cos(phi);
                   CurveJet j;
                   j.w = {A * s, A * c, -A * s, -A * c};
                   j.h = {B * c, -B * s, -B * c, B * s};
                   return j;
                 },
                 arclength);
}

Profile profile_from_samples(std::string name, const std::vector<double>& phi,
                             const std::vector<double>& w,
                             const std::vector<double>& h) {
  const std::size_t n = phi.size();
  if (w.size() != n || h.size() != n)
    throw ProfileError("profile samples: column lengths differ");
  if (n < 8) throw ProfileError("profile samples: need at least 8 rows");
  for (std::size_t i = 1; i < n; ++i)
    if (!(phi[i] > phi[i - 1]))
      throw ProfileError("profile samples: phi must be strictly increasing");
  if (std::abs(w.front()) > 1e-6 || std::abs(w.back()) > 1e-6)
    throw ProfileError("profile samples: first and last rows must have w = 0");

  std::vector<double> shifted(n);
  for (std::size_t i = 0; i < n; ++i) shifted[i] = phi[i] - phi.front();
  const double l = shifted.back();

  const auto degree = std::min<std::size_t>(
      {n - 1, std::max<std::size_t>(4, static_cast<std::size_t>(2.0 * std::sqrt(double(n)))),
       128});
  const auto wfit = ChebyshevSeries::fit(shifted, w, 0.0, l, degree);
  const auto hfit = ChebyshevSeries::fit(shifted, h, 0.0, l, degree);
  struct Series {
    std::array<ChebyshevSeries, 4> w, h;
  };
  auto s = std::make_shared<Series>();
  s->w[0] = wfit;
  s->h[0] = hfit;
  for (int k = 1; k < 4; ++k) {
    s->w[k] = s->w[k - 1].derivative();
    s->h[k] = s->h[k - 1].derivative();
  }
  const double w0 = s->w[0](0.0), wl = s->w[0](l);
  const double dh0 = s->h[1](0.0), dhl = s->h[1](l);

  return Profile(std::move(name), l,
                 [s, l, w0, wl, dh0, dhl](double x) {
                   CurveJet j;
                   for (int k = 0; k < 4; ++k) {
                     j.w[k] = s->w[k](x);
                     j.h[k] = s->h[k](x);
                   }
                   // linear correction pins w at the poles, quadratic pins h'
                   auto lerp = [x, l](double at0, double atl) {
                     return 2.0 * x <= l ? at0 + (atl - at0) * (x / l)
                                         : atl - (atl - at0) * ((l - x) / l);
                   };
                   j.w[0] -= lerp(w0, wl);
                   j.w[1] -= (wl - w0) / l;
                   j.h[0] -= dh0 * x + (dhl - dh0) * x * x / (2.0 * l);
                   j.h[1] -= lerp(dh0, dhl);
                   j.h[2] -= (dhl - dh0) / l;
                   return j;
                 },
                 false);
}

Profile read_profile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProfileError("cannot open profile CSV '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ProfileError("profile CSV is empty");
  {
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(trim(cell));
    if (cols != std::vector<std::string>{"phi", "w", "h"})
      throw ProfileError("profile CSV header must be 'phi,w,h'");
  }
  std::vector<double> phi, w, h;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
      throw ProfileError("profile CSV row " + std::to_string(row) + ": expected 3 columns");
    try {
      phi.push_back(std::stod(a));
      w.push_back(std::stod(b));
      h.push_back(std::stod(c));
    } catch (const std::exception&) {
      throw ProfileError("profile CSV row " + std::to_string(row) + ": not a number");
    }
  }
  std::string stem = path;
  if (auto slash = stem.find_last_of('/'); slash != std::string::npos)
    stem = stem.substr(slash + 1);
  if (auto dot = stem.find_last_of('.'); dot != std::string::npos)
    stem = stem.substr(0, dot);
  return profile_from_samples(stem, phi, w, h);
}

double curve_length(const Profile& p) {
  return ArclengthTable(p, 64).total();
}

Profile reparametrize_arclength(const Profile& p, double tol) {
  if (!(tol > 0.0)) throw ProfileError("reparametrize_arclength: tol must be positive");
  for (std::size_t i = 0; i <= 2048; ++i) {
    const double t = p.l() * static_cast<double>(i) / 2048.0;
    if (p(t).speed_squared() < tol * tol)
      throw ProfileError("reparametrize_arclength: degenerate tangent at phi = " +
                         std::to_string(t));
  }
  const auto table = std::make_shared<const ArclengthTable>(p, 64);
  const double length = table->total();

  ChebyshevSeries inverse;
  bool converged = false;
  for (std::size_t degree = 32; degree <= 1024; degree *= 2) {
    inverse = ChebyshevSeries::interpolate(
        [&](double s) { return table->invert(s); }, 0.0, length, degree);
    if (inverse.tail_magnitude(4) < tol * p.l()) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw ProfileError("reparametrize_arclength: inverse arclength map did not converge");

  const double lbase = p.l();
  return Profile(p.name(), length,
                 [p, inverse, lbase](double s) {
                   const double t = std::clamp(inverse(s), 0.0, lbase);
                   const CurveJet b = p(t);
                   // speed sigma(t) and its t-derivatives
                   const double sig2 = b.speed_squared();
                   const double sig = std::sqrt(sig2);
                   const double dot12 = b.w[1] * b.w[2] + b.h[1] * b.h[2];
                   const double dsig = dot12 / sig;
                   const double dot22 = b.w[2] * b.w[2] + b.h[2] * b.h[2];
                   const double dot13 = b.w[1] * b.w[3] + b.h[1] * b.h[3];
                   const double d2sig = (dot22 + dot13 - dsig * dsig) / sig;
                   // t(s) derivatives
                   const double t1 = 1.0 / sig;
                   const double t2 = -dsig / (sig2 * sig);
                   const double t3 = -(d2sig * sig - 3.0 * dsig * dsig) / (sig2 * sig2 * sig);
                   auto chain = [&](const std::array<double, 4>& f) {
                     return std::array<double, 4>{
                         f[0], f[1] * t1, f[2] * t1 * t1 + f[1] * t2,
                         f[3] * t1 * t1 * t1 + 3.0 * f[2] * t1 * t2 + f[1] * t3};
                   };
                   CurveJet j;
                   j.w = chain(b.w);
                   j.h = chain(b.h);
                   return j;
                 },
                 true);
}

Profile oriented(const Profile& p) {
  return p(0.0).h[0] < p(p.l()).h[0] ? p.flipped() : p;
}

void check_profile_invariants(const Profile& p, double tol, std::size_t nodes) {
  const CurveJet start = p(0.0);
  const CurveJet end = p(p.l());
  if (std::abs(start.w[0]) > tol || std::abs(end.w[0]) > tol)
    throw ProfileError("profile '" + p.name() + "': w does not vanish at the poles");
  if (std::abs(start.h[1]) > tol || std::abs(end.h[1]) > tol)
    throw ProfileError("profile '" + p.name() + "': h' does not vanish at the poles");
  if (!(start.h[0] > end.h[0]))
    throw ProfileError("profile '" + p.name() + "': need h(0) > h(l)");
  for (std::size_t i = 1; i < nodes; ++i) {
    const double phi = p.l() * static_cast<double>(i) / static_cast<double>(nodes);
    const CurveJet j = p(phi);
    if (!(j.w[0] > 0.0))
      throw ProfileError("profile '" + p.name() + "': w must be positive inside (0, l)");
    if (!(j.h[1] < 0.0))
      throw ProfileError("profile '" + p.name() + "': h' must be negative inside (0, l)");
    if (p.arclength() && std::abs(j.speed_squared() - 1.0) > tol)
      throw ProfileError("profile '" + p.name() + "': not arclength parametrized");
  }
}

SurfaceFamily SurfaceFamily::constant(Profile p, std::vector<double> scales) {
  SurfaceFamily f{[p](double) { return p; }, std::move(scales)};
  f.validate();
  return f;
}

void SurfaceFamily::validate() const {
  if (!profile_at) throw ProfileError("SurfaceFamily: no profile generator");
  if (scales.empty()) throw ProfileError("SurfaceFamily: empty scale list");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0)) throw ProfileError("SurfaceFamily: scales must be positive");
    if (i > 0 && !(scales[i] > scales[i - 1]))
      throw ProfileError("SurfaceFamily: scales must be strictly increasing");
  }
}

ConditionConstants validate_conditions(const SurfaceFamily& family) {
  family.validate();
  constexpr std::size_t kNodes = 2048;
  ConditionConstants c;
  c.C1 = std::numeric_limits<double>::infinity();
  c.C3 = std::numeric_limits<double>::infinity();
  double min_mean = std::numeric_limits<double>::infinity();
  for (double a : family.scales) {
    const Profile p = oriented(family.profile_at(a));
    for (std::size_t i = 0; i <= kNodes; ++i) {
      const double phi = p.l() * static_cast<double>(i) / static_cast<double>(kNodes);
      // a^2 K and a H are scale free for a fixed profile
      const UnitCurvatures k = p.curvatures(phi);
      const CurveJet j = p(phi);
      c.C1 = std::min(c.C1, k.gauss());
      c.C2 = std::max(c.C2, k.mean());
      min_mean = std::min(min_mean, k.mean());
      const double radius = std::hypot(j.w[0], j.h[0]);
      c.C3 = std::min(c.C3, radius);
      c.C4 = std::max(c.C4, radius);
      if (!std::isfinite(k.gauss()) || !std::isfinite(radius))
        throw ProfileError("validate_conditions: non-finite curvature on '" + p.name() + "'");
    }
  }
  if (!(c.C1 > 0.0)) throw ProfileError("validate_conditions: not convex (K <= 0)");
  if (!(min_mean > 0.0)) throw ProfileError("validate_conditions: mean curvature H <= 0");
  if (!(c.C3 > 0.0)) throw ProfileError("validate_conditions: surface meets the origin");
  return c;
}

}  // namespace revmass
