#include "doctest.h"

#include <cmath>
#include <functional>
#include <numbers>

#include "revmass/profiles.hpp"
#include "revmass/surface_geometry.hpp"

using namespace revmass;
using std::numbers::pi;

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15 * eps)
    return left + right + (left + right - whole) / 15;
  return simpson(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

double adaptive(const std::function<double(double)>& f, double a, double b, double eps) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return simpson(f, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), eps, 50);
}

// ellipse x = A sin t, z = B cos t has curvature AB / (A^2 cos^2 t + B^2 sin^2 t)^{3/2}
double ellipse_curvature(double A, double B, double t) {
  const double s = A * A * std::cos(t) * std::cos(t) + B * B * std::sin(t) * std::sin(t);
  return A * B / std::pow(s, 1.5);
}

}  // namespace

TEST_CASE("sphere builtin") {
  const Profile s = make_builtin(Builtin::sphere);
  CHECK(s.l() == doctest::Approx(pi));
  CHECK(s.arclength());
  const CurveJet j = s(0.0);
  CHECK(j.w[0] == 0.0);
  CHECK(j.h[1] == 0.0);
  const CurveJet m = s(0.7);
  CHECK(m.w[0] == doctest::Approx(std::sin(0.7)));
  CHECK(m.h[3] == doctest::Approx(std::sin(0.7)));
  CHECK_NOTHROW(check_profile_invariants(s));
}

TEST_CASE("ellipsoid builtin lies on the ellipsoid") {
  const Profile e = make_builtin(Builtin::ellipsoid_112);
  CHECK_FALSE(e.arclength());
  const CurveJet eq = e(pi / 2);
  CHECK(eq.w[0] == doctest::Approx(1.0));
  CHECK(std::abs(eq.h[0]) < 1e-15);
  for (double t : {0.0, 0.4, 1.3, 2.9, pi}) {
    const CurveJet j = e(t);
    CHECK(std::abs(j.w[0] * j.w[0] + j.h[0] * j.h[0] / 4.0 - 1.0) < 1e-15);
  }
  CHECK(e(0.0).h[0] == 2.0);
  CHECK_NOTHROW(check_profile_invariants(e));
}

TEST_CASE("builtin errors") {
  CHECK_THROWS_AS(builtin_from_string("torus"), ProfileError);
  CHECK_THROWS_AS(make_builtin(Builtin::custom, {1.0, -2.0}), ProfileError);
  CHECK_THROWS_AS(make_builtin(Builtin::custom, {0.0, 1.0}), ProfileError);
  const Profile c = make_builtin(Builtin::custom, {1.0, 3.0});
  CHECK(c(0.0).h[0] == 3.0);
  CHECK(builtin_from_string(to_string(Builtin::ellipsoid_112)) == Builtin::ellipsoid_112);
}

TEST_CASE("arclength reparametrization") {
  const Profile e = make_builtin(Builtin::ellipsoid_112);
  const Profile s = reparametrize_arclength(e);
  const double oracle = adaptive(
      [](double t) { return std::sqrt(std::cos(t) * std::cos(t) + 4 * std::sin(t) * std::sin(t)); },
      0.0, pi, 1e-14);
  CHECK(s.l() == doctest::Approx(oracle).epsilon(1e-11));
  CHECK(curve_length(e) == doctest::Approx(oracle).epsilon(1e-11));
  CHECK(s.arclength());
  for (int i = 0; i <= 200; ++i) {
    const CurveJet j = s(s.l() * i / 200.0);
    CHECK(std::abs(j.speed_squared() - 1.0) < 1e-12);
    // same image curve
    CHECK(std::abs(j.w[0] * j.w[0] + j.h[0] * j.h[0] / 4.0 - 1.0) < 1e-11);
  }
  CHECK_NOTHROW(check_profile_invariants(s));

  const Profile again = reparametrize_arclength(s);
  CHECK(again.l() == doctest::Approx(s.l()).epsilon(1e-12));
  for (double t : {0.1, 1.0, 2.5, 4.0}) CHECK(std::abs(again(t).w[0] - s(t).w[0]) < 1e-12);

  const Profile sph = make_builtin(Builtin::sphere);
  const Profile sph2 = reparametrize_arclength(sph);
  CHECK(sph2.l() == doctest::Approx(pi).epsilon(1e-13));
  CHECK(std::abs(sph2(1.0).w[0] - std::sin(1.0)) < 1e-12);
}

TEST_CASE("orientation") {
  const Profile e = make_builtin(Builtin::ellipsoid_112);
  const Profile f = e.flipped();
  CHECK(f(0.0).h[0] == -2.0);
  CHECK_THROWS_AS(check_profile_invariants(f), ProfileError);
  const Profile o = oriented(f);
  CHECK(o(0.0).h[0] == 2.0);
  CHECK(oriented(e)(0.3).h[0] == e(0.3).h[0]);
}

TEST_CASE("pole extension") {
  // w' finite and w'' -> 0 approaching the pole
  const Profile s = reparametrize_arclength(make_builtin(Builtin::ellipsoid_112));
  double prev = 1.0;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const CurveJet j = s(eps);
    CHECK(std::isfinite(j.w[1]));
    CHECK(std::isfinite(j.h[2]));
    CHECK(std::abs(j.w[2]) < prev);
    prev = std::abs(j.w[2]);
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("condition constants") {
  const ConditionConstants s =
      validate_conditions(SurfaceFamily::constant(make_builtin(Builtin::sphere), {1, 10, 100}));
  CHECK(s.C1 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(s.C2 == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(s.C3 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(s.C4 == doctest::Approx(1.0).epsilon(1e-10));

  const ConditionConstants e = validate_conditions(
      SurfaceFamily::constant(make_builtin(Builtin::ellipsoid_112), {10, 100}));
  // extremes of the ellipse curvature: 1/4 at the equator, 2 at the poles
  const double k_eq = ellipse_curvature(1, 2, pi / 2), k_pole = ellipse_curvature(1, 2, 0);
  CHECK(e.C1 == doctest::Approx(k_eq * 1.0).epsilon(1e-9));
  CHECK(e.C2 == doctest::Approx(2 * k_pole).epsilon(1e-9));
  CHECK(e.C3 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.C4 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("non-convex profile rejected") {
  // w = sin t, h = cos t + 0.3 cos 3t has an inflection
  const Profile bumpy("bumpy", pi, [](double t) {
    CurveJet j;
    j.w = {std::sin(t), std::cos(t), -std::sin(t), -std::cos(t)};
    j.h = {std::cos(t) + 0.3 * std::cos(3 * t), -std::sin(t) - 0.9 * std::sin(3 * t),
           -std::cos(t) - 2.7 * std::cos(3 * t), std::sin(t) + 8.1 * std::sin(3 * t)};
    return j;
  }, false);
  try {
    validate_conditions(SurfaceFamily::constant(bumpy, {10}));
    FAIL("expected an error");
  } catch (const ProfileError& e) {
    CHECK(std::string(e.what()).find("not convex") != std::string::npos);
  }
}

TEST_CASE("sampled profile") {
  std::vector<double> phi, w, h;
  for (int i = 0; i <= 120; ++i) {
    const double t = pi * i / 120.0;
    phi.push_back(t);
    w.push_back(std::sin(t));
    h.push_back(2 * std::cos(t));
  }
  const Profile p = profile_from_samples("samples", phi, w, h);
  CHECK(p(0.0).w[0] == 0.0);
  CHECK(p(p.l()).w[0] == 0.0);
  CHECK(p(0.0).h[1] == 0.0);
  CHECK(p(p.l()).h[1] == 0.0);
  for (double t : {0.3, 1.1, 2.0}) {
    CHECK(p(t).w[0] == doctest::Approx(std::sin(t)).epsilon(1e-10));
    CHECK(p(t).h[2] == doctest::Approx(-2 * std::cos(t)).epsilon(1e-7));
  }
  CHECK_NOTHROW(check_profile_invariants(p, 1e-10));
  CHECK_THROWS_AS(read_profile_csv("/nonexistent.csv"), ProfileError);
}

TEST_CASE("family validation") {
  CHECK_THROWS_AS(SurfaceFamily::constant(make_builtin(Builtin::sphere), {10, 5}), ProfileError);
  SurfaceFamily f = SurfaceFamily::constant(make_builtin(Builtin::sphere), {5, 10});
  f.scales = {5, 5};
  CHECK_THROWS_AS(f.validate(), ProfileError);
}
