#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "revmass/chebyshev.hpp"
#include "revmass/masses.hpp"
#include "revmass/numerics.hpp"
#include "revmass/profiles.hpp"

using namespace revmass;
using std::numbers::pi;

TEST_CASE("gauss rule integrates monomials exactly") {
  for (std::size_t n : {4u, 8u, 16u, 33u, 64u}) {
    const GaussRule r = gauss_legendre(n);
    REQUIRE(r.nodes.size() == n);
    for (std::size_t k = 0; k < 2 * n; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], double(k));
      const double exact = k % 2 ? 0.0 : 2.0 / double(k + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("textbook integrals") {
  const QuadSpec q;
  CHECK(std::abs(integrate([](double x) { return std::sin(x); }, 0, pi, q).value - 2.0) < 1e-12);
  const Integral c = integrate([](double x) { return std::pow(std::sin(x), 3); }, 0, pi, q);
  CHECK(std::abs(c.value - 4.0 / 3.0) < 1e-12);
  CHECK(c.converged);
  CHECK(c.error_estimate < q.tol);
}

TEST_CASE("composite rule exact on panel polynomials") {
  // degree 2n - 1 per panel, here a single global polynomial of degree 31
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<double> c(32);
  for (double& x : c) x = coef(rng);
  auto poly = [&](double x) {
    double s = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) s = s * x + c[k];
    return s;
  };
  double exact = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) exact += c[k] * (std::pow(1.5, double(k + 1)) - std::pow(-0.5, double(k + 1))) / double(k + 1);
  CHECK(std::abs(composite_gauss(poly, -0.5, 1.5, 3, 16) - exact) < 1e-13 * std::max(1.0, std::abs(exact)));
}

TEST_CASE("integrate rejects bad input") {
  QuadSpec q;
  CHECK_THROWS_AS(integrate([](double) { return NAN; }, 0, 1, q), NumericsError);
  q.max_doublings = 1;
  q.panels = 1;
  q.nodes_per_panel = 4;
  CHECK_THROWS_AS(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0, 1, q), NumericsError);
  QuadSpec bad;
  bad.nodes_per_panel = 3;
  CHECK_THROWS(bad.validate());
  bad.nodes_per_panel = 65;
  CHECK_THROWS(bad.validate());
  bad.nodes_per_panel = 16;
  bad.tol = 0.0;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("prolate spheroid area") {
  // semi-axes (1, 1, 2)
  const Profile e = make_builtin(Builtin::ellipsoid_112);
  const double A = 1.0, B = 2.0, ecc = std::sqrt(1.0 - A * A / (B * B));
  const double oracle = 2.0 * pi * A * A * (1.0 + B / (A * ecc) * std::asin(ecc));
  for (double a : {1.0, 7.0}) {
    const double got = flat_area(e, a).value;
    CHECK(got == doctest::Approx(oracle * a * a).epsilon(1e-12));
  }
}

TEST_CASE("fit_order") {
  std::vector<std::pair<double, double>> p;
  for (double a : {10.0, 30.0, 100.0, 1000.0}) p.emplace_back(a, 1.0 / (a * a));
  OrderFit f = fit_order(p);
  CHECK(std::abs(f.fitted_order + 2.0) < 1e-6);
  CHECK(f.r_squared == doctest::Approx(1.0));

  p.clear();
  for (double a : {10.0, 20.0, 40.0}) p.emplace_back(a, 5.0 / (a * a * a));
  f = fit_order(p);
  CHECK(f.fitted_order == doctest::Approx(-3.0).epsilon(1e-10));
  CHECK(f.fitted_constant == doctest::Approx(5.0).epsilon(1e-10));

  // closed-form Brown-York error of the Schwarzschild sphere
  p.clear();
  for (double a : {10.0, 100.0, 1000.0}) p.emplace_back(a, (1.0 + 1.0 / (2 * a)) - 1.0);
  f = fit_order(p);
  CHECK(f.fitted_order == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(f.fitted_constant == doctest::Approx(0.5).epsilon(1e-9));

  std::vector<std::pair<double, double>> two{{1, 1}, {2, 0.5}};
  CHECK_THROWS_AS(fit_order(two), NumericsError);
  std::vector<std::pair<double, double>> zero{{1, 1}, {2, 0.0}, {3, 0.1}};
  CHECK_THROWS_AS(fit_order(zero), NumericsError);
}

TEST_CASE("check_derivatives") {
  auto s = [](double x) { return std::sin(x); };
  auto c = [](double x) { return std::cos(x); };
  CHECK(check_derivatives(s, c, 0.0, 3.0, 50) < 1e-8);
  CHECK(check_derivatives(s, s, 0.2, 1.2, 20) > 0.3);

  const Profile sph = make_builtin(Builtin::sphere);
  auto w = [&](double t) { return sph(t).w[0]; };
  auto dw = [&](double t) { return sph(t).w[1]; };
  CHECK(check_derivatives(w, dw, 0.0, pi, 40) < 1e-6);
}

TEST_CASE("pole_safe quadratic blend") {
  // even about 0 with a removable singularity
  auto raw = [](double x) { return std::sin(x) / x; };
  const double l = 1.0;
  CHECK(pole_safe(raw, 0.0, l, 1e-4) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(pole_safe(raw, 5e-5, l, 1e-4) == doctest::Approx(std::sin(5e-5) / 5e-5).epsilon(1e-10));
  CHECK(pole_safe(raw, 0.3, l, 1e-4) == raw(0.3));
  auto raw_l = [](double x) { return std::sin(1.0 - x) / (1.0 - x); };
  CHECK(even_pole_limit(raw_l, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("chebyshev interpolation and fit") {
  auto f = [](double x) { return std::exp(std::sin(x)); };
  const ChebyshevSeries s = ChebyshevSeries::interpolate(f, -1.0, 2.0, 40);
  const ChebyshevSeries d = s.derivative();
  for (double x : {-1.0, -0.3, 0.5, 1.9, 2.0}) {
    CHECK(s(x) == doctest::Approx(f(x)).epsilon(1e-13));
    CHECK(d(x) == doctest::Approx(std::cos(x) * f(x)).epsilon(1e-11));
  }
  CHECK(s.tail_magnitude(4) < 1e-14);

  std::vector<double> xs, ys;
  for (int i = 0; i <= 50; ++i) {
    xs.push_back(-1.0 + 3.0 * i / 50.0);
    ys.push_back(1.0 + xs.back() - 2.0 * xs.back() * xs.back() * xs.back());
  }
  const ChebyshevSeries c = ChebyshevSeries::fit(xs, ys, -1.0, 2.0, 3);
  CHECK(c(0.7) == doctest::Approx(1.0 + 0.7 - 2.0 * 0.343).epsilon(1e-12));
}
