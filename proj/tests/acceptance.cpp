// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "revmass/embedding.hpp"
#include "revmass/experiment.hpp"
#include "revmass/masses.hpp"

using namespace revmass;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

int failures = 0;

void run(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("error: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && secs > budget_s) {
    o.pass = false;
    o.detail += "; over time budget " + fmt("%.0f s", budget_s);
  }
  if (!o.pass) ++failures;
  std::printf("%s %d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

const Profile sphere = make_builtin(Builtin::sphere);
const Profile ellipsoid = make_builtin(Builtin::ellipsoid_112);

bool strictly_decreasing(const std::vector<std::pair<double, double>>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i].second < v[i - 1].second)) return false;
  return true;
}

double sup_gap(const Profile& p, const std::function<double(double)>& f) {
  double s = 0.0;
  for (double t : composite_nodes(0.0, p.l(), 16, 16)) s = std::max(s, std::abs(f(t)));
  return s;
}

}  // namespace

int main() {
  const AmbientMetric flat = build_metric(MetricKind::euclidean, 0.0);
  const AmbientMetric sch = build_metric(MetricKind::schwarzschild, 1.0);

  run(1, "Schwarzschild sphere Brown-York closed form", 5.0, [&] {
    double worst = 0.0;
    for (double a : {1e1, 1e2, 1e3, 1e4}) {
      const double want = 1.0 + 1.0 / (2 * a);
      worst = std::max(worst, std::abs(brown_york(sphere, a, sch).value - want) / want);
    }
    return Outcome{worst <= 1e-8, "max relative error " + fmt("%.2e", worst) + " (tol 1e-8)"};
  });

  run(2, "ellipsoid Brown-York convergence", 60.0, [&] {
    std::vector<std::pair<double, double>> errs;
    for (double a : {25.0, 50.0, 100.0, 200.0, 400.0})
      errs.emplace_back(a, std::abs(brown_york(ellipsoid, a, sch).value - 1.0));
    const double order = fit_order(errs).fitted_order;
    const bool ok = strictly_decreasing(errs) && order >= -1.3 && order <= -0.7;
    return Outcome{ok, "errors strictly decreasing " + std::string(strictly_decreasing(errs) ? "yes" : "no") +
                           ", fitted order " + fmt("%.4f", order) + " (band [-1.3, -0.7])"};
  });

  run(3, "perturbed Brown-York convergence and gap decay", 180.0, [&] {
    bool ok = true;
    std::ostringstream detail;
    const std::vector<double> scales{25.0, 50.0, 100.0, 200.0, 400.0};
    for (const auto& name : perturbation_presets()) {
      const AmbientMetric pm = build_metric(MetricKind::perturbed, 1.0, make_perturbation(name, 1.0));
      std::vector<std::pair<double, double>> by, h, h0;
      for (double a : scales) {
        by.emplace_back(a, std::abs(brown_york(ellipsoid, a, pm).value - 1.0));
        h.emplace_back(a, sup_gap(ellipsoid, [&](double t) {
          return general_mean_curvature(ellipsoid, a, t, pm) - conformal_mean_curvature(ellipsoid, a, t, sch);
        }));
        h0.emplace_back(a, embedding_perturbation_gap(induce_metric(ellipsoid, a, sch),
                                                      induce_metric(ellipsoid, a, pm), a));
      }
      const double ob = fit_order(by).fitted_order, oh = fit_order(h).fitted_order,
                   oh0 = fit_order(h0).fitted_order;
      ok &= strictly_decreasing(by) && ob <= -0.7 && oh <= -2.7 && oh0 <= -2.7;
      detail << name << ": m_BY order " << fmt("%.3f", ob) << ", H gap " << fmt("%.3f", oh)
             << ", H0 gap " << fmt("%.3f", oh0) << "; ";
    }
    return Outcome{ok, detail.str() + "limits -0.7 / -2.7 / -2.7"};
  });

  run(4, "Hawking mass of Schwarzschild spheres", 0.0, [&] {
    double worst = 0.0;
    for (double a : {1e1, 1e2, 1e3}) worst = std::max(worst, std::abs(hawking(sphere, a, sch).value - 1.0));
    return Outcome{worst <= 1e-8, "max |m_H - 1| " + fmt("%.2e", worst) + " (tol 1e-8)"};
  });

  run(5, "Hawking divergence on ellipsoids", 0.0, [&] {
    std::vector<double> mh;
    const std::vector<double> scales{50.0, 100.0, 200.0, 400.0};
    for (double a : scales) mh.push_back(hawking(ellipsoid, a, sch).value);
    bool ok = true;
    double lo = HUGE_VAL, hi = -HUGE_VAL;
    for (double v : mh) ok &= v < 0.0;
    for (std::size_t i = 1; i < mh.size(); ++i) {
      const double r = mh[i] / mh[i - 1];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      ok &= r >= 1.8 && r <= 2.2;
    }
    return Outcome{ok, "m_H(400) " + fmt("%.4f", mh.back()) + ", doubling ratios in [" + fmt("%.4f", lo) +
                           ", " + fmt("%.4f", hi) + "] (band [1.8, 2.2])"};
  });

  run(6, "ADM flux closed form and exhaustion independence", 0.0, [&] {
    double worst = 0.0;
    for (double R : {10.0, 100.0, 200.0, 1e4}) {
      const double want = std::pow(1.0 + 1.0 / (2 * R), 3);
      worst = std::max(worst, std::abs(adm_flux(sphere, R, sch).value - want) / want);
    }
    const double gap = std::abs(adm_flux(ellipsoid, 200.0, sch).value - adm_flux(sphere, 200.0, sch).value);
    return Outcome{worst <= 1e-8 && gap <= 5e-3, "sphere relative error " + fmt("%.2e", worst) +
                                                     " (tol 1e-8), ellipsoid vs sphere at 200: " +
                                                     fmt("%.3e", gap) + " (tol 5e-3)"};
  });

  run(7, "exact cancellation diagnostic", 0.0, [&] {
    double worst = 0.0;
    for (const Profile* p : {&sphere, &ellipsoid})
      for (double a : {1e2, 1e3}) worst = std::max(worst, std::abs(cancellation_diagnostic(*p, a, sch).value));
    return Outcome{worst < 1e-8, "max |diagnostic| " + fmt("%.2e", worst) + " (tol 1e-8 m)"};
  });

  run(8, "embedding round trip and Gauss curvature cross-check", 0.0, [&] {
    std::vector<AmbientMetric> metrics{flat, sch};
    for (const auto& name : perturbation_presets())
      metrics.push_back(build_metric(MetricKind::perturbed, 1.0, make_perturbation(name, 1.0)));
    const Profile arc = reparametrize_arclength(ellipsoid);
    double iso = 0.0, gauss = 0.0;
    int count = 0;
    for (const AmbientMetric& g : metrics)
      for (const Profile* p : {&sphere, &ellipsoid, &arc})
        for (double a : {25.0, 100.0, 1000.0}) {
          const InducedMetric im = induce_metric(*p, a, g);
          const EmbeddedCurve ec = embed_revolution(im, a);
          const InducedMetric back = ec.reinduced();
          for (double t : composite_nodes(0.0, p->l(), 16, 16)) {
            const MetricJet x = im(t), y = back(t);
            iso = std::max({iso, std::abs(y.E - x.E) / x.E, std::abs(y.G() - x.G()) / x.G()});
          }
          for (double t : composite_nodes(0.0, p->l(), 8, 8)) {
            const double k = induced_gauss_curvature(im, t);
            gauss = std::max(gauss, std::abs(embedded_gauss_curvature(ec, t) - k) / k);
          }
          ++count;
        }
    return Outcome{iso <= 1e-8 && gauss <= 1e-6, std::to_string(count) + " metrics, isometry " +
                                                     fmt("%.2e", iso) + " (tol 1e-8), curvature " +
                                                     fmt("%.2e", gauss) + " (tol 1e-6)"};
  });

  run(9, "property suite", 0.0, [&] {
    std::vector<std::string> bad;
    const Profile arc = reparametrize_arclength(ellipsoid);

    const PoleLimits ps = pole_limits(sphere), pe = pole_limits(arc);
    if (std::abs(ps.w_over_hprime_at_0 + 1) > 1e-12 || std::abs(ps.w_over_hprime_at_l + 1) > 1e-12 ||
        std::abs(pe.w_over_hprime_at_0 + 0.5) > 1e-9 || std::abs(pe.w_over_hprime_at_l + 0.5) > 1e-9)
      bad.push_back("pole limits");

    for (const Profile* p : {&sphere, &ellipsoid, &arc}) {
      const std::vector<double> scales{10.0, 100.0, 1000.0};
      const ConditionConstants c = validate_conditions(SurfaceFamily::constant(*p, scales));
      for (double a : scales)
        for (double t : composite_nodes(0.0, p->l(), 16, 16)) {
          const CurvatureSample s = sample_curvatures(*p, a, t, flat);
          for (double lam : {s.kappa1, s.kappa2})
            if (lam < c.C1 / (c.C2 * a) - 1e-8 || lam > c.C2 / a + 1e-8) bad.push_back("principal curvature bounds");
          const double k = induced_gauss_curvature(induce_metric(*p, a, flat), t);
          if (std::abs(k - s.kappa1 * s.kappa2) > 1e-6 * std::abs(k)) bad.push_back("Gauss consistency");
        }
    }

    for (bool second : {false, true}) {
      std::vector<std::pair<double, double>> sup;
      for (double a : {1e2, 1e3, 1e4})
        sup.emplace_back(a, sup_gap(arc, [&](double t) {
          const FactorJet f = factor_along(arc, a, sch.conformal_factor(), t);
          return second ? f.d2 : f.d1;
        }));
      if (fit_order(sup).fitted_order > -1.0 + 1e-3) bad.push_back("conformal factor derivative decay");
    }

    for (std::size_t n : {4u, 16u, 64u}) {
      const auto poly = [n](double x) { return std::pow(x, double(2 * n - 1)) + std::pow(x, double(2 * n - 2)); };
      const double want = (std::pow(2.0, double(2 * n)) - 1.0) / double(2 * n) +
                          (std::pow(2.0, double(2 * n - 1)) + 1.0) / double(2 * n - 1);
      if (std::abs(composite_gauss(poly, -1.0, 2.0, 1, n) - want) > 1e-13 * want) bad.push_back("quadrature exactness");
    }

    std::istringstream cfg_text(
        "[profile]\nbuiltin = ellipsoid_112\n[metric]\nkind = perturbed\nm = 1\nperturbation = mixed\n"
        "[experiment]\nkind = converge_by\nscales = 25, 50, 100, 200\n");
    ExperimentConfig cfg = parse_config(cfg_text);
    std::string first;
    for (unsigned threads : {1u, 4u}) {
      cfg.threads = threads;
      std::ostringstream out;
      write_csv(run_experiment(cfg), out);
      if (first.empty()) first = out.str();
      else if (out.str() != first) bad.push_back("determinism across thread counts");
    }

    std::string detail = bad.empty() ? "pole limits, curvature bounds, Gauss consistency, factor decay, "
                                       "quadrature exactness, thread determinism"
                                     : "violated: " + bad.front();
    return Outcome{bad.empty(), detail};
  });

  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
