#include "revmass/experiment.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "revmass/embedding.hpp"
#include "revmass/surface_geometry.hpp"

namespace revmass {

namespace {

using boost::property_tree::ptree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"profile", {"builtin", "params", "csv", "arclength"}},
      {"metric", {"kind", "m", "perturbation", "amplitude", "r_min"}},
      {"experiment", {"kind", "scales", "threads"}},
      {"quadrature", {"panels", "nodes", "tol", "pole_margin", "max_doublings"}},
      {"verdicts",
       {"by_order_min", "by_order_max", "adm_order_max", "hawking_negative_from",
        "hawking_ratio_min", "hawking_ratio_max", "lemma_slack", "cancellation_rel", "flat_by",
        "flat_adm", "degenerate_gap"}},
      {"output", {"dir", "stem"}},
  };
  return keys;
}

std::vector<double> parse_list(const std::string& text, const std::string& key) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("config: '" + key + "' has a non-numeric entry '" + tok + "'");
    }
  }
  return out;
}

template <typename T>
T get(const ptree& section, const std::string& key, T fallback, const std::string& where) {
  try {
    return section.get<T>(key, fallback);
  } catch (const boost::property_tree::ptree_error&) {
    throw ConfigError("config: bad value for " + where + "." + key);
  }
}

std::string stage_of(const std::exception& e) {
  if (dynamic_cast<const EmbeddingError*>(&e)) return "embedding";
  if (dynamic_cast<const GeometryError*>(&e)) return "geometry";
  if (dynamic_cast<const MetricError*>(&e)) return "metric";
  if (dynamic_cast<const NumericsError*>(&e)) return "quadrature";
  if (dynamic_cast<const ProfileError*>(&e)) return "profile";
  return "internal";
}

template <typename F>
auto at_scale(double a, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ExperimentError&) {
    throw;
  } catch (const std::exception& e) {
    throw ExperimentError(a, stage_of(e), e.what());
  }
}

/// Evaluates f at every scale; results keep the order of `scales`.
template <typename F>
auto parallel_map(const std::vector<double>& scales, unsigned threads, F f)
    -> std::vector<decltype(f(0.0))> {
  using R = decltype(f(0.0));
  unsigned width = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  std::vector<R> out;
  out.reserve(scales.size());
  if (width == 1) {
    for (double a : scales) out.push_back(f(a));
    return out;
  }
  for (std::size_t start = 0; start < scales.size(); start += width) {
    std::vector<std::future<R>> batch;
    const std::size_t stop = std::min(scales.size(), start + width);
    for (std::size_t i = start; i < stop; ++i)
      batch.push_back(std::async(std::launch::async, f, scales[i]));
    for (auto& fut : batch) out.push_back(fut.get());
  }
  return out;
}

std::string range_text(double lo, double hi) {
  return "[" + format_number(lo) + ", " + format_number(hi) + "]";
}

Verdict verdict(std::string name, double measured, std::string threshold, bool pass) {
  return {std::move(name), measured, std::move(threshold), pass};
}

double sup_over_nodes(const Profile& p, const QuadSpec& quad,
                      const std::function<double(double)>& f) {
  double s = 0.0;
  for (double phi : composite_nodes(0.0, p.l(), quad.panels, quad.nodes_per_panel))
    s = std::max(s, std::abs(f(phi)));
  return s;
}

}  // namespace

ExperimentError::ExperimentError(double a, std::string stage, const std::string& what)
    : std::runtime_error("a = " + format_number(a) + ", stage " + stage + ": " + what),
      a_(a),
      stage_(std::move(stage)) {}

ExperimentKind experiment_kind_from_string(const std::string& s) {
  if (s == "mass_table") return ExperimentKind::mass_table;
  if (s == "converge_by") return ExperimentKind::converge_by;
  if (s == "converge_adm") return ExperimentKind::converge_adm;
  if (s == "hawking_divergence") return ExperimentKind::hawking_divergence;
  if (s == "lemma_decay_checks") return ExperimentKind::lemma_decay_checks;
  if (s == "validate") return ExperimentKind::validate;
  throw ConfigError("unknown experiment kind '" + s + "'");
}

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::mass_table: return "mass_table";
    case ExperimentKind::converge_by: return "converge_by";
    case ExperimentKind::converge_adm: return "converge_adm";
    case ExperimentKind::hawking_divergence: return "hawking_divergence";
    case ExperimentKind::lemma_decay_checks: return "lemma_decay_checks";
    case ExperimentKind::validate: return "validate";
  }
  return "unknown";
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void ExperimentConfig::validate() const {
  if (scales.empty()) throw ConfigError("config: scale list is empty");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0) || !std::isfinite(scales[i]))
      throw ConfigError("config: scales must be positive and finite");
    if (i > 0 && !(scales[i] > scales[i - 1]))
      throw ConfigError("config: scales must be strictly increasing");
  }
  if (metric.kind != MetricKind::euclidean && !(metric.m > 0.0))
    throw ConfigError("config: m must be positive unless the metric is euclidean");
  if (metric.kind == MetricKind::perturbed && metric.perturbation.empty())
    throw ConfigError("config: perturbed metric needs a perturbation preset");
  const bool needs_fit = kind == ExperimentKind::converge_by ||
                         kind == ExperimentKind::converge_adm ||
                         kind == ExperimentKind::lemma_decay_checks;
  if (needs_fit && scales.size() < 3)
    throw ConfigError("config: " + to_string(kind) + " needs at least 3 scales");
  if (kind == ExperimentKind::lemma_decay_checks && metric.kind == MetricKind::euclidean)
    throw ConfigError("config: lemma_decay_checks needs a curved metric");
  quad.validate();
}

ExperimentConfig parse_config(std::istream& in) {
  ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  const auto& keys = known_keys();
  for (const auto& [name, section] : tree) {
    const auto it = keys.find(name);
    if (it == keys.end()) throw ConfigError("config: unknown section [" + name + "]");
    for (const auto& [key, value] : section)
      if (!it->second.count(key))
        throw ConfigError("config: unknown key '" + key + "' in [" + name + "]");
  }

  ExperimentConfig cfg;
  const ptree empty;
  auto section = [&](const std::string& name) -> const ptree& {
    const auto child = tree.get_child_optional(name);
    return child ? *child : empty;
  };

  const ptree& prof = section("profile");
  cfg.profile.builtin = get<std::string>(prof, "builtin", cfg.profile.builtin, "profile");
  cfg.profile.params = parse_list(get<std::string>(prof, "params", "", "profile"), "params");
  cfg.profile.csv_path = get<std::string>(prof, "csv", "", "profile");
  cfg.profile.arclength = get<bool>(prof, "arclength", false, "profile");

  const ptree& met = section("metric");
  cfg.metric.kind = metric_kind_from_string(get<std::string>(met, "kind", "schwarzschild", "metric"));
  cfg.metric.m = get<double>(met, "m", cfg.metric.m, "metric");
  if (cfg.metric.kind == MetricKind::euclidean) cfg.metric.m = 0.0;
  cfg.metric.perturbation = get<std::string>(met, "perturbation", "", "metric");
  cfg.metric.amplitude = get<double>(met, "amplitude", cfg.metric.amplitude, "metric");
  cfg.metric.r_min = get<double>(met, "r_min", cfg.metric.r_min, "metric");

  const ptree& exp = section("experiment");
  cfg.kind = experiment_kind_from_string(get<std::string>(exp, "kind", "mass_table", "experiment"));
  cfg.scales = parse_list(get<std::string>(exp, "scales", "", "experiment"), "scales");
  cfg.threads = get<unsigned>(exp, "threads", 0u, "experiment");

  const ptree& q = section("quadrature");
  cfg.quad.panels = get<std::size_t>(q, "panels", cfg.quad.panels, "quadrature");
  cfg.quad.nodes_per_panel = get<std::size_t>(q, "nodes", cfg.quad.nodes_per_panel, "quadrature");
  cfg.quad.tol = get<double>(q, "tol", cfg.quad.tol, "quadrature");
  cfg.quad.pole_margin = get<double>(q, "pole_margin", cfg.quad.pole_margin, "quadrature");
  cfg.quad.max_doublings = get<std::size_t>(q, "max_doublings", cfg.quad.max_doublings, "quadrature");

  const ptree& v = section("verdicts");
  Verdicts& t = cfg.verdicts;
  t.by_order_min = get<double>(v, "by_order_min", t.by_order_min, "verdicts");
  t.by_order_max = get<double>(v, "by_order_max", t.by_order_max, "verdicts");
  t.adm_order_max = get<double>(v, "adm_order_max", t.adm_order_max, "verdicts");
  t.hawking_negative_from = get<double>(v, "hawking_negative_from", t.hawking_negative_from, "verdicts");
  t.hawking_ratio_min = get<double>(v, "hawking_ratio_min", t.hawking_ratio_min, "verdicts");
  t.hawking_ratio_max = get<double>(v, "hawking_ratio_max", t.hawking_ratio_max, "verdicts");
  t.lemma_slack = get<double>(v, "lemma_slack", t.lemma_slack, "verdicts");
  t.cancellation_rel = get<double>(v, "cancellation_rel", t.cancellation_rel, "verdicts");
  t.flat_by = get<double>(v, "flat_by", t.flat_by, "verdicts");
  t.flat_adm = get<double>(v, "flat_adm", t.flat_adm, "verdicts");
  t.degenerate_gap = get<double>(v, "degenerate_gap", t.degenerate_gap, "verdicts");

  const ptree& out = section("output");
  cfg.out_dir = get<std::string>(out, "dir", ".", "output");
  cfg.stem = get<std::string>(out, "stem", cfg.stem, "output");

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  ExperimentConfig cfg = parse_config(in);
  if (!cfg.profile.csv_path.empty() && std::filesystem::path(cfg.profile.csv_path).is_relative())
    cfg.profile.csv_path = (path.parent_path() / cfg.profile.csv_path).string();
  return cfg;
}

Profile build_profile(const ProfileSpec& spec) {
  Profile p = spec.csv_path.empty()
                  ? make_builtin(builtin_from_string(spec.builtin), spec.params)
                  : read_profile_csv(spec.csv_path);
  if (spec.arclength && !p.arclength()) p = reparametrize_arclength(p);
  return p;
}

AmbientMetric build_metric(const MetricSpec& spec) {
  std::optional<PerturbationField> b;
  if (spec.kind == MetricKind::perturbed) b = make_perturbation(spec.perturbation, spec.amplitude);
  return build_metric(spec.kind, spec.m, b, spec.r_min);
}

bool ConvergenceStudy::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

std::vector<LemmaCheck> run_lemma_checks(const ExperimentConfig& cfg) {
  cfg.validate();
  const Profile p = build_profile(cfg.profile);
  const QuadSpec& quad = cfg.quad;
  const double m = cfg.metric.m;
  const AmbientMetric sch = build_metric(MetricKind::schwarzschild, m, std::nullopt, cfg.metric.r_min);
  const std::string preset = cfg.metric.perturbation.empty() ? "radial" : cfg.metric.perturbation;
  const double amplitude = cfg.metric.kind == MetricKind::perturbed ? cfg.metric.amplitude : 0.0;
  const AmbientMetric pert = build_metric(MetricKind::perturbed, m,
                                          make_perturbation(preset, amplitude), cfg.metric.r_min);

  struct Row {
    double dphi, d2phi, K, H0H, HtH, Ht0H0, diag;
  };
  const auto rows = parallel_map(cfg.scales, cfg.threads, [&](double a) {
    return at_scale(a, [&] {
      Row r{};
      const ConformalFactor& f = sch.conformal_factor();
      r.dphi = sup_over_nodes(p, quad, [&](double t) { return factor_along(p, a, f, t).d1; });
      r.d2phi = sup_over_nodes(p, quad, [&](double t) { return factor_along(p, a, f, t).d2; });
      const InducedMetric im = induce_metric(p, a, sch);
      r.K = sup_over_nodes(p, quad, [&](double t) {
        return induced_gauss_curvature(im, t, quad.pole_margin) -
               euclid_gauss_curvature(p, a, t, quad.pole_margin);
      });
      const EmbeddedCurve ec = embed_revolution(im, a, 0.0, quad.pole_margin);
      r.H0H = sup_over_nodes(p, quad, [&](double t) {
        return reference_mean_curvature(ec, t) -
               conformal_mean_curvature(p, a, t, sch, quad.pole_margin);
      });
      r.HtH = sup_over_nodes(p, quad, [&](double t) {
        return general_mean_curvature(p, a, t, pert, quad.pole_margin) -
               conformal_mean_curvature(p, a, t, sch, quad.pole_margin);
      });
      r.Ht0H0 = embedding_perturbation_gap(im, induce_metric(p, a, pert), a, quad);
      r.diag = std::abs(cancellation_diagnostic(p, a, sch, quad).value);
      return r;
    });
  });

  std::vector<LemmaCheck> checks;
  auto add = [&](std::string name, double order, double Row::*field) {
    LemmaCheck c;
    c.name = std::move(name);
    c.nominal_order = order;
    for (std::size_t i = 0; i < rows.size(); ++i) c.gaps.emplace_back(cfg.scales[i], rows[i].*field);
    const bool tiny = std::all_of(c.gaps.begin(), c.gaps.end(), [&](const auto& g) {
      return g.second < cfg.verdicts.degenerate_gap;
    });
    if (tiny) {
      c.degenerate = true;
      c.pass = true;
    } else {
      c.fit = fit_order(c.gaps);
      c.pass = c.fit->fitted_order <= order + cfg.verdicts.lemma_slack;
    }
    checks.push_back(std::move(c));
  };
  add("dphi", -1.0, &Row::dphi);
  add("d2phi", -1.0, &Row::d2phi);
  add("K_minus_Kbar", -3.0, &Row::K);
  add("H0_minus_H", -2.0, &Row::H0H);
  add("Htilde_minus_H", -3.0, &Row::HtH);
  add("H0tilde_minus_H0", -3.0, &Row::Ht0H0);

  LemmaCheck diag;
  diag.name = "cancellation";
  for (std::size_t i = 0; i < rows.size(); ++i) diag.gaps.emplace_back(cfg.scales[i], rows[i].diag);
  diag.pass = std::all_of(diag.gaps.begin(), diag.gaps.end(), [&](const auto& g) {
    return g.second < cfg.verdicts.cancellation_rel * m;
  });
  checks.push_back(std::move(diag));
  return checks;
}

ConvergenceStudy run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ConvergenceStudy study;
  study.kind = cfg.kind;
  study.m_limit = cfg.metric.m;
  const Verdicts& t = cfg.verdicts;
  const Profile p = at_scale(0.0, [&] { return build_profile(cfg.profile); });
  const AmbientMetric metric = at_scale(0.0, [&] { return build_metric(cfg.metric); });

  if (cfg.kind == ExperimentKind::validate) {
    const ConditionConstants c = at_scale(0.0, [&] {
      return validate_conditions(SurfaceFamily::constant(p, cfg.scales));
    });
    study.verdicts.push_back(verdict("conditions_C1", c.C1, "> 0", c.C1 > 0.0));
    study.verdicts.push_back(verdict("conditions_C2", c.C2, "finite", std::isfinite(c.C2)));
    study.verdicts.push_back(verdict("conditions_C3", c.C3, "> 0", c.C3 > 0.0));
    study.verdicts.push_back(verdict("conditions_C4", c.C4, ">= C3", c.C4 >= c.C3));
    if (metric.perturbation()) {
      const std::vector<double> shells{1.0, 10.0, 100.0, 1000.0};
      const DecayReport d = validate_decay(metric, shells);
      study.verdicts.push_back(verdict("decay_bounded", d.sup.back()[0], "bounded", d.bounded));
    }
    const auto margins = parallel_map(cfg.scales, cfg.threads, [&](double a) {
      return at_scale(a, [&] {
        embed_revolution(induce_metric(p, a, metric), a, 0.0, cfg.quad.pole_margin);
        return radicand_margin(p, a, metric, cfg.quad);
      });
    });
    for (std::size_t i = 0; i < margins.size(); ++i)
      study.verdicts.push_back(verdict("embeddable a=" + format_number(cfg.scales[i]),
                                       margins[i], "> 0", margins[i] > 0.0));
    return study;
  }

  if (cfg.kind == ExperimentKind::lemma_decay_checks) {
    study.lemmas = run_lemma_checks(cfg);
    for (const LemmaCheck& c : study.lemmas) {
      if (c.name == "cancellation") {
        double worst = 0.0;
        for (const auto& g : c.gaps) worst = std::max(worst, g.second);
        study.verdicts.push_back(verdict(c.name, worst,
                                         "< " + format_number(t.cancellation_rel) + " m", c.pass));
      } else {
        const double measured = c.fit ? c.fit->fitted_order : 0.0;
        study.verdicts.push_back(
            verdict(c.name + (c.degenerate ? " (degenerate)" : ""), measured,
                    "<= " + format_number(c.nominal_order + t.lemma_slack), c.pass));
      }
    }
    return study;
  }

  study.reports = parallel_map(cfg.scales, cfg.threads, [&](double a) {
    return at_scale(a, [&] { return mass_report(p, a, metric, cfg.quad); });
  });
  const auto& reps = study.reports;
  const double m = cfg.metric.m;

  switch (cfg.kind) {
    case ExperimentKind::mass_table:
      for (const MassReport& r : reps) {
        const std::string at = " a=" + format_number(r.a);
        study.verdicts.push_back(verdict("quad_err" + at, r.quad_err,
                                         "< " + format_number(cfg.quad.tol),
                                         r.quad_err < cfg.quad.tol));
        if (metric.kind() == MetricKind::euclidean) {
          study.verdicts.push_back(verdict("flat_m_by" + at, r.m_by, "|.| <= " + format_number(t.flat_by),
                                           std::abs(r.m_by) <= t.flat_by));
          study.verdicts.push_back(verdict("flat_m_adm" + at, r.m_adm_flux,
                                           "|.| <= " + format_number(t.flat_adm),
                                           std::abs(r.m_adm_flux) <= t.flat_adm));
        } else {
          study.verdicts.push_back(verdict("cancellation" + at, r.diag_cancellation,
                                           "|.| < " + format_number(t.cancellation_rel * m),
                                           std::abs(r.diag_cancellation) < t.cancellation_rel * m));
        }
      }
      break;
    case ExperimentKind::converge_by:
    case ExperimentKind::converge_adm: {
      const bool by = cfg.kind == ExperimentKind::converge_by;
      std::vector<std::pair<double, double>> errs;
      for (const MassReport& r : reps) errs.emplace_back(r.a, std::abs((by ? r.m_by : r.m_adm_flux) - m));
      bool decreasing = true;
      for (std::size_t i = 1; i < errs.size(); ++i) decreasing &= errs[i].second < errs[i - 1].second;
      const std::string tag = by ? "m_by" : "m_adm";
      study.verdicts.push_back(verdict(tag + "_error_decreasing", errs.back().second,
                                       "strictly decreasing", decreasing));
      const OrderFit fit = at_scale(0.0, [&] { return fit_order(errs); });
      if (by) {
        study.by_fit = fit;
        study.verdicts.push_back(verdict("m_by_order", fit.fitted_order,
                                         range_text(t.by_order_min, t.by_order_max),
                                         fit.fitted_order >= t.by_order_min &&
                                             fit.fitted_order <= t.by_order_max));
      } else {
        study.adm_fit = fit;
        study.verdicts.push_back(verdict("m_adm_order", fit.fitted_order,
                                         "<= " + format_number(t.adm_order_max),
                                         fit.fitted_order <= t.adm_order_max));
      }
      break;
    }
    case ExperimentKind::hawking_divergence: {
      std::vector<std::pair<double, double>> mags;
      for (const MassReport& r : reps) {
        mags.emplace_back(r.a, std::abs(r.m_hawking));
        if (r.a >= t.hawking_negative_from)
          study.verdicts.push_back(verdict("m_hawking_negative a=" + format_number(r.a),
                                           r.m_hawking, "< 0", r.m_hawking < 0.0));
      }
      for (std::size_t i = 1; i < reps.size(); ++i) {
        if (reps[i - 1].a < t.hawking_negative_from) continue;
        const double ratio = reps[i].m_hawking / reps[i - 1].m_hawking;
        const double per = ratio / (reps[i].a / reps[i - 1].a);
        study.verdicts.push_back(verdict(
            "m_hawking_ratio a=" + format_number(reps[i - 1].a) + ".." + format_number(reps[i].a),
            ratio, "per unit scale " + range_text(t.hawking_ratio_min, t.hawking_ratio_max),
            per >= t.hawking_ratio_min && per <= t.hawking_ratio_max));
      }
      if (mags.size() >= 3 && std::all_of(mags.begin(), mags.end(), [](auto& x) { return x.second > 0; }))
        study.hawking_fit = fit_order(mags);
      break;
    }
    default: break;
  }
  return study;
}

const char* const kMassCsvHeader =
    "a,metric,profile,m_by,m_hawking,m_adm_flux,area,sup_H0_minus_H,diag_cancellation,quad_err";

void write_csv(const ConvergenceStudy& study, std::ostream& out) {
  out << kMassCsvHeader << '\n';
  for (const MassReport& r : study.reports) {
    out << format_number(r.a) << ',' << r.metric << ',' << r.profile << ','
        << format_number(r.m_by) << ',' << format_number(r.m_hawking) << ','
        << format_number(r.m_adm_flux) << ',' << format_number(r.area) << ','
        << format_number(r.sup_H0_minus_H) << ',' << format_number(r.diag_cancellation) << ','
        << format_number(r.quad_err) << '\n';
  }
}

namespace {

nlohmann::ordered_json fit_json(const std::optional<OrderFit>& fit) {
  if (!fit) return nullptr;
  return {{"fitted_order", fit->fitted_order},
          {"fitted_constant", fit->fitted_constant},
          {"r_squared", fit->r_squared}};
}

}  // namespace

void write_json(const ConvergenceStudy& study, const ExperimentConfig& cfg, std::ostream& out) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["experiment"] = to_string(study.kind);
  doc["profile"] = cfg.profile.csv_path.empty() ? cfg.profile.builtin : cfg.profile.csv_path;
  doc["metric"] = to_string(cfg.metric.kind);
  doc["m"] = cfg.metric.m;
  doc["scales"] = cfg.scales;
  doc["reports"] = ordered_json::array();
  for (const MassReport& r : study.reports) {
    doc["reports"].push_back({{"a", r.a},
                              {"metric", r.metric},
                              {"profile", r.profile},
                              {"m_by", r.m_by},
                              {"m_hawking", r.m_hawking},
                              {"m_adm_flux", r.m_adm_flux},
                              {"area", r.area},
                              {"sup_H0_minus_H", r.sup_H0_minus_H},
                              {"diag_cancellation", r.diag_cancellation},
                              {"quad_err", r.quad_err}});
  }
  doc["fits"] = {{"m_by", fit_json(study.by_fit)},
                 {"m_adm_flux", fit_json(study.adm_fit)},
                 {"m_hawking", fit_json(study.hawking_fit)}};
  doc["lemmas"] = ordered_json::array();
  for (const LemmaCheck& c : study.lemmas) {
    ordered_json gaps = ordered_json::array();
    for (const auto& [a, g] : c.gaps) gaps.push_back({a, g});
    doc["lemmas"].push_back({{"name", c.name},
                             {"nominal_order", c.nominal_order},
                             {"gaps", gaps},
                             {"fit", fit_json(c.fit)},
                             {"degenerate", c.degenerate},
                             {"pass", c.pass}});
  }
  doc["verdicts"] = ordered_json::array();
  for (const Verdict& v : study.verdicts)
    doc["verdicts"].push_back(
        {{"name", v.name}, {"measured", v.measured}, {"threshold", v.threshold}, {"pass", v.pass}});
  doc["passed"] = study.passed();
  out << doc.dump(2) << '\n';
}

void emit_plotdata(const ConvergenceStudy& study, std::ostream& out) {
  out << "# a m_by m_hawking m_adm abs_m_by_minus_m\n";
  for (const MassReport& r : study.reports)
    out << format_number(r.a) << ' ' << format_number(r.m_by) << ' '
        << format_number(r.m_hawking) << ' ' << format_number(r.m_adm_flux) << ' '
        << format_number(std::abs(r.m_by - study.m_limit)) << '\n';
}

void write_outputs(const ConvergenceStudy& study, const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  auto open = [&](const std::string& ext) {
    const auto path = cfg.out_dir / (cfg.stem + ext);
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    return f;
  };
  {
    auto f = open(".csv");
    write_csv(study, f);
  }
  {
    auto f = open(".json");
    write_json(study, cfg, f);
  }
  {
    auto f = open(".dat");
    emit_plotdata(study, f);
  }
}

void write_embedding_dump(const ExperimentConfig& cfg, double a, std::ostream& out) {
  const Profile p = build_profile(cfg.profile);
  const AmbientMetric metric = build_metric(cfg.metric);
  at_scale(a, [&] {
    const EmbeddedCurve ec =
        embed_revolution(induce_metric(p, a, metric), a, 0.0, cfg.quad.pole_margin);
    out << "phi,u,v,H0\n";
    for (double phi : composite_nodes(0.0, p.l(), cfg.quad.panels, cfg.quad.nodes_per_panel))
      out << format_number(phi) << ',' << format_number(ec.u(phi)) << ','
          << format_number(ec.v(phi)) << ',' << format_number(reference_mean_curvature(ec, phi))
          << '\n';
    return 0;
  });
}

}  // namespace revmass
