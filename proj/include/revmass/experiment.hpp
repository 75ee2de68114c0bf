#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "revmass/ambient_metric.hpp"
#include "revmass/masses.hpp"
#include "revmass/numerics.hpp"
#include "revmass/profiles.hpp"

namespace revmass {

enum class ExperimentKind {
  mass_table,
  converge_by,
  converge_adm,
  hawking_divergence,
  lemma_decay_checks,
  validate
};

ExperimentKind experiment_kind_from_string(const std::string& s);
std::string to_string(ExperimentKind k);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure of one stage of an experiment at one scale.
class ExperimentError : public std::runtime_error {
 public:
  ExperimentError(double a, std::string stage, const std::string& what);
  double a() const { return a_; }
  const std::string& stage() const { return stage_; }

 private:
  double a_;
  std::string stage_;
};

struct ProfileSpec {
  std::string builtin = "ellipsoid_112";
  std::vector<double> params;
  std::string csv_path;
  bool arclength = false;
};

struct MetricSpec {
  MetricKind kind = MetricKind::schwarzschild;
  double m = 1.0;
  std::string perturbation;  // preset name, empty for none
  double amplitude = 1.0;
  double r_min = 1.0;
};

/// Acceptance thresholds; defaults are the project's published targets.
struct Verdicts {
  double by_order_min = -1.3;
  double by_order_max = -0.7;
  double adm_order_max = -0.7;
  double hawking_negative_from = 50.0;
  double hawking_ratio_min = 0.9;  // per unit scale ratio
  double hawking_ratio_max = 1.1;
  double lemma_slack = 0.3;
  double cancellation_rel = 1e-8;
  double flat_by = 1e-8;
  double flat_adm = 1e-12;
  double degenerate_gap = 1e-12;
};

struct ExperimentConfig {
  ProfileSpec profile;
  MetricSpec metric;
  ExperimentKind kind = ExperimentKind::mass_table;
  std::vector<double> scales;
  QuadSpec quad;
  Verdicts verdicts;
  std::filesystem::path out_dir = ".";
  std::string stem = "study";
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

/// INI-style text: [section] headers, key = value lines, ';' or '#' comments.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

Profile build_profile(const ProfileSpec& spec);
AmbientMetric build_metric(const MetricSpec& spec);

struct Verdict {
  std::string name;
  double measured = 0.0;
  std::string threshold;
  bool pass = false;
};

struct LemmaCheck {
  std::string name;
  double nominal_order = 0.0;
  std::vector<std::pair<double, double>> gaps;  // (a, sup gap)
  std::optional<OrderFit> fit;
  bool degenerate = false;
  bool pass = false;
};

struct ConvergenceStudy {
  ExperimentKind kind = ExperimentKind::mass_table;
  std::vector<MassReport> reports;
  std::optional<OrderFit> by_fit;
  std::optional<OrderFit> adm_fit;
  std::optional<OrderFit> hawking_fit;
  std::vector<LemmaCheck> lemmas;
  std::vector<Verdict> verdicts;
  double m_limit = 0.0;

  bool passed() const;
};

/// Runs the configured experiment. Scales are evaluated concurrently;
/// results are ordered by scale and independent of the thread count.
ConvergenceStudy run_experiment(const ExperimentConfig& cfg);

std::vector<LemmaCheck> run_lemma_checks(const ExperimentConfig& cfg);

extern const char* const kMassCsvHeader;

void write_csv(const ConvergenceStudy& study, std::ostream& out);
void write_json(const ConvergenceStudy& study, const ExperimentConfig& cfg, std::ostream& out);
/// Whitespace-separated columns a, m_by, m_hawking, m_adm, |m_by - m|.
void emit_plotdata(const ConvergenceStudy& study, std::ostream& out);

/// Writes <stem>.csv, <stem>.json and <stem>.dat under cfg.out_dir.
void write_outputs(const ConvergenceStudy& study, const ExperimentConfig& cfg);

/// Writes phi, u, v, H0 at the quadrature nodes of the embedding at scale a.
void write_embedding_dump(const ExperimentConfig& cfg, double a, std::ostream& out);

/// Formats with 17 significant digits.
std::string format_number(double x);

}  // namespace revmass
