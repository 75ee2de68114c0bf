#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "json.hpp"
#include "revmass/experiment.hpp"

namespace {

using namespace revmass;

void print_study(const ConvergenceStudy& study) {
  if (!study.reports.empty()) write_csv(study, std::cout);
  for (const LemmaCheck& c : study.lemmas) {
    std::cout << c.name;
    if (c.fit) std::cout << " order " << format_number(c.fit->fitted_order);
    if (c.degenerate) std::cout << " degenerate";
    std::cout << '\n';
  }
  for (const Verdict& v : study.verdicts)
    std::cout << (v.pass ? "PASS " : "FAIL ") << v.name << " measured "
              << format_number(v.measured) << " threshold " << v.threshold << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-local mass of revolution surfaces in asymptotically flat metrics"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::size_t panels = 0;
  std::size_t nodes = 0;
  app.add_option("--config", config_path, "experiment config file")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides [output] dir)");
  app.add_option("--quad-panels", panels, "initial quadrature panels")->check(CLI::PositiveNumber);
  app.add_option("--quad-nodes", nodes, "Gauss nodes per panel")->check(CLI::Range(4, 64));

  auto* validate = app.add_subcommand("validate", "check surface conditions, decay and embeddability");
  auto* mass = app.add_subcommand("mass", "mass table over the configured scales");
  auto* converge = app.add_subcommand("converge", "convergence study (kind from config)");
  auto* lemmas = app.add_subcommand("lemmas", "decay-order checks");
  auto* dump = app.add_subcommand("embed-dump", "write the embedded generating curve per scale");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (panels) cfg.quad.panels = panels;
    if (nodes) cfg.quad.nodes_per_panel = nodes;

    if (dump->parsed()) {
      std::filesystem::create_directories(cfg.out_dir);
      for (double a : cfg.scales) {
        const auto path = cfg.out_dir / (cfg.stem + "_embed_a" + format_number(a) + ".csv");
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot write " + path.string());
        write_embedding_dump(cfg, a, f);
        std::cout << path.string() << '\n';
      }
      return 0;
    }

    if (validate->parsed()) {
      cfg.kind = ExperimentKind::validate;
    } else if (mass->parsed()) {
      cfg.kind = ExperimentKind::mass_table;
    } else if (lemmas->parsed()) {
      cfg.kind = ExperimentKind::lemma_decay_checks;
    } else if (converge->parsed()) {
      if (cfg.kind != ExperimentKind::converge_by && cfg.kind != ExperimentKind::converge_adm &&
          cfg.kind != ExperimentKind::hawking_divergence)
        cfg.kind = ExperimentKind::converge_by;
    }

    const ConvergenceStudy study = run_experiment(cfg);
    write_outputs(study, cfg);
    print_study(study);
    return study.passed() ? 0 : 2;
  } catch (const ExperimentError& e) {
    nlohmann::ordered_json err{{"error", e.what()}, {"a", e.a()}, {"stage", e.stage()}};
    std::cerr << err.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    nlohmann::ordered_json err{{"error", e.what()}};
    std::cerr << err.dump() << '\n';
    return 1;
  }
}
