#include <filesystem>
#include <iostream>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "arks/error.hpp"
#include "arks/harness/config.hpp"
#include "arks/harness/experiment.hpp"
#include "arks/harness/presets.hpp"

namespace fs = std::filesystem;
using namespace arks;
using namespace arks::harness;

namespace {

enum Exit { kOk = 0, kConfig = 1, kSolver = 2, kVerdict = 3 };

struct Loaded {
  ExperimentConfig cfg;
  std::string text;
};

// A config argument is a file path or, failing that, a preset name.
Loaded load(const std::string& arg) {
  if (fs::exists(arg)) {
    std::ifstream in(arg);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return {parse_config(text), text};
  }
  if (auto p = find_preset(arg)) return {parse_config(p->text), std::string(p->text)};
  throw ConfigError("<config>", fmt::format("no such file or preset: {}", arg));
}

fs::path output_dir(const ExperimentConfig& cfg, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (!cfg.output.empty()) return cfg.output;
  return fs::path("runs") / cfg.name;
}

void print_verdicts(const std::string& label, const std::vector<Verdict>& vs) {
  for (const auto& v : vs) {
    std::cout << fmt::format("  {:<8} {:<40} {:>4}  measured={:.6g} bound={:.6g}{}{}\n", label, v.functional,
                             v.pass ? "ok" : "FAIL", v.fitted_exponent, v.bound, v.vacuous ? " (vacuous)" : "",
                             v.note.empty() ? "" : "  " + v.note);
  }
}

int cmd_run(const std::string& config, const std::string& output) {
  auto [cfg, text] = load(config);
  if (cfg.kind == ExperimentKind::Sweep || cfg.kind == ExperimentKind::Convergence) {
    throw ConfigError("experiment.kind", fmt::format("'{}' experiments use the '{}' subcommand", to_string(cfg.kind),
                                                     to_string(cfg.kind)));
  }
  RunOptions opts;
  opts.output = output_dir(cfg, output);
  opts.log = &std::cerr;
  const auto result = run_experiment(cfg, text, opts);
  for (const auto& r : result.runs) {
    std::cout << fmt::format("{} eps={:g} scenario={} status={} steps={}\n", result.name, r.eps,
                             to_string(r.initial.scenario), to_string(r.outcome.status), r.outcome.steps);
    print_verdicts(r.dir, r.verdicts);
  }
  print_verdicts("family", result.family_verdicts);
  std::cout << "artifacts: " << opts.output.string() << '\n';
  return kOk;
}

int cmd_sweep(const std::string& config, const std::string& output, int workers) {
  auto [cfg, text] = load(config);
  if (cfg.kind != ExperimentKind::Sweep) throw ConfigError("experiment.kind", "sweep needs kind: sweep");
  RunOptions opts;
  opts.output = output_dir(cfg, output);
  opts.workers = workers;
  opts.log = &std::cerr;
  const auto result = run_sweep(cfg, text, opts);
  std::cout << fmt::format("{:>8} {:>8} {:>8}  {:<16} {:>12}\n", "chi", "mass", "zeta", "status", "detect_t");
  for (const auto& c : result.cells) {
    std::cout << fmt::format("{:>8g} {:>8g} {:>8g}  {:<16} {:>12.4g}\n", c.chi, c.mass, c.zeta, c.status,
                             c.detection_time);
  }
  print_verdicts("sweep", {result.boundary});
  std::cout << "artifacts: " << opts.output.string() << '\n';
  return kOk;
}

int cmd_convergence(const std::string& config, const std::string& output) {
  auto [cfg, text] = load(config);
  if (cfg.kind != ExperimentKind::Convergence) {
    throw ConfigError("experiment.kind", "convergence needs kind: convergence");
  }
  RunOptions opts;
  opts.output = output_dir(cfg, output);
  opts.log = &std::cerr;
  const auto rep = convergence_study(cfg, text, opts);
  std::cout << fmt::format("probe time {:g}\n", rep.probe_time);
  for (std::size_t k = 0; k < rep.eps_distances.size(); ++k) {
    std::cout << fmt::format("  eps {:g} -> {:g}: L1 distance {:.6g}\n", rep.eps[k], rep.eps[k + 1],
                             rep.eps_distances[k]);
  }
  for (std::size_t j = 0; j < rep.h_errors.size(); ++j) {
    std::cout << fmt::format("  cells {}: L1 error vs finest {:.6g}\n", rep.cells[j], rep.h_errors[j]);
  }
  print_verdicts("conv", {rep.eps_verdict, rep.h_verdict});
  std::cout << "artifacts: " << opts.output.string() << '\n';
  return kOk;
}

int cmd_verify(const std::string& dir, bool strict) {
  const auto rep = verify_run_dir(dir);
  for (const auto& e : rep.entries) {
    std::cout << fmt::format("{:<14} {:<40} {:>4}{}\n", e.run, e.verdict.functional, e.verdict.pass ? "ok" : "FAIL",
                             e.matches_stored ? "" : "  (differs from stored verdict)");
  }
  std::cout << fmt::format("{} verdicts, {} failing, {} differing from stored\n", rep.entries.size(),
                           std::count_if(rep.entries.begin(), rep.entries.end(),
                                         [](const VerifyEntry& e) { return !e.verdict.pass; }),
                           rep.mismatches());
  if (strict && (!rep.all_pass() || rep.mismatches() > 0)) return kVerdict;
  return kOk;
}

int cmd_presets_list() {
  for (const auto& p : presets()) {
    const auto cfg = parse_config(p.text);
    std::cout << fmt::format("{:<20} {}\n", p.name, to_string(cfg.kind));
  }
  return kOk;
}

int cmd_presets_show(const std::string& name) {
  const auto p = find_preset(name);
  if (!p) throw ConfigError("<preset>", fmt::format("unknown preset '{}'", name));
  std::cout << p->text;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attraction-repulsion Keller-Segel laboratory"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  std::string config, output, run_dir, preset_name;
  int workers = 1;
  bool strict = false;
  bool seedless = true;

  auto* run = app.add_subcommand("run", "Run a single or eps-family experiment");
  run->add_option("config", config, "Config file or preset name")->required();
  run->add_option("--output", output, "Output directory");
  run->add_flag("--seedless", seedless, "Deterministic run (the only mode)");

  auto* sweep = app.add_subcommand("sweep", "Run a chi x mass sweep");
  sweep->add_option("config", config, "Config file or preset name")->required();
  sweep->add_option("--output", output, "Output directory");
  sweep->add_option("--workers", workers, "Concurrent sweep cells")->check(CLI::PositiveNumber);
  sweep->add_flag("--seedless", seedless, "Deterministic run (the only mode)");

  auto* conv = app.add_subcommand("convergence", "Eps and mesh convergence study");
  conv->add_option("config", config, "Config file or preset name")->required();
  conv->add_option("--output", output, "Output directory");
  conv->add_flag("--seedless", seedless, "Deterministic run (the only mode)");

  auto* verify = app.add_subcommand("verify", "Recompute verdicts from a run directory");
  verify->add_option("run-dir", run_dir, "Artifact directory")->required();
  verify->add_flag("--strict", strict, "Exit with 3 when any verdict fails");

  auto* pre = app.add_subcommand("presets", "Inspect built-in presets");
  pre->require_subcommand(1);
  auto* list = pre->add_subcommand("list", "List presets");
  auto* show = pre->add_subcommand("show", "Print a preset config");
  show->add_option("name", preset_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (run->parsed()) return cmd_run(config, output);
    if (sweep->parsed()) return cmd_sweep(config, output, workers);
    if (conv->parsed()) return cmd_convergence(config, output);
    if (verify->parsed()) return cmd_verify(run_dir, strict);
    if (list->parsed()) return cmd_presets_list();
    if (show->parsed()) return cmd_presets_show(preset_name);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const InvalidParameter& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolver;
  }
  return kOk;
}
