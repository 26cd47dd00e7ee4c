#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "arks/diagnostics.hpp"
#include "arks/harness/config.hpp"
#include "arks/stepper.hpp"

namespace arks::harness {

std::string_view version();

struct RunOptions {
  std::filesystem::path output;  ///< empty: keep results in memory only
  int workers = 1;               ///< sweep cells run concurrently on this many threads
  std::ostream* log = nullptr;   ///< one progress line per finished run
};

/// Everything needed to start one run at a given eps.
struct InitialData {
  State state;
  ScenarioConfig scenario_cfg;  ///< with n and m = ∫u_{0,ε}
  Scenario scenario = Scenario::Unclassified;
  DiagnosticsConfig diag;
  double v0_mass = 0.0;  ///< ∫v_{0,ε}
  double w0_mass = 0.0;
  double v0_norm = 0.0;  ///< ‖v0‖_{W^{1,r}} of the unmollified datum (τ = 1)
  double w0_norm = 0.0;
};

InitialData prepare_initial(const ExperimentConfig& cfg, double eps, const GridPtr& grid);

struct RunRecord {
  double eps = 0.0;
  std::string dir;     ///< relative to the experiment output directory
  RunOutcome outcome;  ///< series starts with the t = 0 record
  InitialData initial;
  std::vector<Verdict> verdicts;
};

struct ExperimentResult {
  std::string name;
  ExperimentKind kind = ExperimentKind::Single;
  std::vector<RunRecord> runs;
  std::vector<Verdict> family_verdicts;  ///< cross-eps checks (eps-family only)

  bool all_pass() const;
};

/// Single or eps-family experiment. Writes, per run, series.csv and
/// verdicts.json, plus manifest.json (and family verdicts) at the top.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::string_view config_text, const RunOptions& opts);

/// Runs one configuration at one eps (no files written).
RunRecord run_single(const ExperimentConfig& cfg, double eps, const GridPtr& grid);

/// Per-run verdicts: the scenario checks plus the τ = 1 chemical continuity probe.
std::vector<Verdict> run_verdicts(std::span<const DiagnosticsRecord> series, const ExperimentConfig& cfg,
                                  const InitialData& init);

/// Cross-eps uniformity verdicts for an eps family.
std::vector<Verdict> family_verdicts(const std::vector<std::vector<DiagnosticsRecord>>& family,
                                     const ExperimentConfig& cfg, const ScenarioConfig& scenario_cfg,
                                     Scenario scenario);

// ---------------------------------------------------------------------------

struct SweepCell {
  std::size_t index = 0;
  double chi = 0.0;
  double mass = 0.0;
  double zeta = 0.0;
  std::string status;  ///< RunStatus name, or "Error"
  double detection_time = 0.0;
  double linf_max = 0.0;
  long steps = 0;
  std::string error;
};

struct SweepResult {
  std::vector<double> chi;
  std::vector<double> mass;
  std::vector<SweepCell> cells;  ///< index = ichi·|mass| + imass
  Verdict boundary;              ///< blow-up set is upward closed in m for every χ
};

SweepResult run_sweep(const ExperimentConfig& cfg, std::string_view config_text, const RunOptions& opts);

/// Monotone blow-up boundary check on a completed sweep grid.
Verdict sweep_boundary_verdict(const std::vector<double>& chi, const std::vector<double>& mass,
                               const std::vector<SweepCell>& cells);

// ---------------------------------------------------------------------------

struct ConvergenceReport {
  double probe_time = 0.0;
  std::vector<double> eps;
  std::vector<double> eps_distances;  ///< ‖u_{ε_k}(t*) − u_{ε_{k+1}}(t*)‖_{L¹}
  std::vector<double> cauchy_ratios;  ///< consecutive distance ratios
  std::vector<int> cells;             ///< first-axis cell counts of the h ladder
  std::vector<double> h_errors;       ///< L¹ distance to the finest grid, block averaged
  Verdict eps_verdict;
  Verdict h_verdict;
};

ConvergenceReport convergence_study(const ExperimentConfig& cfg, std::string_view config_text,
                                    const RunOptions& opts);

/// Volume-weighted average of a fine field onto a grid with `factor` times
/// fewer cells per axis.
Field block_average(const Field& fine, const GridPtr& coarse);

double l1_distance(const Field& a, const Field& b);

// ---------------------------------------------------------------------------

struct VerifyEntry {
  std::string run;  ///< run directory or "family"
  Verdict verdict;
  bool matches_stored = true;
};

struct VerifyReport {
  std::vector<VerifyEntry> entries;
  bool all_pass() const;
  int mismatches() const;
};

/// Recomputes verdicts from the stored CSV series and manifest. Throws
/// ConfigError when the manifest is missing or unreadable.
VerifyReport verify_run_dir(const std::filesystem::path& dir);

}  // namespace arks::harness
