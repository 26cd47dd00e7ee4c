// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "arks/elliptic.hpp"
#include "arks/harness/config.hpp"
#include "arks/harness/experiment.hpp"
#include "arks/harness/presets.hpp"
#include "arks/semigroup.hpp"
#include "arks/stepper.hpp"

using namespace arks;
using namespace arks::harness;

namespace {

// Pinned tolerances.
constexpr double kEquilibriumSup = 1e-12;
constexpr long kEquilibriumSteps = 1000;
constexpr double kMassRel = 1e-11;
constexpr long kMassSteps = 10000;
constexpr double kOracleSup = 1e-3;
constexpr double kOracleTime = 0.1;
constexpr double kOracleDt = 1e-5;
constexpr double kCgSup = 1e-8;
constexpr int kCgSources = 100;
constexpr double kRateRel = 0.10;
constexpr double kEnvelopeRatio = 10.0;
constexpr double kExponentSlack = 0.15;
constexpr double kTaxisTheta = 0.1;
constexpr double kFamilyFactor = 2.0;
constexpr double kChemFraction = 0.1;
constexpr double kRefineGrowth = 4.0;
constexpr double kRefineProbe = 0.1;
constexpr double kLqFactor = 2.0;
constexpr double kProbeTime = 0.1;
const std::vector<double> kEpsLadder{1e-2, 2.5e-3, 6.25e-4};

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

ExperimentConfig preset(std::string_view name) { return parse_config(find_preset(name)->text); }

const Verdict* find(const std::vector<Verdict>& vs, std::string_view name) {
  for (const auto& v : vs) {
    if (v.functional == name) return &v;
  }
  return nullptr;
}

double metric(const Verdict& v, const std::string& key) {
  auto it = v.metrics.find(key);
  return it == v.metrics.end() ? std::nan("") : it->second;
}

/// Copy of a pure-attraction config at (χ, m), atoms rescaled to the target mass.
ExperimentConfig at(ExperimentConfig cfg, double chi, double mass) {
  const double base = cfg.measure.total_mass(cfg.grid.build());
  cfg.model.chi = chi;
  for (auto& a : cfg.measure.atoms) a.mass *= mass / base;
  if (cfg.measure.density) cfg.measure.density->amplitude *= mass / base;
  cfg.scenario.m = mass;
  return cfg;
}

// ---------------------------------------------------------------------------

void conservation_and_equilibrium() {
  std::string detail;
  bool pass = true;

  double worst_eq = 0.0;
  auto grid = share(Grid::rectangle(1, 1, 128, 128));
  for (int tau : {0, 1}) {
    ModelParams p{.chi = 1, .xi = 2, .tau = tau};
    StepControl ctrl;
    Stepper stepper(p, grid, ctrl);
    State s = homogeneous_equilibrium(grid, p, 5.0);
    const State eq = s;
    for (long k = 0; k < kEquilibriumSteps; ++k) {
      auto o = stepper.step(s, ctrl.dt_max);
      if (!o.accepted) {
        pass = false;
        break;
      }
      for (std::size_t i = 0; i < eq.u.size(); ++i) {
        worst_eq = std::max({worst_eq, std::abs(o.state.u[i] - eq.u[i]), std::abs(o.state.v[i] - eq.v[i]),
                             std::abs(o.state.w[i] - eq.w[i])});
      }
      s = std::move(o.state);
    }
  }
  pass = pass && worst_eq <= kEquilibriumSup;
  detail += fmt::format("equilibrium drift {:.2e} (<= {:.0e}) over {} steps", worst_eq, kEquilibriumSup,
                        kEquilibriumSteps);

  for (const auto& pr : presets()) {
    auto cfg = parse_config(pr.text);
    if (cfg.kind == ExperimentKind::Sweep) {
      cfg = at(cfg, *std::max_element(cfg.sweep.chi.begin(), cfg.sweep.chi.end()),
               *std::max_element(cfg.sweep.mass.begin(), cfg.sweep.mass.end()));
    }
    const auto g = cfg.grid.build();
    const auto init = prepare_initial(cfg, cfg.eps.back(), g);
    Stepper stepper(cfg.model, g, cfg.control, cfg.elliptic);
    State s = init.state;
    const double m = integrate(s.u);
    double worst = 0.0, dt = std::min(cfg.control.dt_max, 1e-5);
    long accepted = 0;
    bool stalled = false;
    while (accepted < kMassSteps) {
      auto o = stepper.step(s, dt);
      if (!o.accepted) {
        if (o.dt_admissible < cfg.control.dt_min) {
          stalled = true;
          break;
        }
        dt = o.dt_admissible;
        continue;
      }
      s = std::move(o.state);
      ++accepted;
      worst = std::max(worst, std::abs(integrate(s.u) - m) / m);
    }
    const bool ok = !stalled && worst <= kMassRel;
    pass = pass && ok;
    detail += fmt::format("; {} mass drift {:.1e}{}", pr.name, worst, stalled ? " (stalled)" : "");
  }
  report("conservation_equilibrium", pass, detail);
}

void oracle_equivalence() {
  auto cfg = preset("s2-smoke");
  cfg.model.chi = 0.0;
  cfg.model.xi = 0.0;
  const auto g = cfg.grid.build();
  const auto init = prepare_initial(cfg, cfg.eps.front(), g);
  Stepper stepper(cfg.model, g, cfg.control);
  State s = init.state;
  const long steps = std::lround(kOracleTime / kOracleDt);
  bool ok = true;
  for (long k = 0; k < steps && ok; ++k) {
    auto o = stepper.step(s, kOracleDt);
    ok = o.accepted;
    if (ok) s = std::move(o.state);
  }
  const Field oracle = SemigroupPlan(g).apply(init.state.u, kOracleTime);
  double heat_err = 0.0;
  for (std::size_t i = 0; i < oracle.size(); ++i) heat_err = std::max(heat_err, std::abs(s.u[i] - oracle[i]));

  HelmholtzSolver spectral(g, EllipticMethod::SpectralCosine);
  HelmholtzSolver cg(g, EllipticMethod::ConjugateGradient);
  std::uint64_t state = 0x5eed;
  auto next = [&] {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state >> 11) * 0x1.0p-53;
  };
  double cg_err = 0.0;
  for (int k = 0; k < kCgSources; ++k) {
    Field u(g);
    for (auto& x : u.values) x = next();
    const auto a = spectral.solve(cfg.model.beta, cfg.model.alpha, u);
    const auto b = cg.solve(cfg.model.beta, cfg.model.alpha, u);
    for (std::size_t i = 0; i < a.size(); ++i) cg_err = std::max(cg_err, std::abs(a[i] - b[i]));
  }
  report("oracle_equivalence", ok && heat_err <= kOracleSup && cg_err <= kCgSup,
         fmt::format("heat vs semigroup sup {:.2e} (<= {:.0e}, 128x128, dt {:.0e}, T {}); CG vs spectral sup {:.2e} "
                     "(<= {:.0e}, {} sources)",
                     heat_err, kOracleSup, kOracleDt, kOracleTime, cg_err, kCgSup, kCgSources));
}

void smoothing_rates() {
  const double r1 = measure_smoothing_rate(SemigroupPlan(share(Grid::interval(1.0, 1024))), 1.0, kInfinity);
  const double r2 = measure_smoothing_rate(SemigroupPlan(share(Grid::rectangle(1, 1, 128, 128))), 1.0, kInfinity);
  const bool pass = std::abs(r1 + 0.5) <= kRateRel * 0.5 && std::abs(r2 + 1.0) <= kRateRel * 1.0;
  report("smoothing_rates", pass, fmt::format("L1->Linf exponent n=1 {:.4f} (-0.5), n=2 {:.4f} (-1)", r1, r2));
}

void s2_decay() {
  const auto cfg = preset("s2-smoke");
  const auto rec = run_single(cfg, 1e-3, cfg.grid.build());
  bool pass = rec.initial.scenario == Scenario::S2 && rec.outcome.status == RunStatus::Completed;
  const int n = cfg.scenario.n;
  std::string detail = fmt::format("scenario {}, status {}", to_string(rec.initial.scenario),
                                   to_string(rec.outcome.status));
  for (double p : {2.0, 2.5}) {
    const double claimed = n * (p - 1.0) / 2.0;
    const auto ts = extract(rec.outcome.series, [p](const DiagnosticsRecord& r) { return r.moment(p); });
    const auto v = check_decay(fmt::format("lp_u_{}", p), ts, claimed,
                               {.t_lo = 1e-4, .t_hi = 1e-1, .slack = kExponentSlack, .ratio_limit = kEnvelopeRatio});
    const double ratio = metric(v, "envelope_ratio");
    const bool diverging = metric(v, "monotone_divergence") != 0.0;
    const bool exponent_ok = v.fitted_exponent >= -claimed - kExponentSlack;
    const bool ok = ratio <= kEnvelopeRatio && !diverging && exponent_ok;
    pass = pass && ok;
    detail += fmt::format("; p={} envelope ratio {:.3g} (<= {}), divergence {}, exponent {:.3f} (>= {:.3f})", p, ratio,
                          kEnvelopeRatio, diverging ? "yes" : "no", v.fitted_exponent, -claimed - kExponentSlack);
  }
  report("s2_decay", pass, detail);
}

void s1_energy() {
  const auto cfg = preset("s1-smoke");
  const auto rec = run_single(cfg, cfg.eps.front(), cfg.grid.build());
  const auto* env = find(rec.verdicts, "energy_F_envelope");
  const auto* fisher = find(rec.verdicts, "fisher_dampened");
  const auto* grad4 = find(rec.verdicts, "grad_z_l4_dampened");
  const bool have = env && fisher && grad4;
  const double ratio = have ? metric(*env, "envelope_ratio") : std::nan("");
  const bool diverging = have && metric(*env, "monotone_divergence") != 0.0;
  const bool pass = have && rec.initial.scenario == Scenario::S1 && rec.outcome.status == RunStatus::Completed &&
                    ratio <= kEnvelopeRatio && !diverging && fisher->pass && !fisher->vacuous && grad4->pass;
  report("s1_energy", pass,
         have ? fmt::format("lambda {:.4f}; t^lambda energy_F ratio {:.3g} (<= {}), divergence {}; fisher increment "
                            "ratio {:.3g}; |grad z|^4 increment ratio {:.3g} (< 1)",
                            admissible_lambda(cfg.scenario.r), ratio, kEnvelopeRatio, diverging ? "yes" : "no",
                            fisher->fitted_exponent, grad4->fitted_exponent)
              : "verdicts missing");
}

void continuity_at_zero() {
  const auto cfg = preset("continuity-ladder");
  const auto res = run_experiment(cfg, find_preset("continuity-ladder")->text, {});
  bool pass = res.runs.size() == kEpsLadder.size();
  double worst_theta = kInfinity, worst_probe = 0.0, worst_family = 0.0;
  int weak_fail = 0;
  for (std::size_t k = 0; k < res.runs.size(); ++k) {
    pass = pass && res.runs[k].eps == kEpsLadder[k];
    const auto& vs = res.runs[k].verdicts;
    const auto* taxis = find(vs, "taxis_integral");
    pass = pass && taxis && !taxis->vacuous && taxis->fitted_exponent >= kTaxisTheta;
    if (taxis) worst_theta = std::min(worst_theta, taxis->fitted_exponent);
    for (const auto f : cfg.test_functions) {
      const auto* w = find(vs, "weak_continuity_" + std::string(to_string(f)));
      if (!w || !w->pass) ++weak_fail;
    }
    const auto* probe = find(vs, "w1r_dv_probe");
    const bool probe_ok = probe && probe->fitted_exponent <= kChemFraction * metric(*probe, "initial_norm");
    pass = pass && probe_ok;
    if (probe) worst_probe = std::max(worst_probe, probe->fitted_exponent / metric(*probe, "initial_norm"));
  }
  for (const auto f : cfg.test_functions) {
    const auto* u = find(res.family_verdicts, "eps_uniform_weak_continuity_" + std::string(to_string(f)));
    pass = pass && u && u->fitted_exponent <= kFamilyFactor;
    if (u) worst_family = std::max(worst_family, u->fitted_exponent);
  }
  pass = pass && weak_fail == 0;
  report("continuity_at_zero", pass,
         fmt::format("min taxis exponent {:.3f} (>= {}); weak-continuity failures {}; eps-family max/min {:.3f} "
                     "(<= {}); worst |v(1e-3) - v0|/|v0| {:.3f} (<= {})",
                     worst_theta, kTaxisTheta, weak_fail, worst_family, kFamilyFactor, worst_probe, kChemFraction));
}

void dichotomy() {
  const auto base = preset("dichotomy-sweep");
  auto attract = [&](double chi, double m, double t_end, int cells, double threshold) {
    auto cfg = at(base, chi, m);
    cfg.t_end = t_end;
    cfg.grid.cells = {cells, cells};
    if (threshold > 0) cfg.control.blowup_threshold = threshold;
    return cfg;
  };

  auto sub_cfg = attract(1.0, 10.0, 1.0, 64, 0);
  const auto sub = run_single(sub_cfg, 1e-3, sub_cfg.grid.build());
  double sub_linf = 0.0;
  for (const auto& r : sub.outcome.series) sub_linf = std::max(sub_linf, r.linf_u);

  auto super_cfg = attract(1.0, 40.0, 1.0, 128, 0);
  const auto super = run_single(super_cfg, 1e-3, super_cfg.grid.build());

  double linf[2];
  for (int j = 0; j < 2; ++j) {
    auto cfg = attract(1.0, 40.0, kRefineProbe, 64 << j, 1e300);
    linf[j] = run_single(cfg, 1e-3, cfg.grid.build()).outcome.final_state.u.max();
  }
  const double growth = linf[1] / linf[0];

  auto rep_cfg = attract(1.0, 40.0, 1.0, 128, 0);
  rep_cfg.model.xi = 1.5;
  const auto rep = run_single(rep_cfg, 1e-3, rep_cfg.grid.build());

  const bool pass = sub.outcome.status == RunStatus::Completed && sub_linf < sub.outcome.blowup_threshold &&
                    super.outcome.status == RunStatus::BlowupDetected && growth >= kRefineGrowth &&
                    derive(rep_cfg.model).zeta >= 0 && rep.outcome.status == RunStatus::Completed;
  report("dichotomy", pass,
         fmt::format("chi*m=10: {} (max Linf {:.4g}); chi*m=40: {} at t={:.4g}; Linf(t={}) 64->128 grows x{:.3f} "
                     "(>= {}); xi=1.5 (zeta {:.2g}): {}",
                     to_string(sub.outcome.status), sub_linf, to_string(super.outcome.status),
                     super.outcome.detection_time, kRefineProbe, growth, kRefineGrowth, derive(rep_cfg.model).zeta,
                     to_string(rep.outcome.status)));
}

void s3_radial() {
  const auto cfg = preset("s3-radial");
  const auto rec = run_single(cfg, cfg.eps.front(), cfg.grid.build());
  const double q = cfg.scenario.u_exponent;
  const auto& series = rec.outcome.series;
  const double initial = std::pow(series.front().moment(q), 1.0 / q);
  double worst = 0.0;
  for (const auto& r : series) {
    if (r.t > 0.0 && r.t <= 1.0) worst = std::max(worst, std::pow(r.moment(q), 1.0 / q) / initial);
  }
  const bool pass = rec.initial.scenario == Scenario::S3 && rec.outcome.status == RunStatus::Completed &&
                    worst <= kLqFactor;
  report("s3_radial", pass,
         fmt::format("scenario {}, status {}, max ||u||_{} / initial {:.4f} (<= {})", to_string(rec.initial.scenario),
                     to_string(rec.outcome.status), q, worst, kLqFactor));
}

void eps_cauchy() {
  bool pass = true;
  std::string detail;
  for (const char* name : {"s1-smoke", "s2-smoke"}) {
    auto cfg = preset(name);
    cfg.t_end = kProbeTime;
    const auto g = cfg.grid.build();
    std::vector<Field> u;
    for (double eps : kEpsLadder) {
      const auto rec = run_single(cfg, eps, g);
      pass = pass && rec.outcome.status == RunStatus::Completed;
      u.push_back(rec.outcome.final_state.u);
    }
    std::vector<double> d;
    for (std::size_t k = 0; k + 1 < u.size(); ++k) d.push_back(l1_distance(u[k], u[k + 1]));
    for (std::size_t k = 0; k + 1 < d.size(); ++k) pass = pass && d[k + 1] < d[k];
    detail += fmt::format("{}{}: {:.4g}", detail.empty() ? "" : "; ", name, fmt::join(d, " > "));
  }
  report("eps_cauchy", pass, fmt::format("L1 distances at t={} along eps {}: {}", kProbeTime,
                                         fmt::join(kEpsLadder, ","), detail));
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void()>>> criteria{
      {"conservation_equilibrium", conservation_and_equilibrium},
      {"oracle_equivalence", oracle_equivalence},
      {"smoothing_rates", smoothing_rates},
      {"s2_decay", s2_decay},
      {"s1_energy", s1_energy},
      {"continuity_at_zero", continuity_at_zero},
      {"dichotomy", dichotomy},
      {"s3_radial", s3_radial},
      {"eps_cauchy", eps_cauchy},
  };
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn();
    } catch (const std::exception& e) {
      report(name, false, std::string("exception: ") + e.what());
    }
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    std::fprintf(stderr, "  (%s took %.1f s)\n", name, dt.count());
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
