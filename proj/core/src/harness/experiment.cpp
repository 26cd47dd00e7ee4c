#include "arks/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "arks/error.hpp"
#include "arks/field_io.hpp"
#include "arks/initial_data.hpp"
#include "arks/semigroup.hpp"
#include "json.hpp"

#ifndef ARKS_VERSION
#define ARKS_VERSION "0.0.0"
#endif

namespace arks::harness {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view version() { return ARKS_VERSION; }

namespace {

constexpr double kChemProbeTime = 1e-3;
constexpr double kChemProbeFraction = 0.1;
constexpr double kFamilyFactor = 2.0;

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double to_double(const json& j) { return j.is_number() ? j.get<double>() : std::numeric_limits<double>::quiet_NaN(); }

json to_json(const Verdict& v) {
  json metrics = json::object();
  for (const auto& [k, x] : v.metrics) metrics[k] = number(x);
  return json{{"functional", v.functional}, {"t_lo", number(v.t_lo)},     {"t_hi", number(v.t_hi)},
              {"fitted_exponent", number(v.fitted_exponent)},             {"bound", number(v.bound)},
              {"pass", v.pass},             {"vacuous", v.vacuous},       {"metrics", metrics},
              {"note", v.note}};
}

Verdict verdict_from_json(const json& j) {
  Verdict v;
  v.functional = j.at("functional").get<std::string>();
  v.t_lo = to_double(j.at("t_lo"));
  v.t_hi = to_double(j.at("t_hi"));
  v.fitted_exponent = to_double(j.at("fitted_exponent"));
  v.bound = to_double(j.at("bound"));
  v.pass = j.at("pass").get<bool>();
  v.vacuous = j.value("vacuous", false);
  const json metrics = j.value("metrics", json::object());
  for (const auto& [k, x] : metrics.items()) v.metrics[k] = to_double(x);
  v.note = j.value("note", "");
  return v;
}

json to_json(const std::vector<Verdict>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(to_json(v));
  return a;
}

bool all_pass(const std::vector<Verdict>& vs) {
  return std::all_of(vs.begin(), vs.end(), [](const Verdict& v) { return v.pass; });
}

json density_json(const std::optional<DensitySpec>& d) {
  if (!d) return nullptr;
  return json{{"kind", to_string(d->kind)},
              {"amplitude", d->amplitude},
              {"center", {d->center[0], d->center[1]}},
              {"width", d->width}};
}

json config_json(const ExperimentConfig& cfg) {
  json atoms = json::array();
  for (const auto& a : cfg.measure.atoms) atoms.push_back({{"x", a.location[0]}, {"y", a.location[1]}, {"mass", a.mass}});
  json tests = json::array();
  for (auto f : cfg.test_functions) tests.push_back(to_string(f));
  const auto& c = cfg.control;
  return json{
      {"experiment", {{"name", cfg.name}, {"kind", to_string(cfg.kind)}, {"output", cfg.output}}},
      {"model",
       {{"chi", cfg.model.chi}, {"xi", cfg.model.xi}, {"alpha", cfg.model.alpha}, {"beta", cfg.model.beta},
        {"gamma", cfg.model.gamma}, {"delta", cfg.model.delta}, {"tau", cfg.model.tau}}},
      {"scenario",
       {{"n", cfg.scenario.n}, {"m", cfg.scenario.m}, {"c_s2", cfg.scenario.c_s2}, {"r", cfg.scenario.r},
        {"u_exponent", cfg.scenario.u_exponent}}},
      {"grid",
       {{"geometry", to_string(cfg.grid.geometry)},
        {"extent", {cfg.grid.extent[0], cfg.grid.extent[1]}},
        {"cells", {cfg.grid.cells[0], cfg.grid.cells[1]}}}},
      {"initial",
       {{"atoms", atoms}, {"density", density_json(cfg.measure.density)}, {"v0", density_json(cfg.v0)},
        {"w0", density_json(cfg.w0)}, {"eps", cfg.eps}}},
      {"control",
       {{"formulation", to_string(c.formulation)}, {"dt_init", c.dt_init}, {"dt_min", c.dt_min},
        {"dt_max", c.dt_max}, {"cfl_safety", c.cfl_safety}, {"growth", c.growth},
        {"blowup_threshold", c.blowup_threshold}, {"blowup_factor", c.blowup_factor}, {"t_end", cfg.t_end},
        {"ladder_levels", cfg.ladder.levels}, {"ladder_uniform", cfg.ladder.uniform},
        {"elliptic", cfg.elliptic ? json(to_string(*cfg.elliptic)) : json(nullptr)}}},
      {"diagnostics", {{"p_values", cfg.p_values}, {"test_functions", tests}, {"snapshots", cfg.snapshots}}},
      {"sweep", {{"chi", cfg.sweep.chi}, {"mass", cfg.sweep.mass}}},
      {"convergence",
       {{"probe_time", cfg.convergence.probe_time}, {"refinements", cfg.convergence.refinements}}},
  };
}

json grid_json(const Grid& g) {
  return json{{"geometry", to_string(g.geometry())},
              {"cells", {g.nx(), g.ny()}},
              {"extent", {g.extents()[0], g.extents()[1]}},
              {"hash", fmt::format("{:016x}", g.hash())}};
}

json manifest_base(const ExperimentConfig& cfg, std::string_view config_text, const Grid& grid) {
  const auto d = derive(cfg.model);
  return json{{"format", "arks-manifest/1"},
              {"version", version()},
              {"name", cfg.name},
              {"kind", to_string(cfg.kind)},
              {"config_text", std::string(config_text)},
              {"config", config_json(cfg)},
              {"grid", grid_json(grid)},
              {"zeta", d.zeta},
              {"sigma", d.sigma}};
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.filename().string(), fmt::format("cannot read {}", path.string()));
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.filename().string(), e.what());
  }
}

void write_series(const fs::path& path, std::span<const DiagnosticsRecord> series) {
  std::ostringstream ss;
  write_series_csv(ss, series);
  write_text(path, ss.str());
}

std::vector<DiagnosticsRecord> read_series(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.filename().string(), fmt::format("cannot read {}", path.string()));
  return read_series_csv(in);
}

void log_line(const RunOptions& opts, const std::string& line) {
  static std::mutex mutex;
  if (!opts.log) return;
  std::lock_guard lock(mutex);
  *opts.log << line << '\n' << std::flush;
}

std::vector<double> decay_exponents(const ScenarioConfig& sc) {
  const double q = sc.u_exponent;
  std::vector<double> out;
  for (double p : {2.0, 2.5, static_cast<double>(sc.n), 3.0 * q / (4.0 * q - 3.0)}) {
    if (p <= 1.0) continue;
    if (std::none_of(out.begin(), out.end(), [&](double x) { return std::abs(x - p) < 1e-12; })) out.push_back(p);
  }
  return out;
}

Verdict chemical_probe(std::string name, std::span<const DiagnosticsRecord> series, double norm,
                       double DiagnosticsRecord::*member) {
  Verdict v;
  v.functional = std::move(name);
  v.bound = kChemProbeFraction * norm;
  v.metrics["initial_norm"] = norm;
  const DiagnosticsRecord* probe = nullptr;
  for (const auto& r : series) {
    if (r.t > 0.0 && r.t <= kChemProbeTime * (1.0 + 1e-9) && (!probe || r.t > probe->t)) probe = &r;
  }
  if (!probe) {
    v.note = "no sample in (0, 1e-3]";
    return v;
  }
  v.t_lo = v.t_hi = probe->t;
  v.fitted_exponent = probe->*member;
  v.pass = v.fitted_exponent <= v.bound;
  return v;
}

}  // namespace

bool ExperimentResult::all_pass() const {
  if (!harness::all_pass(family_verdicts)) return false;
  return std::all_of(runs.begin(), runs.end(), [](const RunRecord& r) { return harness::all_pass(r.verdicts); });
}

// ---------------------------------------------------------------------------

InitialData prepare_initial(const ExperimentConfig& cfg, double eps, const GridPtr& grid) {
  InitialData init;
  const SemigroupPlan plan(grid);
  Field u0 = mollify_measure(cfg.measure, eps, plan);

  Field v(grid), w(grid);
  if (cfg.model.tau == 1) {
    ChemicalInitialData cd{cfg.v0 ? sample_density(*cfg.v0, grid) : Field(grid),
                           cfg.w0 ? sample_density(*cfg.w0, grid) : Field(grid)};
    init.v0_norm = w1r_norm(cd.v0, cfg.scenario.r);
    init.w0_norm = w1r_norm(cd.w0, cfg.scenario.r);
    std::tie(v, w) = mollify_chemicals(cd, eps, cfg.model, plan);
  } else {
    const Stepper stepper(cfg.model, grid, cfg.control, cfg.elliptic);
    std::tie(v, w) = stepper.elliptic_chemicals(u0);
  }
  init.v0_mass = integrate(v);
  init.w0_mass = integrate(w);

  init.scenario_cfg = cfg.scenario;
  init.scenario_cfg.n = grid->dimension();
  init.scenario_cfg.m = integrate(u0);
  init.scenario = classify_scenario(cfg.model, init.scenario_cfg, cfg.density_only());

  init.diag = make_diagnostics_config(cfg.model, init.scenario_cfg);
  if (!cfg.p_values.empty()) init.diag.p_values = cfg.p_values;
  init.diag.test_functions = cfg.test_functions;
  if (cfg.model.tau == 1) {
    init.diag.v_ref = v;
    init.diag.w_ref = w;
  }
  init.state = make_state(0.0, std::move(u0), std::move(v), std::move(w), cfg.model);
  return init;
}

std::vector<Verdict> run_verdicts(std::span<const DiagnosticsRecord> series, const ExperimentConfig& cfg,
                                  const InitialData& init) {
  auto out = evaluate_run(series, cfg.model, init.scenario_cfg, init.scenario, init.v0_mass, init.w0_mass);
  if (cfg.model.tau == 1) {
    if (init.v0_norm > 0.0) out.push_back(chemical_probe("w1r_dv_probe", series, init.v0_norm, &DiagnosticsRecord::w1r_dv));
    if (init.w0_norm > 0.0) out.push_back(chemical_probe("w1r_dw_probe", series, init.w0_norm, &DiagnosticsRecord::w1r_dw));
  }
  return out;
}

std::vector<Verdict> family_verdicts(const std::vector<std::vector<DiagnosticsRecord>>& family,
                                     const ExperimentConfig& cfg, const ScenarioConfig& scenario_cfg,
                                     Scenario scenario) {
  std::vector<Verdict> out;
  if (family.size() < 2) return out;
  const VerdictConfig vc;
  const double floor = vc.mass_rel_tol * scenario_cfg.m;

  for (TestFunction f : cfg.test_functions) {
    const std::string name(to_string(f));
    std::vector<TimeSeries> devs;
    for (const auto& series : family) {
      if (series.empty() || series.front().t != 0.0) continue;
      const double ref = series.front().pairing(name);
      TimeSeries ts;
      for (const auto& r : series) {
        if (r.t < vc.small_t.t_lo * (1.0 - 1e-9) || r.t > vc.small_t.t_hi * (1.0 + 1e-9)) continue;
        ts.t.push_back(r.t);
        ts.value.push_back(std::abs(r.pairing(name) - ref));
      }
      devs.push_back(std::move(ts));
    }
    out.push_back(check_family_uniformity("eps_uniform_weak_continuity_" + name, devs, kFamilyFactor, floor));
  }

  auto envelope = [&](std::string name, double claimed, auto get) {
    std::vector<TimeSeries> sup;
    for (const auto& series : family) {
      double mx = 0.0;
      for (const auto& r : series) {
        if (r.t < vc.small_t.t_lo * (1.0 - 1e-9) || r.t > vc.small_t.t_hi * (1.0 + 1e-9)) continue;
        mx = std::max(mx, std::pow(r.t, claimed) * get(r));
      }
      sup.push_back(TimeSeries{{1.0}, {mx}});
    }
    Verdict v = check_family_uniformity(std::move(name), sup, kFamilyFactor, 0.0);
    v.t_lo = vc.small_t.t_lo;
    v.t_hi = vc.small_t.t_hi;
    out.push_back(v);
  };
  if (scenario == Scenario::S1) {
    envelope("eps_uniform_energy_F_envelope", admissible_lambda(scenario_cfg.r),
             [](const DiagnosticsRecord& r) { return r.energy_F; });
  } else if (scenario == Scenario::S2 || scenario == Scenario::S3) {
    const double n = scenario_cfg.n;
    for (double p : decay_exponents(scenario_cfg)) {
      if (std::isnan(family.front().front().moment(p))) continue;
      envelope(fmt::format("eps_uniform_lp_u_{}_envelope", p), n * (p - 1.0) / 2.0,
               [p](const DiagnosticsRecord& r) { return r.moment(p); });
    }
  }
  return out;
}

RunRecord run_single(const ExperimentConfig& cfg, double eps, const GridPtr& grid) {
  RunRecord rec;
  rec.eps = eps;
  rec.initial = prepare_initial(cfg, eps, grid);
  const auto samples = geometric_ladder(cfg.t_end, cfg.ladder.levels, cfg.ladder.uniform);
  rec.outcome = run(rec.initial.state, cfg.model, cfg.control, cfg.t_end, samples, rec.initial.diag, {},
                    cfg.elliptic);
  rec.outcome.series.insert(rec.outcome.series.begin(), record(rec.initial.state, rec.initial.diag));
  rec.verdicts = run_verdicts(rec.outcome.series, cfg, rec.initial);
  return rec;
}

namespace {

json run_entry(const RunRecord& r) {
  return json{{"eps", r.eps},
              {"dir", r.dir},
              {"status", to_string(r.outcome.status)},
              {"scenario", to_string(r.initial.scenario)},
              {"mass", r.initial.scenario_cfg.m},
              {"v0_mass", r.initial.v0_mass},
              {"w0_mass", r.initial.w0_mass},
              {"v0_norm", r.initial.v0_norm},
              {"w0_norm", r.initial.w0_norm},
              {"steps", r.outcome.steps},
              {"rejected", r.outcome.rejected},
              {"detection_time", r.outcome.detection_time},
              {"blowup_threshold", r.outcome.blowup_threshold},
              {"max_clamp", r.outcome.max_clamp}};
}

void write_run(const fs::path& dir, const RunRecord& r, bool snapshots) {
  write_series(dir / "series.csv", r.outcome.series);
  write_json(dir / "verdicts.json", json{{"eps", r.eps},
                                         {"status", to_string(r.outcome.status)},
                                         {"scenario", to_string(r.initial.scenario)},
                                         {"all_pass", all_pass(r.verdicts)},
                                         {"verdicts", to_json(r.verdicts)}});
  if (snapshots) {
    save_field(dir / "u_final.bin", r.outcome.final_state.u);
    save_field(dir / "v_final.bin", r.outcome.final_state.v);
    save_field(dir / "w_final.bin", r.outcome.final_state.w);
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::string_view config_text, const RunOptions& opts) {
  if (cfg.kind != ExperimentKind::Single && cfg.kind != ExperimentKind::EpsFamily) {
    throw MisuseError("run_experiment handles single and eps-family experiments");
  }
  const GridPtr grid = cfg.grid.build();
  ExperimentResult result;
  result.name = cfg.name;
  result.kind = cfg.kind;

  const std::vector<double> eps_list =
      cfg.kind == ExperimentKind::Single ? std::vector<double>{cfg.eps.front()} : cfg.eps;
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    RunRecord r = run_single(cfg, eps_list[k], grid);
    r.dir = cfg.kind == ExperimentKind::Single ? "." : fmt::format("eps_{}", k);
    log_line(opts, fmt::format("{} eps={:g}: {} after {} steps, verdicts {}", cfg.name, r.eps,
                               to_string(r.outcome.status), r.outcome.steps, all_pass(r.verdicts) ? "pass" : "FAIL"));
    result.runs.push_back(std::move(r));
  }
  if (cfg.kind == ExperimentKind::EpsFamily) {
    std::vector<std::vector<DiagnosticsRecord>> family;
    for (const auto& r : result.runs) family.push_back(r.outcome.series);
    const auto& first = result.runs.front().initial;
    result.family_verdicts = family_verdicts(family, cfg, first.scenario_cfg, first.scenario);
  }

  if (!opts.output.empty()) {
    json manifest = manifest_base(cfg, config_text, *grid);
    json runs = json::array();
    for (const auto& r : result.runs) {
      write_run(opts.output / r.dir, r, cfg.snapshots);
      runs.push_back(run_entry(r));
    }
    manifest["runs"] = runs;
    if (cfg.kind == ExperimentKind::EpsFamily) {
      write_json(opts.output / "family_verdicts.json",
                 json{{"all_pass", all_pass(result.family_verdicts)}, {"verdicts", to_json(result.family_verdicts)}});
    }
    write_json(opts.output / "manifest.json", manifest);
  }
  return result;
}

// ---------------------------------------------------------------------------

Verdict sweep_boundary_verdict(const std::vector<double>& chi, const std::vector<double>& mass,
                               const std::vector<SweepCell>& cells) {
  Verdict v;
  v.functional = "sweep_monotone_boundary";
  v.bound = 0.0;
  int violations = 0;
  int errors = 0;
  std::vector<std::size_t> order(mass.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return mass[a] < mass[b]; });
  for (std::size_t i = 0; i < chi.size(); ++i) {
    bool blown = false;
    for (std::size_t j : order) {
      const SweepCell& c = cells[i * mass.size() + j];
      if (c.status == "Error") {
        ++errors;
        continue;
      }
      const bool b = c.status == "BlowupDetected";
      if (blown && !b) ++violations;
      blown = blown || b;
    }
  }
  v.fitted_exponent = violations;
  v.metrics["error_cells"] = errors;
  v.pass = violations == 0 && errors == 0;
  if (errors > 0) v.note = "some cells failed; see sweep.csv";
  return v;
}

SweepResult run_sweep(const ExperimentConfig& cfg, std::string_view config_text, const RunOptions& opts) {
  if (cfg.kind != ExperimentKind::Sweep) throw MisuseError("run_sweep needs a sweep experiment");
  const GridPtr grid = cfg.grid.build();
  SweepResult result;
  result.chi = cfg.sweep.chi;
  result.mass = cfg.sweep.mass;
  const std::size_t total = result.chi.size() * result.mass.size();
  result.cells.resize(total);
  const double base_mass = cfg.measure.total_mass(grid);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      SweepCell& cell = result.cells[k];
      cell.index = k;
      cell.chi = result.chi[k / result.mass.size()];
      cell.mass = result.mass[k % result.mass.size()];
      ExperimentConfig c = cfg;
      c.model.chi = cell.chi;
      const double scale = cell.mass / base_mass;
      for (auto& a : c.measure.atoms) a.mass *= scale;
      if (c.measure.density) c.measure.density->amplitude *= scale;
      c.scenario.m = cell.mass;
      cell.zeta = derive(c.model).zeta;
      try {
        RunRecord r = run_single(c, c.eps.front(), grid);
        cell.status = std::string(to_string(r.outcome.status));
        cell.detection_time = r.outcome.detection_time;
        cell.steps = r.outcome.steps;
        for (const auto& rec : r.outcome.series) cell.linf_max = std::max(cell.linf_max, rec.linf_u);
        cell.linf_max = std::max(cell.linf_max, r.outcome.final_state.u.max());
        if (!opts.output.empty()) {
          r.dir = fmt::format("cells/cell_{}", k);
          write_run(opts.output / r.dir, r, false);
        }
      } catch (const Error& e) {
        cell.status = "Error";
        cell.error = e.what();
      }
      log_line(opts, fmt::format("{} cell {} (chi={:g}, m={:g}): {}", cfg.name, k, cell.chi, cell.mass, cell.status));
    }
  };
  const int workers = std::max(1, std::min<int>(opts.workers, static_cast<int>(total)));
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  result.boundary = sweep_boundary_verdict(result.chi, result.mass, result.cells);

  if (!opts.output.empty()) {
    std::ostringstream csv;
    csv << "cell,chi,mass,zeta,status,detection_time,linf_max,steps,error\n";
    for (const auto& c : result.cells) {
      std::string err = c.error;
      std::replace(err.begin(), err.end(), ',', ';');
      std::replace(err.begin(), err.end(), '\n', ' ');
      csv << fmt::format("{},{},{},{},{},{},{},{},{}\n", c.index, c.chi, c.mass, c.zeta, c.status, c.detection_time,
                         c.linf_max, c.steps, err);
    }
    write_text(opts.output / "sweep.csv", csv.str());
    write_json(opts.output / "verdicts.json",
               json{{"all_pass", result.boundary.pass}, {"verdicts", json::array({to_json(result.boundary)})}});
    json manifest = manifest_base(cfg, config_text, *grid);
    json cells = json::array();
    for (const auto& c : result.cells) {
      cells.push_back({{"index", c.index}, {"chi", c.chi}, {"mass", c.mass}, {"status", c.status},
                       {"dir", c.status == "Error" ? json(nullptr) : json(fmt::format("cells/cell_{}", c.index))}});
    }
    manifest["cells"] = cells;
    write_json(opts.output / "manifest.json", manifest);
  }
  return result;
}

// ---------------------------------------------------------------------------

Field block_average(const Field& fine, const GridPtr& coarse) {
  const Grid& f = *fine.grid;
  const Grid& c = *coarse;
  if (f.geometry() != c.geometry() || f.extents() != c.extents() || f.nx() % c.nx() != 0 ||
      f.ny() % c.ny() != 0) {
    throw InvalidParameter("block_average needs nested grids of the same geometry");
  }
  const int rx = f.nx() / c.nx();
  const int ry = f.axes() == 2 ? f.ny() / c.ny() : 1;
  const int fny = f.axes() == 2 ? f.ny() : 1;
  std::vector<double> mass(c.size(), 0.0), vol(c.size(), 0.0);
  for (int iy = 0; iy < fny; ++iy) {
    for (int ix = 0; ix < f.nx(); ++ix) {
      const std::size_t i = f.index(ix, iy);
      const std::size_t j = c.index(ix / rx, iy / ry);
      mass[j] += fine.values[i] * f.cell_volume(i);
      vol[j] += f.cell_volume(i);
    }
  }
  Field out(coarse);
  for (std::size_t j = 0; j < out.size(); ++j) out.values[j] = mass[j] / vol[j];
  return out;
}

double l1_distance(const Field& a, const Field& b) {
  if (!(*a.grid == *b.grid)) throw InvalidParameter("l1_distance needs fields on the same grid");
  return lp_norm(a - b, 1.0);
}

ConvergenceReport convergence_study(const ExperimentConfig& cfg, std::string_view config_text,
                                    const RunOptions& opts) {
  if (cfg.kind != ExperimentKind::Convergence) throw MisuseError("convergence_study needs a convergence experiment");
  if (cfg.eps.size() < 3) throw ConfigError("initial.eps", "convergence studies need at least 3 values");
  ConvergenceReport rep;
  rep.probe_time = cfg.convergence.probe_time;
  rep.eps = cfg.eps;

  ExperimentConfig probe = cfg;
  probe.t_end = cfg.convergence.probe_time;

  auto final_u = [&](const ExperimentConfig& c, double eps, const GridPtr& grid) {
    RunRecord r = run_single(c, eps, grid);
    if (r.outcome.status != RunStatus::Completed) {
      throw SolverFailure(fmt::format("run at eps={:g} ended with {}", eps, to_string(r.outcome.status)), 0.0);
    }
    log_line(opts, fmt::format("{} eps={:g} cells={}: {} steps", cfg.name, eps, grid->nx(), r.outcome.steps));
    return r.outcome.final_state.u;
  };

  const GridPtr grid = cfg.grid.build();
  std::vector<Field> finals;
  for (double eps : cfg.eps) finals.push_back(final_u(probe, eps, grid));
  for (std::size_t k = 0; k + 1 < finals.size(); ++k) rep.eps_distances.push_back(l1_distance(finals[k], finals[k + 1]));
  for (std::size_t k = 0; k + 1 < rep.eps_distances.size(); ++k) {
    rep.cauchy_ratios.push_back(rep.eps_distances[k + 1] / rep.eps_distances[k]);
  }
  rep.eps_verdict.functional = "eps_cauchy_monotone";
  rep.eps_verdict.t_lo = rep.eps_verdict.t_hi = rep.probe_time;
  rep.eps_verdict.fitted_exponent = *std::max_element(rep.cauchy_ratios.begin(), rep.cauchy_ratios.end());
  rep.eps_verdict.bound = 1.0;
  rep.eps_verdict.pass = rep.eps_verdict.fitted_exponent < 1.0;

  std::vector<Field> ladder;
  std::vector<GridPtr> grids;
  for (int j = 0; j <= cfg.convergence.refinements; ++j) {
    GridPtr g = cfg.grid.refined(1 << j).build();
    grids.push_back(g);
    rep.cells.push_back(g->nx());
    ladder.push_back(j == 0 ? finals.front() : final_u(probe, cfg.eps.front(), g));
  }
  for (std::size_t j = 0; j + 1 < ladder.size(); ++j) {
    rep.h_errors.push_back(l1_distance(ladder[j], block_average(ladder.back(), grids[j])));
  }
  rep.h_verdict.functional = "h_refinement_monotone";
  rep.h_verdict.t_lo = rep.h_verdict.t_hi = rep.probe_time;
  rep.h_verdict.bound = 1.0;
  double worst = 0.0;
  for (std::size_t j = 0; j + 1 < rep.h_errors.size(); ++j) worst = std::max(worst, rep.h_errors[j + 1] / rep.h_errors[j]);
  rep.h_verdict.fitted_exponent = worst;
  rep.h_verdict.pass = rep.h_errors.size() < 2 || worst < 1.0;
  if (rep.h_errors.size() < 2) rep.h_verdict.note = "one refinement level: nothing to compare";

  if (!opts.output.empty()) {
    std::ostringstream csv;
    csv << "study,level,eps,cells,distance\n";
    for (std::size_t k = 0; k < rep.eps_distances.size(); ++k) {
      csv << fmt::format("eps,{},{},{},{}\n", k, cfg.eps[k + 1], cfg.grid.cells[0], rep.eps_distances[k]);
    }
    for (std::size_t j = 0; j < rep.h_errors.size(); ++j) {
      csv << fmt::format("h,{},{},{},{}\n", j, cfg.eps.front(), rep.cells[j], rep.h_errors[j]);
    }
    write_text(opts.output / "convergence.csv", csv.str());
    const std::vector<Verdict> vs{rep.eps_verdict, rep.h_verdict};
    write_json(opts.output / "verdicts.json", json{{"all_pass", all_pass(vs)}, {"verdicts", to_json(vs)}});
    json manifest = manifest_base(cfg, config_text, *grid);
    manifest["convergence"] = {{"probe_time", rep.probe_time}, {"eps", rep.eps},
                               {"eps_distances", rep.eps_distances}, {"cauchy_ratios", rep.cauchy_ratios},
                               {"cells", rep.cells}, {"h_errors", rep.h_errors}};
    write_json(opts.output / "manifest.json", manifest);
  }
  return rep;
}

// ---------------------------------------------------------------------------

bool VerifyReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const VerifyEntry& e) { return e.verdict.pass; });
}

int VerifyReport::mismatches() const {
  return static_cast<int>(std::count_if(entries.begin(), entries.end(), [](const VerifyEntry& e) { return !e.matches_stored; }));
}

namespace {

json stored_verdicts(const fs::path& path) {
  json doc = read_json(path);
  if (!doc.is_object() || !doc.contains("verdicts") || !doc["verdicts"].is_array()) {
    throw ConfigError(path.filename().string(), "expected an object with a 'verdicts' list");
  }
  return std::move(doc["verdicts"]);
}

void compare(VerifyReport& rep, const std::string& run, const std::vector<Verdict>& fresh, const json& stored) {
  for (const auto& v : fresh) {
    VerifyEntry e{run, v, false};
    for (const auto& s : stored) {
      if (s.at("functional").get<std::string>() == v.functional) {
        e.matches_stored = verdict_from_json(s).pass == v.pass;
        break;
      }
    }
    rep.entries.push_back(std::move(e));
  }
}

}  // namespace

VerifyReport verify_run_dir(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) throw ConfigError("manifest.json", fmt::format("manifest missing in {}", dir.string()));
  const json manifest = read_json(manifest_path);
  const ExperimentConfig cfg = parse_config(manifest.at("config_text").get<std::string>());
  VerifyReport rep;

  if (cfg.kind == ExperimentKind::Single || cfg.kind == ExperimentKind::EpsFamily) {
    std::vector<std::vector<DiagnosticsRecord>> family;
    ScenarioConfig first_sc;
    Scenario first_scenario = Scenario::Unclassified;
    for (const auto& entry : manifest.at("runs")) {
      const std::string rdir = entry.at("dir").get<std::string>();
      auto series = read_series(dir / rdir / "series.csv");
      InitialData init;
      init.scenario_cfg = cfg.scenario;
      init.scenario_cfg.m = entry.at("mass").get<double>();
      init.scenario = classify_scenario(cfg.model, init.scenario_cfg, cfg.density_only());
      init.v0_mass = entry.at("v0_mass").get<double>();
      init.w0_mass = entry.at("w0_mass").get<double>();
      init.v0_norm = entry.at("v0_norm").get<double>();
      init.w0_norm = entry.at("w0_norm").get<double>();
      const auto fresh = run_verdicts(series, cfg, init);
      compare(rep, rdir, fresh, stored_verdicts(dir / rdir / "verdicts.json"));
      if (family.empty()) {
        first_sc = init.scenario_cfg;
        first_scenario = init.scenario;
      }
      family.push_back(std::move(series));
    }
    if (cfg.kind == ExperimentKind::EpsFamily) {
      const auto fresh = family_verdicts(family, cfg, first_sc, first_scenario);
      compare(rep, "family", fresh, stored_verdicts(dir / "family_verdicts.json"));
    }
  } else if (cfg.kind == ExperimentKind::Sweep) {
    std::vector<SweepCell> cells;
    for (const auto& c : manifest.at("cells")) {
      SweepCell cell;
      cell.index = c.at("index").get<std::size_t>();
      cell.chi = c.at("chi").get<double>();
      cell.mass = c.at("mass").get<double>();
      cell.status = c.at("status").get<std::string>();
      cells.push_back(cell);
    }
    const Verdict v = sweep_boundary_verdict(cfg.sweep.chi, cfg.sweep.mass, cells);
    compare(rep, "sweep", {v}, stored_verdicts(dir / "verdicts.json"));
  } else {
    const json& conv = manifest.at("convergence");
    const auto ratios = conv.at("cauchy_ratios").get<std::vector<double>>();
    Verdict v;
    v.functional = "eps_cauchy_monotone";
    v.fitted_exponent = ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
    v.bound = 1.0;
    v.pass = !ratios.empty() && v.fitted_exponent < 1.0;
    compare(rep, "convergence", {v}, stored_verdicts(dir / "verdicts.json"));
  }
  return rep;
}

}  // namespace arks::harness
