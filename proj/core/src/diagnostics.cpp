#include "arks/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "arks/error.hpp"
#include "arks/fit.hpp"

namespace arks {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kUFloor = 1e-300;
constexpr double kGaussianWidth = 0.25;

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(TestFunction f) {
  switch (f) {
    case TestFunction::Constant: return "constant";
    case TestFunction::Cosine: return "cosine";
    case TestFunction::Gaussian: return "gaussian";
  }
  return "constant";
}

std::optional<TestFunction> parse_test_function(std::string_view name) {
  if (name == "constant") return TestFunction::Constant;
  if (name == "cosine") return TestFunction::Cosine;
  if (name == "gaussian") return TestFunction::Gaussian;
  return std::nullopt;
}

double evaluate(TestFunction f, const Grid& grid, double x, double y) {
  const auto ext = grid.extents();
  switch (f) {
    case TestFunction::Constant: return 1.0;
    case TestFunction::Cosine: return std::cos(std::numbers::pi * x / ext[0]);
    case TestFunction::Gaussian: {
      double rho2 = 0.0;
      if (grid.radial()) {
        rho2 = x * x;
      } else {
        const double dx = x - 0.5 * ext[0];
        const double dy = grid.axes() == 2 ? y - 0.5 * ext[1] : 0.0;
        rho2 = dx * dx + dy * dy;
      }
      return std::exp(-rho2 / (2.0 * kGaussianWidth * kGaussianWidth));
    }
  }
  return 0.0;
}

double pair(const Field& u, TestFunction f) {
  const Grid& g = *u.grid;
  const auto vol = g.cell_volumes();
  std::vector<double> terms(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto c = g.center(i);
    terms[i] = u.values[i] * evaluate(f, g, c[0], c[1]) * vol[i];
  }
  return pairwise_sum(terms);
}

// ---------------------------------------------------------------------------

double DiagnosticsRecord::moment(double p) const {
  for (const auto& [q, value] : lp_u) {
    if (std::abs(q - p) <= 1e-12 * std::max(1.0, std::abs(p))) return value;
  }
  return kNaN;
}

double DiagnosticsRecord::pairing(std::string_view name) const {
  for (const auto& [n, value] : phi) {
    if (n == name) return value;
  }
  return kNaN;
}

std::vector<double> default_lp_exponents(const ScenarioConfig& cfg) {
  const double q = cfg.u_exponent;
  const std::vector<double> candidates = {q, 2.0, 2.5, static_cast<double>(cfg.n), 3.0 * q / (4.0 * q - 3.0)};
  std::vector<double> out;
  for (double p : candidates) {
    if (p < 1.0) continue;
    const bool seen = std::any_of(out.begin(), out.end(), [&](double x) { return std::abs(x - p) < 1e-12; });
    if (!seen) out.push_back(p);
  }
  return out;
}

DiagnosticsConfig make_diagnostics_config(const ModelParams& params, const ScenarioConfig& cfg) {
  DiagnosticsConfig out;
  out.params = params;
  out.scenario = cfg;
  out.p_values = default_lp_exponents(cfg);
  out.test_functions = {TestFunction::Constant, TestFunction::Cosine, TestFunction::Gaussian};
  return out;
}

double entropy(const Field& u) {
  const auto vol = u.grid->cell_volumes();
  std::vector<double> terms(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = u.values[i];
    terms[i] = x <= 0.0 ? 0.0 : x * std::log(std::max(x, kUFloor)) * vol[i];
  }
  return pairwise_sum(terms);
}

double fisher_information(const Field& u) {
  Field root(u.grid);
  for (std::size_t i = 0; i < u.size(); ++i) root.values[i] = std::sqrt(std::max(u.values[i], kUFloor));
  return 4.0 * gradient_sq_integral(root);
}

DiagnosticsRecord record(const State& state, const DiagnosticsConfig& cfg) {
  const Field& u = state.u;
  const auto vol = u.grid->cell_volumes();
  const double zeta = derive(cfg.params).zeta;
  const double r = cfg.scenario.r;

  DiagnosticsRecord rec;
  rec.t = state.t;
  rec.mass_u = integrate(u);
  rec.mass_v = integrate(state.v);
  rec.mass_w = integrate(state.w);
  rec.linf_u = lp_norm(u, kInfinity);
  rec.entropy = entropy(u);
  rec.dirichlet_z = 0.5 * gradient_sq_integral(state.z);
  rec.energy_F = zeta * rec.entropy + rec.dirichlet_z;
  rec.fisher_u = fisher_information(u);

  const Field lap = neumann_laplacian(state.z);
  const auto grad2 = cell_gradient_sq(state.z);
  std::vector<double> lap_terms(u.size()), l4_terms(u.size()), taxis_terms(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    lap_terms[i] = lap.values[i] * lap.values[i] * vol[i];
    l4_terms[i] = grad2[i] * grad2[i] * vol[i];
    taxis_terms[i] = std::abs(u.values[i]) * std::sqrt(grad2[i]) * vol[i];
  }
  rec.lap_z_sq = pairwise_sum(lap_terms);
  rec.grad_z_l4 = pairwise_sum(l4_terms);
  rec.taxis_l1 = pairwise_sum(taxis_terms);
  rec.w1r_v = w1r_norm(state.v, r);
  rec.w1r_w = w1r_norm(state.w, r);

  for (double p : cfg.p_values) {
    const double norm = lp_norm(u, p);
    rec.lp_u.emplace_back(p, std::pow(norm, p));
  }
  if (cfg.v_ref) rec.w1r_dv = w1r_norm(state.v - *cfg.v_ref, r);
  if (cfg.w_ref) rec.w1r_dw = w1r_norm(state.w - *cfg.w_ref, r);
  for (TestFunction f : cfg.test_functions) rec.phi.emplace_back(std::string(to_string(f)), pair(u, f));
  return rec;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

const std::vector<std::string>& fixed_columns() {
  static const std::vector<std::string> cols = {
      "t",         "mass_u",   "mass_v",    "mass_w",   "linf_u", "entropy", "dirichlet_z",
      "energy_F",  "fisher_u", "lap_z_sq",  "grad_z_l4", "taxis_l1", "w1r_v", "w1r_w"};
  return cols;
}

std::vector<double> fixed_values(const DiagnosticsRecord& r) {
  return {r.t,        r.mass_u,   r.mass_v,    r.mass_w,    r.linf_u,   r.entropy, r.dirichlet_z,
          r.energy_F, r.fisher_u, r.lap_z_sq, r.grad_z_l4, r.taxis_l1, r.w1r_v,   r.w1r_w};
}

double* fixed_slot(DiagnosticsRecord& r, std::size_t k) {
  double* slots[] = {&r.t,        &r.mass_u,   &r.mass_v,    &r.mass_w,    &r.linf_u,   &r.entropy, &r.dirichlet_z,
                     &r.energy_F, &r.fisher_u, &r.lap_z_sq, &r.grad_z_l4, &r.taxis_l1, &r.w1r_v,   &r.w1r_w};
  return slots[k];
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::vector<std::string> series_columns(const DiagnosticsRecord& layout) {
  std::vector<std::string> cols = fixed_columns();
  for (const auto& [p, value] : layout.lp_u) cols.push_back(fmt::format("lp_u_{}", p));
  cols.insert(cols.end(), {"clamp_max", "w1r_dv", "w1r_dw"});
  for (const auto& [name, value] : layout.phi) cols.push_back("phi_" + name);
  return cols;
}

void write_series_csv(std::ostream& os, std::span<const DiagnosticsRecord> series) {
  if (series.empty()) return;
  const auto cols = series_columns(series.front());
  for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << cols[k];
  os << '\n';
  for (const auto& r : series) {
    std::vector<double> row = fixed_values(r);
    for (const auto& [p, value] : r.lp_u) row.push_back(value);
    row.insert(row.end(), {r.clamp_max, r.w1r_dv, r.w1r_dw});
    for (const auto& [name, value] : r.phi) row.push_back(value);
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << fmt::format("{}", row[k]);
    os << '\n';
  }
}

std::vector<DiagnosticsRecord> read_series_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidSeries("empty series CSV");
  const auto header = split(line);
  const auto& fixed = fixed_columns();
  if (header.size() < fixed.size() || !std::equal(fixed.begin(), fixed.end(), header.begin())) {
    throw InvalidSeries("series CSV header does not match the diagnostics schema");
  }
  std::vector<DiagnosticsRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) throw InvalidSeries("series CSV row has the wrong number of columns");
    DiagnosticsRecord r;
    for (std::size_t k = 0; k < header.size(); ++k) {
      const double value = std::stod(cells[k]);
      const std::string& name = header[k];
      if (k < fixed.size()) {
        *fixed_slot(r, k) = value;
      } else if (name.rfind("lp_u_", 0) == 0) {
        r.lp_u.emplace_back(std::stod(name.substr(5)), value);
      } else if (name == "clamp_max") {
        r.clamp_max = value;
      } else if (name == "w1r_dv") {
        r.w1r_dv = value;
      } else if (name == "w1r_dw") {
        r.w1r_dw = value;
      } else if (name.rfind("phi_", 0) == 0) {
        r.phi.emplace_back(name.substr(4), value);
      } else {
        throw InvalidSeries("unknown series column '" + name + "'");
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fits and verdicts

namespace {

struct Window {
  std::vector<double> t;
  std::vector<double> value;
};

Window restrict(const TimeSeries& s, double t_lo, double t_hi) {
  // Tolerate sample times that land a rounding error outside the window.
  const double lo = t_lo * (1.0 - 1e-9);
  const double hi = t_hi * (1.0 + 1e-9);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    if (s.t[i] >= lo && s.t[i] <= hi) idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return s.t[a] < s.t[b]; });
  Window w;
  for (auto i : idx) {
    w.t.push_back(s.t[i]);
    w.value.push_back(s.value[i]);
  }
  return w;
}

}  // namespace

double fit_decay_exponent(const TimeSeries& series, double t_lo, double t_hi) {
  const Window w = restrict(series, t_lo, t_hi);
  if (w.t.size() < 5) {
    throw InvalidSeries(fmt::format("need at least 5 samples in [{:g}, {:g}], have {}", t_lo, t_hi, w.t.size()));
  }
  for (double v : w.value) {
    if (!(v > 0.0)) throw InvalidSeries("nonpositive value in fit window");
  }
  return log_log_slope(w.t, w.value);
}

Verdict check_decay(std::string name, const TimeSeries& series, double claimed, const DecayCheck& opts) {
  Verdict v;
  v.functional = std::move(name);
  v.t_lo = opts.t_lo;
  v.t_hi = opts.t_hi;
  v.bound = -claimed;
  v.metrics["slack"] = opts.slack;
  v.metrics["claimed_decay_exponent"] = claimed;

  bool exponent_pass = false;
  try {
    v.fitted_exponent = fit_decay_exponent(series, opts.t_lo, opts.t_hi);
    exponent_pass = v.fitted_exponent >= -claimed - opts.slack;
  } catch (const InvalidSeries& e) {
    v.note = e.what();
  }

  const Window w = restrict(series, opts.t_lo, opts.t_hi);
  bool envelope_pass = false;
  if (w.t.size() >= 2) {
    std::vector<double> damp(w.t.size());
    for (std::size_t i = 0; i < damp.size(); ++i) damp[i] = std::pow(w.t[i], claimed) * w.value[i];
    const auto [mn, mx] = std::minmax_element(damp.begin(), damp.end());
    const double ratio = *mn > 0.0 ? *mx / *mn : std::numeric_limits<double>::infinity();
    bool diverging = true;  // increasing as t decreases across the whole window
    for (std::size_t i = 0; i + 1 < damp.size(); ++i) diverging = diverging && damp[i] > damp[i + 1];
    v.metrics["envelope_constant"] = *mx;
    v.metrics["envelope_ratio"] = ratio;
    v.metrics["monotone_divergence"] = diverging ? 1.0 : 0.0;
    envelope_pass = ratio <= opts.ratio_limit && !diverging;
  }
  v.metrics["exponent_pass"] = exponent_pass ? 1.0 : 0.0;
  v.metrics["envelope_pass"] = envelope_pass ? 1.0 : 0.0;
  v.pass = exponent_pass || envelope_pass;
  return v;
}

double admissible_lambda(double r) {
  const double lower = 2.0 / r - 1.0;
  const double lambda = std::max(0.01, lower + 0.05);
  if (lambda < 2.0 / 3.0) return lambda;
  return 0.5 * (std::max(lower, 0.0) + 2.0 / 3.0);
}

namespace {

std::vector<DiagnosticsRecord> sorted_by_time(std::span<const DiagnosticsRecord> series) {
  std::vector<DiagnosticsRecord> s(series.begin(), series.end());
  std::stable_sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  return s;
}

template <class Integrand>
Verdict geometric_increments(std::string name, const std::vector<DiagnosticsRecord>& s, double t_hi,
                             Integrand&& g) {
  Verdict v;
  v.functional = std::move(name);
  v.t_hi = t_hi;
  std::vector<double> inc;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    const double a = s[k].t;
    const double b = s[k + 1].t;
    const double piece = 0.5 * (b - a) * (g(s[k]) + g(s[k + 1]));
    total += piece;
    if (a > 0.0 && b <= t_hi * (1.0 + 1e-9)) {
      if (inc.empty()) v.t_lo = a;
      inc.push_back(piece);
    }
  }
  v.metrics["integral"] = total;
  v.metrics["intervals"] = static_cast<double>(inc.size());
  if (inc.size() < 2) {
    v.note = "too few ladder intervals";
    return v;
  }
  if (std::all_of(inc.begin(), inc.end(), [](double x) { return x == 0.0; })) {
    v.pass = true;
    v.vacuous = true;
    v.note = "integrand vanishes on the ladder";
    return v;
  }
  double max_ratio = 0.0;
  for (std::size_t k = 0; k + 1 < inc.size(); ++k) {
    const double ratio = inc[k + 1] > 0.0 ? inc[k] / inc[k + 1] : std::numeric_limits<double>::infinity();
    max_ratio = std::max(max_ratio, ratio);
  }
  v.fitted_exponent = max_ratio;
  v.bound = 1.0;
  v.pass = max_ratio < 1.0;
  if (v.pass) v.metrics["tail_estimate"] = inc.front() * max_ratio / (1.0 - max_ratio);
  return v;
}

}  // namespace

TimeSeries cumulative_taxis(std::span<const DiagnosticsRecord> series) {
  const auto s = sorted_by_time(series);
  TimeSeries out;
  double acc = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k > 0) acc += 0.5 * (s[k].t - s[k - 1].t) * (s[k].taxis_l1 + s[k - 1].taxis_l1);
    out.t.push_back(s[k].t);
    out.value.push_back(acc);
  }
  return out;
}

std::vector<Verdict> check_dampened_integrals(std::span<const DiagnosticsRecord> series,
                                              const DampenedCheck& opts) {
  const auto s = sorted_by_time(series);
  const double lam = opts.lambda;
  std::vector<Verdict> out;

  if (opts.zeta == 0.0) {
    Verdict v;
    v.functional = "fisher_dampened";
    v.pass = true;
    v.vacuous = true;
    v.note = "zeta = 0 removes the Fisher term";
    out.push_back(v);
  } else {
    out.push_back(geometric_increments("fisher_dampened", s, opts.increments_t_hi, [&](const DiagnosticsRecord& r) {
      return opts.zeta * std::pow(r.t, lam) * r.fisher_u;
    }));
  }
  out.push_back(geometric_increments("lap_z_dampened", s, opts.increments_t_hi, [&](const DiagnosticsRecord& r) {
    return std::pow(r.t, lam) * r.lap_z_sq;
  }));
  out.push_back(geometric_increments("grad_z_l4_dampened", s, opts.increments_t_hi, [&](const DiagnosticsRecord& r) {
    return std::pow(r.t, 2.0 * lam) * r.grad_z_l4;
  }));
  for (auto& v : out) v.metrics["lambda"] = lam;

  Verdict taxis;
  taxis.functional = "taxis_integral";
  taxis.t_lo = opts.t_lo;
  taxis.t_hi = opts.t_hi;
  taxis.bound = opts.theta_min;
  const TimeSeries cum = cumulative_taxis(series);
  const bool vanishes = std::all_of(s.begin(), s.end(), [](const auto& r) { return r.taxis_l1 == 0.0; });
  if (vanishes) {
    taxis.pass = true;
    taxis.vacuous = true;
    taxis.note = "taxis flux vanishes identically";
  } else {
    try {
      TimeSeries positive;
      for (std::size_t i = 0; i < cum.t.size(); ++i) {
        if (cum.t[i] > 0.0) {
          positive.t.push_back(cum.t[i]);
          positive.value.push_back(cum.value[i]);
        }
      }
      taxis.fitted_exponent = fit_decay_exponent(positive, opts.t_lo, opts.t_hi);
      taxis.pass = taxis.fitted_exponent >= opts.theta_min;
    } catch (const InvalidSeries& e) {
      taxis.note = e.what();
    }
  }
  out.push_back(taxis);
  return out;
}

Verdict check_weak_continuity(std::string name, const TimeSeries& pairing, double reference, double tol,
                              double floor) {
  Verdict v;
  v.functional = std::move(name);
  v.bound = tol;
  const Window w = restrict(pairing, 0.0, std::numeric_limits<double>::max());
  std::vector<double> dev;
  for (std::size_t i = 0; i < w.t.size(); ++i) {
    if (w.t[i] <= 0.0) continue;
    dev.push_back(std::abs(w.value[i] - reference));
    if (dev.size() == 1) v.t_lo = w.t[i];
    v.t_hi = w.t[i];
  }
  if (dev.empty()) {
    v.note = "no samples with t > 0";
    return v;
  }
  int violations = 0;
  for (std::size_t i = 0; i + 1 < dev.size(); ++i) {
    const double a = dev[i] <= floor ? 0.0 : dev[i];
    const double b = dev[i + 1] <= floor ? 0.0 : dev[i + 1];
    if (a > b) ++violations;
  }
  v.fitted_exponent = dev.front();
  v.metrics["deviation_smallest_t"] = dev.front();
  v.metrics["deviation_max"] = *std::max_element(dev.begin(), dev.end());
  v.metrics["monotonicity_violations"] = violations;
  v.pass = violations == 0 && dev.front() <= tol;
  return v;
}

Verdict check_family_uniformity(std::string name, std::span<const TimeSeries> family, double factor,
                                double floor) {
  Verdict v;
  v.functional = std::move(name);
  v.bound = factor;
  if (family.empty()) {
    v.note = "empty family";
    return v;
  }
  double worst = 1.0;
  int compared = 0;
  for (std::size_t i = 0; i < family.front().t.size(); ++i) {
    const double t = family.front().t[i];
    if (t <= 0.0) continue;
    double mn = std::numeric_limits<double>::infinity();
    double mx = 0.0;
    int count = 0;
    for (const auto& member : family) {
      for (std::size_t j = 0; j < member.t.size(); ++j) {
        if (std::abs(member.t[j] - t) > 1e-12 * t) continue;
        const double x = std::abs(member.value[j]);
        if (x <= floor) continue;
        mn = std::min(mn, x);
        mx = std::max(mx, x);
        ++count;
      }
    }
    if (count >= 2) {
      worst = std::max(worst, mx / mn);
      ++compared;
      if (v.t_lo == 0.0) v.t_lo = t;
      v.t_hi = std::max(v.t_hi, t);
    }
  }
  v.fitted_exponent = worst;
  v.metrics["compared_times"] = compared;
  v.pass = worst <= factor;
  return v;
}

// ---------------------------------------------------------------------------

std::vector<Verdict> evaluate_run(std::span<const DiagnosticsRecord> series, const ModelParams& params,
                                  const ScenarioConfig& cfg, Scenario scenario, double v0_mass, double w0_mass,
                                  const VerdictConfig& vc) {
  std::vector<Verdict> out;
  if (series.empty()) return out;
  const auto s = sorted_by_time(series);
  const double m = cfg.m;

  {
    Verdict v;
    v.functional = "mass_u";
    double worst = 0.0;
    for (const auto& r : s) worst = std::max(worst, std::abs(r.mass_u - m) / m);
    v.t_lo = s.front().t;
    v.t_hi = s.back().t;
    v.fitted_exponent = worst;
    v.bound = vc.mass_rel_tol;
    v.pass = worst <= vc.mass_rel_tol;
    out.push_back(v);
  }

  auto chem = [&](std::string name, auto mass_of, double prod, double decay, double init_mass) {
    Verdict v;
    v.functional = std::move(name);
    v.t_lo = s.front().t;
    v.t_hi = s.back().t;
    const double target = prod * m / decay;
    if (params.tau == 1) {
      const double cap = std::max(target, init_mass) * (1.0 + vc.chem_mass_rel_tol);
      double worst = 0.0;
      for (const auto& r : s) worst = std::max(worst, mass_of(r));
      v.fitted_exponent = worst;
      v.bound = cap;
      v.pass = worst <= cap;
    } else {
      double worst = 0.0;
      for (const auto& r : s) worst = std::max(worst, std::abs(mass_of(r) - target) / target);
      v.fitted_exponent = worst;
      v.bound = vc.chem_mass_rel_tol;
      v.pass = worst <= vc.chem_mass_rel_tol;
    }
    out.push_back(v);
  };
  chem("mass_v", [](const DiagnosticsRecord& r) { return r.mass_v; }, params.alpha, params.beta, v0_mass);
  chem("mass_w", [](const DiagnosticsRecord& r) { return r.mass_w; }, params.gamma, params.delta, w0_mass);

  const double zeta = derive(params).zeta;
  const auto n = static_cast<double>(cfg.n);
  const double q = cfg.u_exponent;

  if (scenario == Scenario::S1) {
    const double lam = admissible_lambda(cfg.r);
    const TimeSeries energy = extract(s, [](const auto& r) { return r.energy_F; });

    Verdict decay = check_decay("energy_F_decay", energy, lam, vc.energy);
    decay.pass = decay.metrics["exponent_pass"] == 1.0;
    decay.metrics["lambda"] = lam;
    out.push_back(decay);
    Verdict envelope = check_decay("energy_F_envelope", energy, lam, vc.small_t);
    envelope.pass = envelope.metrics["envelope_pass"] == 1.0;
    envelope.metrics["lambda"] = lam;
    out.push_back(envelope);

    const auto dampened = check_dampened_integrals(
        s, DampenedCheck{lam, vc.theta_min, zeta, vc.small_t.t_lo, vc.small_t.t_hi, vc.increments_t_hi});
    out.insert(out.end(), dampened.begin(), dampened.end());

    auto w1r_bound = [&](std::string name, auto get) {
      Verdict v;
      v.functional = std::move(name);
      double mx = 0.0;
      for (const auto& r : s) mx = std::max(mx, get(r));
      const double final_value = get(s.back());
      v.t_lo = s.front().t;
      v.t_hi = s.back().t;
      v.fitted_exponent = mx;
      v.bound = vc.w1r_factor * final_value;
      v.pass = mx <= v.bound;
      out.push_back(v);
    };
    w1r_bound("w1r_v_bounded", [](const DiagnosticsRecord& r) { return r.w1r_v; });
    w1r_bound("w1r_w_bounded", [](const DiagnosticsRecord& r) { return r.w1r_w; });
  } else if (scenario == Scenario::S2 || scenario == Scenario::S3) {
    std::vector<double> decay_ps = {2.0, 2.5, n, 3.0 * q / (4.0 * q - 3.0)};
    std::vector<double> done;
    for (double p : decay_ps) {
      if (p <= 1.0 || std::isnan(s.front().moment(p))) continue;
      if (std::any_of(done.begin(), done.end(), [&](double x) { return std::abs(x - p) < 1e-12; })) continue;
      done.push_back(p);
      const TimeSeries ts = extract(s, [p](const auto& r) { return r.moment(p); });
      Verdict v = check_decay(fmt::format("lp_u_{}", p), ts, n * (p - 1.0) / 2.0, vc.small_t);
      out.push_back(v);
    }
    const auto dampened = check_dampened_integrals(
        s, DampenedCheck{0.0, vc.theta_min, 0.0, vc.small_t.t_lo, vc.small_t.t_hi});
    out.push_back(dampened.back());

    if (q < 2.0 && !std::isnan(s.front().moment(q))) {
      Verdict v;
      v.functional = fmt::format("lq_u_{}_bounded", q);
      const double initial = std::pow(s.front().moment(q), 1.0 / q);
      double mx = 0.0;
      for (const auto& r : s) mx = std::max(mx, std::pow(r.moment(q), 1.0 / q));
      v.t_lo = s.front().t;
      v.t_hi = s.back().t;
      v.fitted_exponent = mx / initial;
      v.bound = vc.lq_factor;
      v.pass = mx <= vc.lq_factor * initial;
      out.push_back(v);
    }
  }

  if (s.front().t == 0.0) {
    for (const auto& [name, ref] : s.front().phi) {
      const std::string key = name;
      TimeSeries ts = extract(s, [&](const auto& r) { return r.pairing(key); });
      while (!ts.t.empty() && ts.t.back() > vc.small_t.t_hi * (1.0 + 1e-9)) {
        ts.t.pop_back();
        ts.value.pop_back();
      }
      out.push_back(check_weak_continuity("weak_continuity_" + name, ts, ref, vc.continuity_rel_tol * m,
                                          vc.mass_rel_tol * m));
    }
  }
  return out;
}

}  // namespace arks
