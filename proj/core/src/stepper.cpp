#include "arks/stepper.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "arks/error.hpp"

namespace arks {

std::string_view to_string(Formulation f) {
  return f == Formulation::Primitive ? "primitive" : "transformed";
}

std::optional<Formulation> parse_formulation(std::string_view name) {
  if (name == "primitive") return Formulation::Primitive;
  if (name == "transformed") return Formulation::Transformed;
  return std::nullopt;
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "Completed";
    case RunStatus::BlowupDetected: return "BlowupDetected";
    case RunStatus::StepUnderflow: return "StepUnderflow";
  }
  return "Completed";
}

void StepControl::validate() const {
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) throw InvalidParameter(fmt::format("{} must be > 0", name));
  };
  positive(dt_init, "dt_init");
  positive(dt_min, "dt_min");
  positive(dt_max, "dt_max");
  if (!(dt_min <= dt_init && dt_init <= dt_max)) {
    throw InvalidParameter("need dt_min <= dt_init <= dt_max");
  }
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw InvalidParameter("cfl_safety must lie in (0, 1]");
  if (!(blowup_threshold >= 0.0)) throw InvalidParameter("blowup_threshold must be >= 0 (0 = default)");
  if (!(blowup_factor > 0.0)) throw InvalidParameter("blowup_factor must be > 0");
  if (!(growth >= 1.0)) throw InvalidParameter("growth must be >= 1");
}

Stepper::Stepper(const ModelParams& params, GridPtr grid, const StepControl& ctrl,
                 std::optional<EllipticMethod> method)
    : params_(params),
      derived_(derive(params)),
      grid_(grid),
      ctrl_(ctrl),
      solver_(grid, method.value_or(HelmholtzSolver::default_method(*grid))) {
  params_.validate();
  ctrl_.validate();
}

std::pair<Field, Field> Stepper::elliptic_chemicals(const Field& u) const {
  Field v = solver_.solve(params_.beta, params_.alpha, u);
  Field w = solver_.solve(params_.delta, params_.gamma, u);
  clamp_rounding_negatives(v);
  clamp_rounding_negatives(w);
  return {std::move(v), std::move(w)};
}

Stepper::Chemicals Stepper::update_chemicals(const State& s, double dt) const {
  const auto& p = params_;
  const bool transformed = ctrl_.formulation == Formulation::Transformed;
  Chemicals c;
  if (p.tau == 0) {
    auto [v, w] = elliptic_chemicals(s.u);
    c.v = std::move(v);
    c.w = std::move(w);
    if (transformed) {
      Field rhs = derived_.zeta * s.u;
      for (std::size_t i = 0; i < rhs.size(); ++i) rhs.values[i] += derived_.sigma * c.v.values[i];
      c.z = solver_.solve(p.delta, 1.0, rhs);
    }
  } else {
    const double inv = 1.0 / dt;
    auto implicit = [&](const Field& old, double decay, double prod) {
      Field rhs(grid_);
      for (std::size_t i = 0; i < rhs.size(); ++i) rhs.values[i] = prod * s.u.values[i] + inv * old.values[i];
      Field next = solver_.solve(decay + inv, 1.0, rhs);
      clamp_rounding_negatives(next);
      return next;
    };
    c.v = implicit(s.v, p.beta, p.alpha);
    c.w = implicit(s.w, p.delta, p.gamma);
    if (transformed) {
      Field rhs(grid_);
      for (std::size_t i = 0; i < rhs.size(); ++i) {
        rhs.values[i] = derived_.zeta * s.u.values[i] + derived_.sigma * c.v.values[i] + inv * s.z.values[i];
      }
      c.z = solver_.solve(p.delta + inv, 1.0, rhs);
    }
  }
  if (!transformed) c.z = combined_potential(c.v, c.w, p);
  return c;
}

bool Stepper::drift(const Field& u, const Chemicals& c, double dt, Field& out, double& dt_admissible) const {
  const Grid& g = *grid_;
  const std::size_t n = g.size();
  std::vector<double> outflow(n, 0.0);
  // Per face: flux L→R = a·u_L − b·u_R with a, b ≥ 0.
  struct FaceFlux {
    std::size_t left, right;
    double a, b;
  };
  std::vector<FaceFlux> faces;
  faces.reserve(2 * n);
  const bool transformed = ctrl_.formulation == Formulation::Transformed;
  const double chi = params_.chi;
  const double xi = params_.xi;
  for_each_face(g, [&](std::size_t l, std::size_t r, double trans, int) {
    double a = 0.0;
    double b = 0.0;
    auto add = [&](double speed) {
      if (speed > 0.0) a += speed;
      else b -= speed;
    };
    if (transformed) {
      add(-trans * (c.z.values[r] - c.z.values[l]));
    } else {
      add(trans * chi * (c.v.values[r] - c.v.values[l]));
      add(-trans * xi * (c.w.values[r] - c.w.values[l]));
    }
    outflow[l] += a;
    outflow[r] += b;
    faces.push_back({l, r, a, b});
  });

  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, outflow[i] / g.cell_volume(i));
  dt_admissible = worst > 0.0 ? ctrl_.cfl_safety / worst : kInfinity;
  if (dt > dt_admissible) return false;

  std::vector<double> delta(n, 0.0);
  for (const auto& f : faces) {
    const double flux = f.a * u.values[f.left] - f.b * u.values[f.right];
    delta[f.left] -= flux;
    delta[f.right] += flux;
  }
  out = u;
  for (std::size_t i = 0; i < n; ++i) out.values[i] += dt * delta[i] / g.cell_volume(i);
  return true;
}

StepOutcome Stepper::step(const State& state, double dt) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParameter("dt must be > 0");
  StepOutcome result;
  Chemicals c = update_chemicals(state, dt);

  Field drifted;
  if (!drift(state.u, c, dt, drifted, result.dt_admissible)) return result;

  result.clamped = clamp_rounding_negatives(drifted);
  const double inv = 1.0 / dt;
  Field u = solver_.solve(inv, inv, drifted);
  result.clamped = std::max(result.clamped, clamp_rounding_negatives(u));
  if (!u.finite()) throw ConsistencyError("non-finite u after step");

  result.accepted = true;
  result.state = State{state.t + dt, std::move(u), std::move(c.v), std::move(c.w), std::move(c.z)};
  return result;
}

// ---------------------------------------------------------------------------

std::vector<double> geometric_ladder(double t_end, int levels, int uniform) {
  if (!(t_end > 0.0)) throw InvalidParameter("t_end must be > 0");
  if (levels < 0 || uniform < 0) throw InvalidParameter("ladder sizes must be >= 0");
  std::vector<double> t;
  for (int k = levels; k >= 1; --k) t.push_back(std::ldexp(t_end, -k));
  for (int j = 1; j <= uniform; ++j) {
    t.push_back(0.5 * t_end + 0.5 * t_end * static_cast<double>(j) / static_cast<double>(uniform + 1));
  }
  t.push_back(t_end);
  std::sort(t.begin(), t.end());
  return t;
}

State homogeneous_equilibrium(const GridPtr& grid, const ModelParams& params, double m) {
  const double u = m / grid->measure();
  return make_state(0.0, Field(grid, u), Field(grid, params.alpha * u / params.beta),
                    Field(grid, params.gamma * u / params.delta), params);
}

RunOutcome run(const State& initial, const ModelParams& params, const StepControl& ctrl, double t_end,
               std::vector<double> sample_times, const DiagnosticsConfig& diag, const SampleHook& hook,
               std::optional<EllipticMethod> method) {
  if (!(t_end > initial.t)) throw InvalidParameter("t_end must exceed the initial time");
  std::sort(sample_times.begin(), sample_times.end());
  sample_times.erase(std::unique(sample_times.begin(), sample_times.end()), sample_times.end());
  for (double s : sample_times) {
    if (!(s > initial.t && s <= t_end)) throw InvalidParameter("sample times must lie in (t0, t_end]");
  }
  if (sample_times.empty() || sample_times.back() != t_end) sample_times.push_back(t_end);

  const GridPtr grid = initial.u.grid;
  const Stepper stepper(params, grid, ctrl, method);

  RunOutcome out;
  out.blowup_threshold =
      ctrl.blowup_threshold > 0.0 ? ctrl.blowup_threshold : ctrl.blowup_factor * diag.scenario.m / grid->measure();

  State s = initial;
  double dt = ctrl.dt_init;
  double clamp_since_sample = 0.0;
  std::size_t next = 0;
  while (next < sample_times.size()) {
    const double target = sample_times[next];
    const double remaining = target - s.t;
    const bool landing = dt >= remaining;
    const double h = landing ? remaining : dt;

    StepOutcome o = stepper.step(s, h);
    if (!o.accepted) {
      ++out.rejected;
      if (o.dt_admissible < ctrl.dt_min) {
        out.status = RunStatus::StepUnderflow;
        break;
      }
      dt = o.dt_admissible < h * (1.0 - 1e-9) ? o.dt_admissible : 0.5 * h;
      continue;
    }

    s = std::move(o.state);
    if (landing) s.t = target;
    ++out.steps;
    clamp_since_sample = std::max(clamp_since_sample, o.clamped);
    out.max_clamp = std::max(out.max_clamp, o.clamped);
    if (!landing) dt = std::min(ctrl.dt_max, dt * ctrl.growth);
    dt = std::min(dt, std::max(o.dt_admissible, ctrl.dt_min));

    const double linf = s.u.max();
    if (linf >= out.blowup_threshold) {
      out.status = RunStatus::BlowupDetected;
      out.detection_time = s.t;
      break;
    }
    if (landing) {
      DiagnosticsRecord rec = record(s, diag);
      rec.clamp_max = clamp_since_sample;
      clamp_since_sample = 0.0;
      if (hook) hook(s, rec);
      out.series.push_back(std::move(rec));
      ++next;
    }
  }
  out.final_state = std::move(s);
  return out;
}

}  // namespace arks
