#pragma once

#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "arks/grid.hpp"
#include "arks/model.hpp"
#include "arks/state.hpp"

namespace arks {

// ---------------------------------------------------------------------------
// Test functions for weak-continuity probes

enum class TestFunction {
  Constant,  ///< φ ≡ 1
  Cosine,    ///< cos(π x₁ / L₁); radial grids: cos(π r / R)
  Gaussian,  ///< exp(−|x − c|² / (2·0.25²)) around the domain center (origin if radial)
};

std::string_view to_string(TestFunction f);
std::optional<TestFunction> parse_test_function(std::string_view name);
double evaluate(TestFunction f, const Grid& grid, double x, double y);
/// ∫ u φ on the grid.
double pair(const Field& u, TestFunction f);

// ---------------------------------------------------------------------------
// Per-sample functionals

struct DiagnosticsRecord {
  double t = 0.0;
  double mass_u = 0.0;
  double mass_v = 0.0;
  double mass_w = 0.0;
  double linf_u = 0.0;
  double entropy = 0.0;      ///< ∫ u ln u
  double dirichlet_z = 0.0;  ///< ½∫|∇z|²
  double energy_F = 0.0;     ///< ζ·entropy + dirichlet_z
  double fisher_u = 0.0;     ///< 4∫|∇√u|²
  double lap_z_sq = 0.0;     ///< ∫|Δz|²
  double grad_z_l4 = 0.0;    ///< ∫|∇z|⁴
  double taxis_l1 = 0.0;     ///< ‖u∇z‖_{L¹}
  double w1r_v = 0.0;
  double w1r_w = 0.0;
  /// (p, ∫u^p) for the configured exponents.
  std::vector<std::pair<double, double>> lp_u;
  /// Largest rounding clamp applied to u since the previous sample.
  double clamp_max = 0.0;
  /// ‖v(t) − v(0)‖_{W^{1,r}}, ‖w(t) − w(0)‖_{W^{1,r}}; zero when no reference is set.
  double w1r_dv = 0.0;
  double w1r_dw = 0.0;
  /// (test function name, ∫uφ).
  std::vector<std::pair<std::string, double>> phi;

  /// ∫u^p for a configured p; NaN when absent.
  double moment(double p) const;
  /// ∫uφ for a test function name; NaN when absent.
  double pairing(std::string_view name) const;
};

/// Default exponent set {q̂, 2, 5/2, n, 3q̂/(4q̂−3)} without duplicates.
std::vector<double> default_lp_exponents(const ScenarioConfig& cfg);

struct DiagnosticsConfig {
  ModelParams params;
  ScenarioConfig scenario;
  std::vector<double> p_values;
  std::vector<TestFunction> test_functions;
  /// Reference chemicals for the W^{1,r} distances (usually the t = 0 data).
  std::optional<Field> v_ref;
  std::optional<Field> w_ref;
};

/// Builds the standard configuration: default exponents, all test functions.
DiagnosticsConfig make_diagnostics_config(const ModelParams& params, const ScenarioConfig& cfg);

DiagnosticsRecord record(const State& state, const DiagnosticsConfig& cfg);

/// Entropy floor: u ln u with u clamped at 1e−300 and u = 0 contributing 0.
double entropy(const Field& u);
double fisher_information(const Field& u);

// ---------------------------------------------------------------------------
// CSV series (one row per sample)

void write_series_csv(std::ostream& os, std::span<const DiagnosticsRecord> series);
std::vector<DiagnosticsRecord> read_series_csv(std::istream& is);
/// Column names in output order for a given record layout.
std::vector<std::string> series_columns(const DiagnosticsRecord& layout);

// ---------------------------------------------------------------------------
// Verdicts

/// Result of one inequality check. `fitted_exponent` holds the measured
/// quantity (a slope for rate checks), `bound` the threshold it is compared to.
struct Verdict {
  std::string functional;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double fitted_exponent = std::numeric_limits<double>::quiet_NaN();
  double bound = std::numeric_limits<double>::quiet_NaN();
  bool pass = false;
  bool vacuous = false;
  std::map<std::string, double> metrics;
  std::string note;
};

struct TimeSeries {
  std::vector<double> t;
  std::vector<double> value;
};

/// Extracts (t, selector(record)) for records with t > 0.
template <class Selector>
TimeSeries extract(std::span<const DiagnosticsRecord> series, Selector&& selector) {
  TimeSeries out;
  for (const auto& r : series) {
    if (r.t <= 0.0) continue;
    out.t.push_back(r.t);
    out.value.push_back(selector(r));
  }
  return out;
}

/// Least-squares slope of ln(value) vs ln(t) over samples with t in
/// [t_lo, t_hi]. Throws InvalidSeries for fewer than 5 samples or a
/// nonpositive value in the window.
double fit_decay_exponent(const TimeSeries& series, double t_lo, double t_hi);

struct DecayCheck {
  double t_lo = 1e-4;
  double t_hi = 1e-1;
  double slack = 0.15;        ///< tolerance on the fitted exponent
  double ratio_limit = 10.0;  ///< max/min bound on the dampened quantity
};

/// Checks value(t) ≲ C t^{−claimed} in two modes, both recorded in metrics:
///  exponent mode: fitted slope ≥ −claimed − slack;
///  envelope mode: t^{claimed}·value has max/min ≤ ratio_limit over the
///  window and does not grow monotonically as t decreases.
/// `pass` is the disjunction of the two modes.
Verdict check_decay(std::string name, const TimeSeries& series, double claimed, const DecayCheck& opts);

/// Admissible dampening exponent λ ∈ (0, 2/3) with λ − 2/r > −1:
/// max(0.01, 2/r − 1 + 0.05), or the midpoint of (2/r − 1, 2/3) when that
/// choice would reach 2/3.
double admissible_lambda(double r);

struct DampenedCheck {
  double lambda = 0.0;
  double theta_min = 0.1;   ///< minimal exponent of the cumulative taxis integral
  double zeta = 0.0;        ///< weight of the Fisher term
  double t_lo = 1e-4;       ///< small-t window for the taxis fit
  double t_hi = 1e-1;
  double increments_t_hi = 1e-2;  ///< increments are compared on ladder intervals below this time
};

/// Trapezoidal accumulations over the sample ladder of
///   s^λ·fisher_u (weighted by ζ), s^λ·lap_z_sq, s^{2λ}·grad_z_l4, taxis_l1.
/// The first three pass when their per-interval increments on (0,
/// increments_t_hi] shrink geometrically toward t = 0 (max consecutive
/// ratio < 1, tail estimate reported); the taxis integral passes when its fitted exponent on the
/// small-t window is ≥ theta_min. The series should start with a t = 0 row.
std::vector<Verdict> check_dampened_integrals(std::span<const DiagnosticsRecord> series,
                                              const DampenedCheck& opts);

/// Cumulative trapezoidal integral ∫₀ᵗ taxis_l1 at every sample (t ascending,
/// first sample is the lower limit).
TimeSeries cumulative_taxis(std::span<const DiagnosticsRecord> series);

/// |∫u(t)φ − reference| must not increase as t decreases (deviations below
/// `floor` count as zero) and must be ≤ tol at the smallest sampled t.
Verdict check_weak_continuity(std::string name, const TimeSeries& pairing, double reference, double tol,
                              double floor);

/// Cross-family uniformity: at every common time, max/min of the family's
/// values (ignoring entries ≤ floor) is ≤ factor.
Verdict check_family_uniformity(std::string name, std::span<const TimeSeries> family, double factor,
                                double floor);

struct VerdictConfig {
  DecayCheck small_t{};                       ///< window [1e−4, 1e−1]
  DecayCheck energy{1e-3, 1e-1, 0.15, 10.0};  ///< exponent window of energy_F
  double theta_min = 0.1;
  double mass_rel_tol = 1e-11;
  double chem_mass_rel_tol = 1e-10;
  double w1r_factor = 2.0;
  double lq_factor = 2.0;
  double continuity_rel_tol = 1e-2;
  double increments_t_hi = 1e-2;
};

/// All verdicts applicable to one run given its scenario. `m` is the initial
/// mass, `v0_mass`/`w0_mass` the masses of the parabolic initial chemicals.
std::vector<Verdict> evaluate_run(std::span<const DiagnosticsRecord> series, const ModelParams& params,
                                  const ScenarioConfig& cfg, Scenario scenario, double v0_mass, double w0_mass,
                                  const VerdictConfig& vc = {});

}  // namespace arks
