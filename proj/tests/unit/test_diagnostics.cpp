#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "generators.hpp"

#include "arks/diagnostics.hpp"
#include "arks/error.hpp"
#include "arks/initial_data.hpp"
#include "arks/stepper.hpp"

using namespace arks;
using std::numbers::pi;

namespace {

TimeSeries power_series(double exponent, double t_lo = 1e-4, double t_hi = 1e-1, int levels = 12,
                        double (*perturb)(double) = nullptr) {
  TimeSeries s;
  for (int k = 0; k < levels; ++k) {
    const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(k) / (levels - 1));
    s.t.push_back(t);
    s.value.push_back(std::pow(t, exponent) * (perturb ? perturb(t) : 1.0));
  }
  return s;
}

ScenarioConfig unit_scenario(int n = 2, double m = 1.0) { return {.n = n, .m = m}; }

const Verdict& find(const std::vector<Verdict>& vs, std::string_view name) {
  for (const auto& v : vs) {
    if (v.functional == name) return v;
  }
  FAIL("missing verdict " << name);
  return vs.front();
}

}  // namespace

TEST_CASE("log-log fit") {
  CHECK(fit_decay_exponent(power_series(-1.0), 1e-4, 1e-1) == doctest::Approx(-1.0).epsilon(1e-12));
  auto flat = power_series(0.0);
  for (auto& v : flat.value) v = 7.0;
  CHECK(std::abs(fit_decay_exponent(flat, 1e-4, 1e-1)) <= 1e-12);
  const auto wobble = power_series(-0.5, 1e-4, 1e-1, 30, [](double t) { return 1.0 + 0.01 * std::sin(std::log(t)); });
  CHECK(fit_decay_exponent(wobble, 1e-4, 1e-1) == doctest::Approx(-0.5).epsilon(0.04));
  CHECK(std::abs(fit_decay_exponent(wobble, 1e-4, 1e-1) + 0.5) <= 0.02);

  CHECK_THROWS_AS(fit_decay_exponent(power_series(-1.0, 1e-4, 1e-1, 4), 1e-4, 1e-1), InvalidSeries);
  auto bad = power_series(-1.0);
  bad.value[3] = 0.0;
  CHECK_THROWS_AS(fit_decay_exponent(bad, 1e-4, 1e-1), InvalidSeries);
}

TEST_CASE("decay checks") {
  const DecayCheck opts;
  auto ok = check_decay("x", power_series(-0.5), 0.5, opts);
  CHECK(ok.pass);
  CHECK(ok.metrics.at("exponent_pass") == 1.0);
  CHECK(ok.metrics.at("envelope_pass") == 1.0);
  CHECK(ok.metrics.at("envelope_ratio") == doctest::Approx(1.0));

  auto bad = check_decay("x", power_series(-1.0), 0.5, opts);
  CHECK_FALSE(bad.pass);
  CHECK(bad.metrics.at("monotone_divergence") == 1.0);

  // Slower decay than claimed passes the exponent test.
  auto slow = check_decay("x", power_series(-0.2), 0.5, opts);
  CHECK(slow.metrics.at("exponent_pass") == 1.0);

  auto sparse = check_decay("x", power_series(-0.5, 1e-4, 1e-1, 3), 0.5, opts);
  CHECK(sparse.metrics.at("exponent_pass") == 0.0);
  CHECK_FALSE(sparse.note.empty());
}

TEST_CASE("admissible dampening exponent") {
  CHECK(admissible_lambda(1.5) == doctest::Approx(2.0 / 1.5 - 1.0 + 0.05));
  CHECK(admissible_lambda(1.95) == doctest::Approx(2.0 / 1.95 - 1.0 + 0.05));
  CHECK(admissible_lambda(1.21) == doctest::Approx(0.5 * (2.0 / 1.21 - 1.0 + 2.0 / 3.0)));
  testing::Gen gen(101);
  for (int k = 0; k < 1000; ++k) {
    const double r = gen.uniform(1.2 + 1e-9, 2.0);
    const double lam = admissible_lambda(r);
    CHECK(lam > 0.0);
    CHECK(lam < 2.0 / 3.0);
    CHECK(lam - 2.0 / r > -1.0);
  }
}

TEST_CASE("default exponents") {
  const auto a = default_lp_exponents({.n = 3, .u_exponent = 1.5});
  CHECK(a == std::vector<double>{1.5, 2.0, 2.5, 3.0});
  const auto b = default_lp_exponents({.n = 2, .u_exponent = 2.0});
  CHECK(b == std::vector<double>{2.0, 2.5, 1.2});
}

TEST_CASE("entropy and energy of simple fields") {
  auto sq = share(Grid::rectangle(1, 1, 16, 16));
  CHECK(entropy(Field(sq, 1.0)) == 0.0);
  CHECK(entropy(Field(sq, 0.0)) == 0.0);

  ModelParams p{.chi = 1, .xi = 2, .tau = 0};
  auto rect = share(Grid::rectangle(2, 1.5, 12, 10));
  const double m = 4.0;
  const auto eq = homogeneous_equilibrium(rect, p, m);
  const auto rec = record(eq, make_diagnostics_config(p, unit_scenario(2, m)));
  CHECK(rec.dirichlet_z == 0.0);
  CHECK(rec.energy_F == doctest::Approx(derive(p).zeta * m * std::log(m / 3.0)).epsilon(1e-13));
  CHECK(rec.fisher_u == 0.0);
  CHECK(rec.taxis_l1 == 0.0);
}

TEST_CASE("entropy matches an extended-precision quadrature") {
  auto g = share(Grid::rectangle(1, 1, 200, 200));
  const auto bump = [](double x, double y) {
    const double r = std::hypot(x - 0.5, y - 0.5);
    return 2.0 * 0.5 * (1.0 - std::tanh((r - 0.25) / 0.03)) + 1e-3;
  };
  const auto u = Field::sample(g, bump);
  long double oracle = 0;
  const long double h = 1.0L / 200;
  for (int j = 0; j < 200; ++j) {
    for (int i = 0; i < 200; ++i) {
      const long double v = bump((i + 0.5) / 200.0, (j + 0.5) / 200.0);
      oracle += v * std::log(v) * h * h;
    }
  }
  CHECK(entropy(u) == doctest::Approx(static_cast<double>(oracle)).epsilon(1e-10));
}

TEST_CASE("property: record identities on random states") {
  testing::Gen gen(103);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = gen.grid();
    ModelParams p{.chi = gen.uniform(0, 2), .xi = gen.uniform(0, 2), .tau = gen.integer(0, 1)};
    const auto u = gen.field(g, 0.1, 3.0);
    const auto v = gen.field(g, 0.0, 1.0);
    const auto w = gen.field(g, 0.0, 1.0);
    const auto s = make_state(0.3, u, v, w, p);
    auto cfg = make_diagnostics_config(p, unit_scenario(g->dimension(), integrate(u)));
    cfg.v_ref = v;
    const auto rec = record(s, cfg);
    CHECK(rec.energy_F == derive(p).zeta * rec.entropy + rec.dirichlet_z);
    CHECK(rec.mass_u == integrate(u));
    CHECK(rec.dirichlet_z == doctest::Approx(0.5 * gradient_sq_integral(s.z)));
    CHECK(rec.pairing("constant") == doctest::Approx(rec.mass_u).epsilon(1e-14));
    CHECK(rec.w1r_dv == 0.0);
    CHECK(rec.linf_u == u.max());
    for (const auto& [pv, moment] : rec.lp_u) {
      CHECK(moment == doctest::Approx(std::pow(lp_norm(u, pv), pv)).epsilon(1e-12));
    }
    CHECK(std::isnan(rec.moment(17.0)));
    CHECK(std::isnan(rec.pairing("nope")));
  }
}

TEST_CASE("series CSV round-trips exactly") {
  testing::Gen gen(107);
  std::vector<DiagnosticsRecord> series;
  for (int k = 0; k < 20; ++k) {
    DiagnosticsRecord r;
    r.t = k * 0.01;
    r.mass_u = gen.uniform(0, 10);
    r.entropy = gen.uniform(-1, 1) * 1e-17;
    r.energy_F = gen.uniform(-1e5, 1e5);
    r.linf_u = 1.0 / 3.0;
    r.lp_u = {{2.0, gen.uniform()}, {2.5, gen.uniform()}, {1.2, gen.uniform()}};
    r.phi = {{"constant", gen.uniform()}, {"gaussian", gen.uniform()}};
    r.clamp_max = k == 3 ? 1e-300 : 0.0;
    series.push_back(r);
  }
  std::stringstream ss;
  write_series_csv(ss, series);
  const auto text = ss.str();
  CHECK(text.rfind("t,mass_u,mass_v,mass_w,linf_u,entropy,", 0) == 0);
  CHECK(text.find("lp_u_2.5") != std::string::npos);
  CHECK(text.find("phi_gaussian") != std::string::npos);
  const auto back = read_series_csv(ss);
  REQUIRE(back.size() == series.size());
  for (std::size_t k = 0; k < series.size(); ++k) {
    CHECK(back[k].t == series[k].t);
    CHECK(back[k].entropy == series[k].entropy);
    CHECK(back[k].energy_F == series[k].energy_F);
    CHECK(back[k].clamp_max == series[k].clamp_max);
    CHECK(back[k].lp_u == series[k].lp_u);
    CHECK(back[k].phi == series[k].phi);
  }
  std::stringstream again;
  write_series_csv(again, back);
  CHECK(again.str() == text);

  std::stringstream bad("t,mass_u,bogus\n0,1,2\n");
  CHECK_THROWS_AS(read_series_csv(bad), InvalidSeries);
  CHECK(series_columns(series[0]).front() == "t");
}

TEST_CASE("dampened integrals") {
  std::vector<DiagnosticsRecord> series;
  for (int k = 20; k >= 0; --k) {
    DiagnosticsRecord r;
    r.t = std::ldexp(0.1, -k);
    r.fisher_u = 1.0 / r.t;
    r.lap_z_sq = std::pow(r.t, -0.9);
    r.grad_z_l4 = std::pow(r.t, -1.2);
    r.taxis_l1 = std::pow(r.t, -0.5);
    series.push_back(r);
  }
  series.insert(series.begin(), DiagnosticsRecord{});

  DampenedCheck opts{.lambda = 0.3, .zeta = 1.0};
  const auto vs = check_dampened_integrals(series, opts);
  REQUIRE(vs.size() == 4);
  CHECK(find(vs, "fisher_dampened").pass);
  CHECK(find(vs, "lap_z_dampened").pass);
  CHECK(find(vs, "grad_z_l4_dampened").pass);
  CHECK(find(vs, "taxis_integral").pass);
  CHECK(find(vs, "taxis_integral").fitted_exponent == doctest::Approx(0.5).epsilon(0.05));

  // s^λ·s^{-1.5} is not integrable at zero.
  for (auto& r : series) r.fisher_u = r.t > 0 ? std::pow(r.t, -1.5) : 0.0;
  CHECK_FALSE(find(check_dampened_integrals(series, opts), "fisher_dampened").pass);

  opts.zeta = 0.0;
  const auto& fisher = find(check_dampened_integrals(series, opts), "fisher_dampened");
  CHECK(fisher.vacuous);
  CHECK(fisher.pass);

  const auto cum = cumulative_taxis(series);
  CHECK(cum.t.front() == 0.0);
  CHECK(cum.value.front() == 0.0);
  CHECK(std::is_sorted(cum.value.begin(), cum.value.end()));
}

TEST_CASE("pure diffusion: zero taxis, bounded weak-continuity deviation") {
  auto g = share(Grid::rectangle(1, 1, 48, 48));
  ModelParams p{.chi = 0, .xi = 0, .tau = 1};
  const double m = 2.0;
  auto u0 = mollify_measure({.atoms = {{{0.5, 0.5}, m}}}, 1e-3, g);
  const auto cfg = make_diagnostics_config(p, unit_scenario(2, m));
  const auto init = make_state(0.0, u0, Field(g, 0.0), Field(g, 0.0), p);
  auto out = run(init, p, {}, 0.1, geometric_ladder(0.1, 12), cfg);
  REQUIRE(out.status == RunStatus::Completed);
  const double ref_cos = pair(u0, TestFunction::Cosine);
  for (const auto& r : out.series) {
    CHECK(r.taxis_l1 == 0.0);
    CHECK(std::abs(r.pairing("constant") - m) <= 1e-11 * m);
    CHECK(std::abs(r.pairing("cosine") - ref_cos) <= pi * pi * m * r.t);
  }
  out.series.insert(out.series.begin(), record(init, cfg));
  const auto vs = check_dampened_integrals(out.series, {.lambda = 0.3, .zeta = 0.0});
  CHECK(find(vs, "taxis_integral").pass);
  CHECK(find(vs, "taxis_integral").vacuous);
}

TEST_CASE("weak continuity and family uniformity") {
  TimeSeries s;
  for (int k = 10; k >= 0; --k) {
    s.t.push_back(std::ldexp(0.1, -k));
    s.value.push_back(1.0 + s.t.back());
  }
  CHECK(check_weak_continuity("phi", s, 1.0, 1e-3, 0.0).pass);
  CHECK_FALSE(check_weak_continuity("phi", s, 1.0, 1e-5, 0.0).pass);
  auto bumpy = s;
  bumpy.value[2] = 1.5;
  CHECK_FALSE(check_weak_continuity("phi", bumpy, 1.0, 1e-3, 0.0).pass);
  // Deviations under the floor are treated as exact.
  auto flat = s;
  for (auto& v : flat.value) v = 1.0 + 1e-14 * (1 + std::sin(v * 1e3));
  CHECK(check_weak_continuity("phi", flat, 1.0, 1e-3, 1e-12).pass);

  std::vector<TimeSeries> fam{s, s, s};
  for (auto& v : fam[1].value) v *= 1.5;
  CHECK(check_family_uniformity("f", fam, 2.0, 0.0).pass);
  for (auto& v : fam[2].value) v *= 3.0;
  const auto bad = check_family_uniformity("f", fam, 2.0, 0.0);
  CHECK_FALSE(bad.pass);
  CHECK(bad.fitted_exponent == doctest::Approx(3.0));
}

TEST_CASE("evaluate_run flags a mass drift") {
  auto g = share(Grid::rectangle(1, 1, 32, 32));
  ModelParams p{.chi = 0, .xi = 0, .tau = 0};
  const auto cfg = make_diagnostics_config(p, unit_scenario(2, 1.0));
  auto u0 = mollify_measure({.atoms = {{{0.5, 0.5}, 1.0}}}, 1e-3, g);
  Stepper st(p, g, {});
  auto [v, w] = st.elliptic_chemicals(u0);
  const auto init = make_state(0.0, u0, v, w, p);
  auto out = run(init, p, {}, 0.1, geometric_ladder(0.1, 12), cfg);
  out.series.insert(out.series.begin(), record(init, cfg));
  const ScenarioConfig sc = unit_scenario(2, integrate(u0));
  auto vs = evaluate_run(out.series, p, sc, Scenario::S2, 0.0, 0.0);
  CHECK(find(vs, "mass_u").pass);
  CHECK(find(vs, "mass_v").pass);
  CHECK(find(vs, "lp_u_2").pass);

  out.series[5].mass_u *= 1.0 + 1e-6;
  vs = evaluate_run(out.series, p, sc, Scenario::S2, 0.0, 0.0);
  CHECK_FALSE(find(vs, "mass_u").pass);
}
