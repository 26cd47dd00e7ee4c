#include <cmath>
#include <numbers>

#include "doctest.h"
#include "generators.hpp"

#include "arks/error.hpp"
#include "arks/semigroup.hpp"

using namespace arks;
using std::numbers::pi;

TEST_CASE("constants are fixed points") {
  for (auto g : {share(Grid::interval(2.0, 32)), share(Grid::rectangle(1, 1, 16, 16)),
                 share(Grid::radial_disk(1, 32)), share(Grid::radial_ball(1, 32))}) {
    SemigroupPlan plan(g);
    const auto out = plan.apply(Field(g, 2.5), 0.3);
    for (double v : out.values) CHECK(v == doctest::Approx(2.5).epsilon(1e-12));
    const auto damped = plan.apply(Field(g, 2.5), 0.3, 2.0);
    for (double v : damped.values) CHECK(v == doctest::Approx(2.5 * std::exp(-0.6)).epsilon(1e-12));
  }
}

TEST_CASE("cosine eigenmode decays at the discrete eigenvalue") {
  const double length = 2.0;
  const int cells = 64;
  auto g = share(Grid::interval(length, cells));
  SemigroupPlan plan(g);
  auto f = Field::sample(g, [&](double x, double) { return std::cos(pi * x / length); });
  const double h = length / cells;
  const double lam_h = 4.0 / (h * h) * std::pow(std::sin(pi / (2.0 * cells)), 2);
  for (double t : {1e-3, 0.05, 0.7}) {
    const auto out = plan.apply(f, t);
    double err = 0;
    for (std::size_t i = 0; i < f.size(); ++i) err = std::max(err, std::abs(out[i] - std::exp(-lam_h * t) * f[i]));
    CHECK(err <= 1e-10);
  }
  // The continuum rate is recovered to O(h²).
  CHECK(lam_h == doctest::Approx(pi * pi / (length * length)).epsilon(1e-3));
}

TEST_CASE("time zero and invalid arguments") {
  auto g = share(Grid::interval(1.0, 16));
  SemigroupPlan plan(g);
  testing::Gen gen(1);
  auto f = gen.field(g);
  CHECK(plan.apply(f, 0.0).values == f.values);
  CHECK_THROWS_AS(plan.apply(f, -1e-3), InvalidParameter);
  CHECK_THROWS_AS(plan.apply(f, 0.1, -1.0), InvalidParameter);
  CHECK_THROWS_AS(SemigroupPlan(share(Grid::radial_disk(1, 8)), SemigroupMethod::SpectralCosine), MisuseError);
  CHECK_THROWS_AS(SemigroupPlan(share(Grid::rectangle(1, 1, 8, 8)), SemigroupMethod::ImplicitSteps), MisuseError);
}

TEST_CASE("property: semigroup law, mass, positivity, constants") {
  testing::Gen gen(29);
  for (int trial = 0; trial < 60; ++trial) {
    auto g = gen.grid();
    SemigroupPlan plan(g);
    auto f = gen.field(g, 0.0, 2.0);
    const double s = gen.uniform(1e-4, 0.05), t = gen.uniform(1e-4, 0.05);
    const double kappa = gen.integer(0, 1) ? 0.0 : gen.uniform(0, 3);

    const double m = integrate(f);
    const auto one = plan.apply(f, s);
    CHECK(integrate(one) == doctest::Approx(m).epsilon(1e-12));
    CHECK(one.min() >= 0.0);

    const auto c = gen.uniform(-1, 1);
    const auto shifted = plan.apply(f + Field(g, c), s, kappa);
    const auto base = plan.apply(f, s, kappa);
    for (std::size_t i = 0; i < f.size(); ++i) {
      CHECK(shifted[i] == doctest::Approx(base[i] + c * std::exp(-kappa * s)).epsilon(1e-11).scale(1));
    }

    if (plan.method() == SemigroupMethod::SpectralCosine) {
      const auto two = plan.apply(plan.apply(f, s, kappa), t, kappa);
      const auto direct = plan.apply(f, s + t, kappa);
      CHECK(testing::sup_diff(two, direct) <= 1e-11);
    }
  }
}

TEST_CASE("implicit substeps approach the spectral semigroup") {
  auto g = share(Grid::interval(1.0, 64));
  SemigroupPlan spectral(g, SemigroupMethod::SpectralCosine);
  testing::Gen gen(31);
  auto f = gen.field(g);
  const auto exact = spectral.apply(f, 0.02);
  const double e1 = testing::sup_diff(SemigroupPlan(g, SemigroupMethod::ImplicitSteps, 1e-4).apply(f, 0.02), exact);
  const double e2 = testing::sup_diff(SemigroupPlan(g, SemigroupMethod::ImplicitSteps, 5e-5).apply(f, 0.02), exact);
  CHECK(e1 < 1e-3);
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("smoothing rates") {
  // n = 1: the L¹ → L^∞ exponent is −1/2, L¹ → L² is −1/4.
  SemigroupPlan line(share(Grid::interval(1.0, 1024)));
  CHECK(measure_smoothing_rate(line, 1, kInfinity) == doctest::Approx(-0.5).epsilon(0.1));
  CHECK(measure_smoothing_rate(line, 1, 2) == doctest::Approx(-0.25).epsilon(0.1));
  CHECK(std::abs(measure_smoothing_rate(line, 2, 2)) < 0.05);

  SemigroupPlan square(share(Grid::rectangle(1, 1, 128, 128)));
  CHECK(measure_smoothing_rate(square, 1, kInfinity) == doctest::Approx(-1.0).epsilon(0.1));

  SemigroupPlan ball(share(Grid::radial_ball(1.0, 512)));
  CHECK(measure_smoothing_rate(ball, 1, kInfinity) == doctest::Approx(-1.5).epsilon(0.1));

  CHECK_THROWS_AS(measure_smoothing_rate(line, 2, 1), InvalidParameter);
}
