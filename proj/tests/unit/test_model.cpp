#include "doctest.h"
#include "generators.hpp"

#include "arks/error.hpp"
#include "arks/model.hpp"

using namespace arks;

TEST_CASE("derived parameters") {
  auto d = derive({.chi = 1, .xi = 2, .alpha = 1, .beta = 1, .gamma = 1, .delta = 1});
  CHECK(d.zeta == 1.0);
  CHECK(d.sigma == 0.0);

  d = derive({.chi = 0, .xi = 0, .alpha = 3, .beta = 7, .gamma = 5, .delta = 0.5});
  CHECK(d.zeta == 0.0);
  CHECK(d.sigma == 0.0);

  d = derive({.chi = 2, .xi = 1, .alpha = 3, .beta = 5, .gamma = 1, .delta = 2});
  CHECK(d.zeta == -5.0);
  CHECK(d.sigma == 6.0);
}

TEST_CASE("parameter validation") {
  ModelParams p;
  CHECK_NOTHROW(p.validate());
  p.chi = -1;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p = {};
  p.delta = 0;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p = {};
  p.tau = 2;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);

  ScenarioConfig s;
  CHECK_NOTHROW(s.validate());
  s.r = 1.2;
  CHECK_THROWS_AS(s.validate(), InvalidParameter);
  s = {};
  s.u_exponent = 1.0;
  CHECK_THROWS_AS(s.validate(), InvalidParameter);
  s = {};
  s.m = 0;
  CHECK_THROWS_AS(s.validate(), InvalidParameter);
}

TEST_CASE("scenario classification") {
  ModelParams p{.chi = 1.5, .xi = 2, .alpha = 1, .beta = 1, .gamma = 1, .delta = 1, .tau = 1};
  ScenarioConfig s{.n = 2, .m = 1};
  CHECK(derive(p).zeta == 0.5);
  CHECK(classify_scenario(p, s, false) == Scenario::S1);

  p = {.chi = 1.1, .xi = 1, .alpha = 1, .beta = 1, .gamma = 1, .delta = 1, .tau = 0};
  s = {.n = 2, .m = 5, .c_s2 = 1};
  CHECK(derive(p).zeta == doctest::Approx(-0.1));
  CHECK(classify_scenario(p, s, false) == Scenario::S2);
  s.m = 20;
  CHECK(classify_scenario(p, s, false) == Scenario::Unclassified);

  p = {.chi = 1, .xi = 2, .tau = 1};
  s = {.n = 3, .m = 1};
  CHECK(classify_scenario(p, s, true) == Scenario::Unclassified);

  p.tau = 0;
  s.u_exponent = 1.5;
  CHECK(classify_scenario(p, s, true) == Scenario::S3);
  CHECK(classify_scenario(p, s, false) == Scenario::Unclassified);
  s.u_exponent = 2.0;
  CHECK(classify_scenario(p, s, true) == Scenario::Unclassified);

  CHECK(to_string(Scenario::S2) == "S2");
}

TEST_CASE("property: scaling the taxis rates scales zeta and keeps the sign class") {
  testing::Gen gen(11);
  for (int trial = 0; trial < 500; ++trial) {
    ModelParams p{.chi = gen.uniform(0, 3), .xi = gen.uniform(0, 3), .alpha = gen.uniform(0.1, 3),
                  .beta = gen.uniform(0.1, 3), .gamma = gen.uniform(0.1, 3), .delta = gen.uniform(0.1, 3),
                  .tau = gen.integer(0, 1)};
    const double c = gen.uniform(0.01, 100);
    ModelParams q = p;
    q.chi *= c;
    q.xi *= c;
    const auto a = derive(p);
    const auto b = derive(q);
    CHECK(b.zeta == doctest::Approx(c * a.zeta).epsilon(1e-12).scale(1));
    CHECK(b.sigma == doctest::Approx(c * a.sigma).epsilon(1e-12).scale(1));

    ScenarioConfig s{.n = gen.integer(2, 3), .m = gen.uniform(0.1, 10), .u_exponent = 1.5};
    const auto ca = classify_scenario(p, s, true);
    const auto cb = classify_scenario(q, s, true);
    CHECK((ca == Scenario::S1) == (cb == Scenario::S1));
    CHECK((ca == Scenario::S3) == (cb == Scenario::S3));

    const auto again = derive(p);
    CHECK(again.zeta == a.zeta);
    CHECK(again.sigma == a.sigma);
  }
}
