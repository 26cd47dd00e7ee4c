#include "arks/model.hpp"

#include <cmath>
#include <string>

#include "arks/error.hpp"

namespace arks {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidParameter(message);
}

}  // namespace

void ModelParams::validate() const {
  require(std::isfinite(chi) && chi >= 0.0, "chi must be >= 0");
  require(std::isfinite(xi) && xi >= 0.0, "xi must be >= 0");
  require(std::isfinite(alpha) && alpha > 0.0, "alpha must be > 0");
  require(std::isfinite(beta) && beta > 0.0, "beta must be > 0");
  require(std::isfinite(gamma) && gamma > 0.0, "gamma must be > 0");
  require(std::isfinite(delta) && delta > 0.0, "delta must be > 0");
  require(tau == 0 || tau == 1, "tau must be 0 or 1");
}

DerivedParams derive(const ModelParams& params) {
  return DerivedParams{
      .zeta = params.xi * params.gamma - params.chi * params.alpha,
      .sigma = params.chi * (params.beta - params.delta),
  };
}

void ScenarioConfig::validate() const {
  require(n >= 1 && n <= 3, "n must be 1, 2 or 3");
  require(std::isfinite(m) && m > 0.0, "m must be > 0");
  require(std::isfinite(c_s2) && c_s2 > 0.0, "c_s2 must be > 0");
  require(r > 1.2 && r < 2.0, "r must lie in (6/5, 2)");
  require(u_exponent > 1.0 && u_exponent <= 2.0, "u_exponent must lie in (1, 2]");
}

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::S1: return "S1";
    case Scenario::S2: return "S2";
    case Scenario::S3: return "S3";
    case Scenario::Unclassified: return "Unclassified";
  }
  return "Unclassified";
}

Scenario classify_scenario(const ModelParams& params, const ScenarioConfig& cfg, bool has_density) {
  const double zeta = derive(params).zeta;
  if (params.tau == 1 && cfg.n == 2 && zeta >= 0.0) return Scenario::S1;
  if (params.tau == 0 && cfg.n == 2 && zeta >= -cfg.c_s2 / cfg.m) return Scenario::S2;
  if (params.tau == 0 && cfg.n == 3 && zeta >= 0.0 && has_density && cfg.u_exponent > 1.0 &&
      cfg.u_exponent < 2.0) {
    return Scenario::S3;
  }
  return Scenario::Unclassified;
}

}  // namespace arks
