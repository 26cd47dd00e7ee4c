#pragma once

#include <string_view>

namespace arks {

/// Parameters of the attraction-repulsion system
///
///   u_t       = Δu − χ∇·(u∇v) + ξ∇·(u∇w)
///   τ v_t     = Δv + αu − βv
///   τ w_t     = Δw + γu − δw
///
/// with homogeneous Neumann conditions on all three components.
struct ModelParams {
  double chi = 0.0;    ///< attraction rate, >= 0
  double xi = 0.0;     ///< repulsion rate, >= 0
  double alpha = 1.0;  ///< production of v
  double beta = 1.0;   ///< decay of v
  double gamma = 1.0;  ///< production of w
  double delta = 1.0;  ///< decay of w
  int tau = 1;         ///< 1: parabolic chemicals, 0: elliptic chemicals

  /// Throws InvalidParameter naming the first violated constraint.
  void validate() const;
};

/// Combinations that govern the transformed system for z = ξw − χv:
///   τ z_t = Δz − δz + ζu + σv.
struct DerivedParams {
  double zeta = 0.0;   ///< ξγ − χα, net repulsion strength
  double sigma = 0.0;  ///< χ(β − δ)
};

DerivedParams derive(const ModelParams& params);

/// Experiment-level knobs that decide which regime a run belongs to.
struct ScenarioConfig {
  int n = 2;                 ///< spatial dimension, 1..3
  double m = 1.0;            ///< total initial mass
  double c_s2 = 1.0;         ///< stand-in for the domain constant of the S2 threshold; not certified
  double r = 1.5;            ///< Sobolev exponent for chemical diagnostics, in (6/5, 2)
  double u_exponent = 2.0;   ///< integrability exponent of u0 in (1, 2]; 2 when u0 is a measure

  void validate() const;
};

enum class Scenario { S1, S2, S3, Unclassified };

std::string_view to_string(Scenario s);

/// S1: τ=1, n=2, ζ ≥ 0.  S2: τ=0, n=2, ζ ≥ −c_s2/m.
/// S3: τ=0, n=3, ζ ≥ 0 and u0 a density with exponent in (1, 2).
/// Anything else is Unclassified; such runs are still allowed.
Scenario classify_scenario(const ModelParams& params, const ScenarioConfig& cfg, bool has_density);

}  // namespace arks
