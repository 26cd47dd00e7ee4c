#pragma once

#include "arks/grid.hpp"
#include "arks/model.hpp"

namespace arks {

/// Solution snapshot. u, v, w are nonnegative; z = ξw − χv is carried
/// alongside (derived in the primitive formulation, evolved in the
/// transformed one, equal up to rounding either way).
struct State {
  double t = 0.0;
  Field u;
  Field v;
  Field w;
  Field z;
};

/// Builds a state with z computed from v and w.
State make_state(double t, Field u, Field v, Field w, const ModelParams& params);

/// ξw − χv.
Field combined_potential(const Field& v, const Field& w, const ModelParams& params);

}  // namespace arks
