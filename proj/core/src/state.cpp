#include "arks/state.hpp"

namespace arks {

Field combined_potential(const Field& v, const Field& w, const ModelParams& params) {
  Field z(v.grid);
  for (std::size_t i = 0; i < z.size(); ++i) z.values[i] = params.xi * w.values[i] - params.chi * v.values[i];
  return z;
}

State make_state(double t, Field u, Field v, Field w, const ModelParams& params) {
  Field z = combined_potential(v, w, params);
  return State{t, std::move(u), std::move(v), std::move(w), std::move(z)};
}

}  // namespace arks
