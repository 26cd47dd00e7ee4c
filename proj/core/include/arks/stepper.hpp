#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "arks/diagnostics.hpp"
#include "arks/elliptic.hpp"
#include "arks/grid.hpp"
#include "arks/model.hpp"
#include "arks/state.hpp"

namespace arks {

enum class Formulation {
  Primitive,    ///< (u, v, w); z recomputed from v and w
  Transformed,  ///< (u, z, v); z evolved by its own equation
};

std::string_view to_string(Formulation f);
std::optional<Formulation> parse_formulation(std::string_view name);

struct StepControl {
  double dt_init = 1e-6;
  double dt_min = 1e-12;
  double dt_max = 1e-3;
  double cfl_safety = 0.9;
  /// L∞ cap on u; 0 selects blowup_factor·m/|Ω|.
  double blowup_threshold = 0.0;
  double blowup_factor = 1e6;
  double growth = 1.2;
  Formulation formulation = Formulation::Transformed;

  void validate() const;
};

enum class RunStatus { Completed, BlowupDetected, StepUnderflow };

std::string_view to_string(RunStatus s);

struct StepOutcome {
  bool accepted = false;
  State state;                ///< valid when accepted
  double dt_admissible = 0.0; ///< largest positivity-safe dt for this state
  double clamped = 0.0;       ///< largest rounding clamp applied to u
};

/// One IMEX step: chemicals first from u at the start of the step, then an
/// explicit upwind drift of u followed by implicit diffusion.
class Stepper {
 public:
  Stepper(const ModelParams& params, GridPtr grid, const StepControl& ctrl,
          std::optional<EllipticMethod> method = std::nullopt);

  const ModelParams& params() const noexcept { return params_; }
  const StepControl& control() const noexcept { return ctrl_; }
  const HelmholtzSolver& solver() const noexcept { return solver_; }

  /// Rejects (accepted = false) when dt exceeds the admissible step for
  /// the drift; the caller retries with a smaller dt.
  StepOutcome step(const State& state, double dt) const;

  /// Chemical fields consistent with u when τ = 0 (Helmholtz solves).
  std::pair<Field, Field> elliptic_chemicals(const Field& u) const;

 private:
  struct Chemicals {
    Field v, w, z;
  };
  Chemicals update_chemicals(const State& s, double dt) const;
  /// Explicit upwind drift; returns false with the admissible dt when dt is too large.
  bool drift(const Field& u, const Chemicals& c, double dt, Field& out, double& dt_admissible) const;

  ModelParams params_;
  DerivedParams derived_;
  GridPtr grid_;
  StepControl ctrl_;
  HelmholtzSolver solver_;
};

struct RunOutcome {
  RunStatus status = RunStatus::Completed;
  State final_state;
  std::vector<DiagnosticsRecord> series;
  double detection_time = 0.0;  ///< time at which the L∞ cap was hit
  long steps = 0;
  long rejected = 0;
  double max_clamp = 0.0;
  double blowup_threshold = 0.0;
};

using SampleHook = std::function<void(const State&, const DiagnosticsRecord&)>;

/// Adaptive loop from `initial` to t_end. Every sample time in
/// (initial.t, t_end] is hit exactly; diagnostics are recorded there only.
/// An empty sample list samples t_end alone.
RunOutcome run(const State& initial, const ModelParams& params, const StepControl& ctrl, double t_end,
               std::vector<double> sample_times, const DiagnosticsConfig& diag,
               const SampleHook& hook = {}, std::optional<EllipticMethod> method = std::nullopt);

/// t_end·2^{−k} for k = levels..0 (ascending), followed by `uniform` evenly
/// spaced times in (t_end/2, t_end) when uniform > 0.
std::vector<double> geometric_ladder(double t_end, int levels = 20, int uniform = 0);

/// Homogeneous equilibrium u = m/|Ω|, v = αm/(β|Ω|), w = γm/(δ|Ω|).
State homogeneous_equilibrium(const GridPtr& grid, const ModelParams& params, double m);

}  // namespace arks
