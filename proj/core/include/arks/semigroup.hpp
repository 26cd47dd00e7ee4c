#pragma once

#include <memory>

#include "arks/grid.hpp"

namespace arks {

class CosineTransform;

enum class SemigroupMethod {
  SpectralCosine,  ///< exact (to rounding) on interval/rectangle grids
  ImplicitSteps,   ///< implicit Euler substeps on single-axis grids (interval, radial)
};

/// Discrete Neumann heat semigroup e^{t(Δ_h − κ)} on one grid.
/// Immutable after construction; `apply` is reentrant.
class SemigroupPlan {
 public:
  /// Spectral on tensor grids, implicit substeps on radial grids.
  explicit SemigroupPlan(GridPtr grid);
  /// `max_substep` bounds the implicit Euler substep; 0 selects h²/4.
  SemigroupPlan(GridPtr grid, SemigroupMethod method, double max_substep = 0.0);

  SemigroupMethod method() const noexcept { return method_; }
  const GridPtr& grid() const noexcept { return grid_; }
  double max_substep() const noexcept { return max_substep_; }

  /// e^{−κt} e^{tΔ_h} f. t = 0 returns f unchanged. For nonnegative f the
  /// output is clamped per clamp_rounding_negatives and the clamp magnitude
  /// is stored in *clamped when given.
  Field apply(const Field& f, double t, double kappa = 0.0, double* clamped = nullptr) const;

 private:
  GridPtr grid_;
  SemigroupMethod method_;
  double max_substep_ = 0.0;
  std::shared_ptr<const CosineTransform> transform_;
};

/// Options for measure_smoothing_rate; the defaults fit the pre-saturation
/// window of a unit-scale domain.
struct SmoothingRateOptions {
  double t_lo = 1e-4;
  double t_hi = 1e-2;
  int samples = 9;
};

/// Empirical exponent of the L^p → L^q smoothing estimate
/// ‖e^{tΔ}f‖_q ≲ t^{−(n/2)(1/p − 1/q)} ‖f‖_p.
///
/// Starts from unit mass in the cell nearest the domain center (the origin
/// for radial grids) and, for each t of a geometric ladder, uses the
/// scale-adapted input f_t = e^{tΔ}δ_h and measures ‖e^{tΔ}f_t‖_q / ‖f_t‖_p.
/// For p = 1 this is ‖e^{2tΔ}δ_h‖_q up to a constant, i.e. the plain
/// near-Dirac protocol. Returns the least-squares log-log slope.
double measure_smoothing_rate(const SemigroupPlan& plan, double p, double q,
                              const SmoothingRateOptions& opts = {});

}  // namespace arks
