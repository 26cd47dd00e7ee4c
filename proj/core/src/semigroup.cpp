#include "arks/semigroup.hpp"

#include <cmath>
#include <vector>

#include "arks/cosine_transform.hpp"
#include "arks/error.hpp"
#include "arks/fit.hpp"
#include "arks/tridiagonal.hpp"

namespace arks {

SemigroupPlan::SemigroupPlan(GridPtr grid)
    : SemigroupPlan(grid, grid->tensor() ? SemigroupMethod::SpectralCosine : SemigroupMethod::ImplicitSteps) {}

SemigroupPlan::SemigroupPlan(GridPtr grid, SemigroupMethod method, double max_substep)
    : grid_(std::move(grid)), method_(method), max_substep_(max_substep) {
  if (method_ == SemigroupMethod::SpectralCosine) {
    if (!grid_->tensor()) throw MisuseError("spectral semigroup needs an interval or rectangle grid");
    transform_ = std::make_shared<const CosineTransform>(*grid_);
  } else {
    if (grid_->axes() != 1) throw MisuseError("implicit semigroup steps need a single-axis grid");
    if (max_substep_ < 0.0) throw InvalidParameter("implicit substep tolerance must be > 0");
    if (max_substep_ == 0.0) max_substep_ = 0.25 * grid_->hx() * grid_->hx();
  }
}

Field SemigroupPlan::apply(const Field& f, double t, double kappa, double* clamped) const {
  if (!(t >= 0.0)) throw InvalidParameter("semigroup time must be >= 0");
  if (!(kappa >= 0.0)) throw InvalidParameter("semigroup damping must be >= 0");
  if (clamped) *clamped = 0.0;
  if (t == 0.0) return f;

  const bool nonnegative = f.min() >= 0.0;
  Field out = f;
  if (method_ == SemigroupMethod::SpectralCosine) {
    transform_->forward(out.values);
    const auto lam = transform_->eigenvalues();
    for (std::size_t k = 0; k < out.size(); ++k) out.values[k] *= std::exp(-t * (lam[k] + kappa));
    transform_->inverse(out.values);
  } else {
    const auto steps = static_cast<long>(std::ceil(t / max_substep_));
    const double dt = t / static_cast<double>(steps);
    std::vector<double> rhs(out.size());
    for (long s = 0; s < steps; ++s) {
      for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = out.values[i] / dt;
      solve_tridiagonal_helmholtz(*grid_, 1.0 / dt, rhs, out.values);
    }
    if (kappa > 0.0) out *= std::exp(-kappa * t);
  }

  if (nonnegative) {
    const double c = clamp_rounding_negatives(out);
    if (clamped) *clamped = c;
  }
  return out;
}

double measure_smoothing_rate(const SemigroupPlan& plan, double p, double q,
                              const SmoothingRateOptions& opts) {
  if (!(p >= 1.0) || !(q >= p)) throw InvalidParameter("smoothing rate needs 1 <= p <= q");
  if (opts.samples < 2 || !(opts.t_lo > 0.0) || !(opts.t_hi > opts.t_lo)) {
    throw InvalidParameter("smoothing rate needs a nondegenerate time window");
  }
  const Grid& g = *plan.grid();
  Field dirac(plan.grid());
  std::size_t cell = 0;
  if (g.tensor()) {
    cell = g.index(g.nx() / 2, g.axes() == 2 ? g.ny() / 2 : 0);
  }
  dirac.values[cell] = 1.0 / g.cell_volume(cell);

  std::vector<double> times, ratios;
  const double growth = std::pow(opts.t_hi / opts.t_lo, 1.0 / (opts.samples - 1));
  for (int k = 0; k < opts.samples; ++k) {
    const double t = opts.t_lo * std::pow(growth, k);
    const Field input = plan.apply(dirac, t);
    const Field output = plan.apply(input, t);
    times.push_back(t);
    ratios.push_back(lp_norm(output, q) / lp_norm(input, p));
  }
  return log_log_slope(times, ratios);
}

}  // namespace arks
