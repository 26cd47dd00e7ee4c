#include "arks/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "arks/error.hpp"
#include "arks/semigroup.hpp"

namespace arks {

std::string_view to_string(DensityKind k) {
  switch (k) {
    case DensityKind::Constant: return "constant";
    case DensityKind::Gaussian: return "gaussian";
    case DensityKind::CosineBump: return "cosine-bump";
  }
  return "constant";
}

std::optional<DensityKind> parse_density_kind(std::string_view name) {
  if (name == "constant") return DensityKind::Constant;
  if (name == "gaussian") return DensityKind::Gaussian;
  if (name == "cosine-bump") return DensityKind::CosineBump;
  return std::nullopt;
}

double DensitySpec::evaluate(double x, double y, bool radial) const {
  const double rho = radial ? std::abs(x) : std::hypot(x - center[0], y - center[1]);
  switch (kind) {
    case DensityKind::Constant: return amplitude;
    case DensityKind::Gaussian: return amplitude * std::exp(-rho * rho / (2.0 * width * width));
    case DensityKind::CosineBump:
      return rho < width ? amplitude * 0.5 * (1.0 + std::cos(std::numbers::pi * rho / width)) : 0.0;
  }
  return 0.0;
}

Field sample_density(const DensitySpec& spec, const GridPtr& grid) {
  const bool radial = grid->radial();
  const bool one_axis = grid->axes() == 1;
  return Field::sample(grid, [&](double x, double y) {
    // On an interval the profile depends on x only.
    return spec.evaluate(x, one_axis && !radial ? spec.center[1] : y, radial);
  });
}

void MeasureSpec::validate(const Grid& grid) const {
  const auto ext = grid.extents();
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const Atom& a = atoms[k];
    if (!(a.mass > 0.0) || !std::isfinite(a.mass)) {
      throw InvalidParameter(fmt::format("atom {} needs a positive finite mass", k));
    }
    if (grid.radial()) {
      if (a.location[0] != 0.0) {
        throw InvalidParameter(fmt::format("atom {}: radial grids only admit atoms at the origin", k));
      }
      continue;
    }
    const bool inside_x = a.location[0] > 0.0 && a.location[0] < ext[0];
    const bool inside_y = grid.axes() == 1 || (a.location[1] > 0.0 && a.location[1] < ext[1]);
    if (!inside_x || !inside_y) {
      throw InvalidParameter(fmt::format("atom {} must lie strictly inside the domain", k));
    }
  }
  if (density) {
    if (!(density->amplitude >= 0.0)) throw InvalidParameter("density amplitude must be >= 0");
    if (density->kind != DensityKind::Constant && !(density->width > 0.0)) {
      throw InvalidParameter("density width must be > 0");
    }
  }
  if (atoms.empty() && !density) throw InvalidParameter("initial measure is empty");
}

double MeasureSpec::total_mass(const GridPtr& grid) const {
  double m = 0.0;
  for (const Atom& a : atoms) m += a.mass;
  if (density) m += integrate(sample_density(*density, grid));
  return m;
}

double MeasureSpec::pair(const GridPtr& grid, const std::function<double(double, double)>& phi) const {
  double s = 0.0;
  for (const Atom& a : atoms) s += a.mass * phi(a.location[0], a.location[1]);
  if (density) {
    Field d = sample_density(*density, grid);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const auto c = grid->center(i);
      d.values[i] *= phi(c[0], c[1]);
    }
    s += integrate(d);
  }
  return s;
}

Field cell_measure(const MeasureSpec& spec, const GridPtr& grid) {
  spec.validate(*grid);
  Field f = spec.density ? sample_density(*spec.density, grid) : Field(grid);
  for (const Atom& a : spec.atoms) {
    std::size_t cell = 0;
    if (!grid->radial()) {
      auto snap = [](double x, double h, int n) {
        return std::clamp(static_cast<int>(std::floor(x / h)), 0, n - 1);
      };
      const int ix = snap(a.location[0], grid->hx(), grid->nx());
      const int iy = grid->axes() == 2 ? snap(a.location[1], grid->hy(), grid->ny()) : 0;
      cell = grid->index(ix, iy);
    }
    f.values[cell] += a.mass / grid->cell_volume(cell);
  }
  return f;
}

Field mollify_measure(const MeasureSpec& spec, double eps, const SemigroupPlan& plan) {
  if (!(eps > 0.0)) throw InvalidParameter("mollification eps must be > 0");
  return plan.apply(cell_measure(spec, plan.grid()), eps);
}

Field mollify_measure(const MeasureSpec& spec, double eps, const GridPtr& grid) {
  return mollify_measure(spec, eps, SemigroupPlan(grid));
}

std::pair<Field, Field> mollify_chemicals(const ChemicalInitialData& cd, double eps,
                                          const ModelParams& params, const SemigroupPlan& plan) {
  if (params.tau != 1) throw MisuseError("chemical initial data only exist for tau = 1");
  if (!(eps > 0.0)) throw InvalidParameter("mollification eps must be > 0");
  if (cd.v0.min() < 0.0 || cd.w0.min() < 0.0) throw InvalidParameter("chemical initial data must be >= 0");
  return {plan.apply(cd.v0, eps, params.beta), plan.apply(cd.w0, eps, params.delta)};
}

}  // namespace arks
