#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "arks/grid.hpp"
#include "arks/model.hpp"

namespace arks {

class SemigroupPlan;

/// Point mass. On radial grids only the origin is admissible.
struct Atom {
  std::array<double, 2> location{};
  double mass = 0.0;
};

enum class DensityKind { Constant, Gaussian, CosineBump };

std::string_view to_string(DensityKind k);
std::optional<DensityKind> parse_density_kind(std::string_view name);

/// Fixed catalog of nonnegative profiles, with ρ = |x − center|:
///   constant:     amplitude
///   gaussian:     amplitude · exp(−ρ² / (2 width²))
///   cosine-bump:  amplitude · (1 + cos(πρ / width)) / 2  for ρ < width, else 0
/// On radial grids the center is the origin and ρ is the radius.
struct DensitySpec {
  DensityKind kind = DensityKind::Constant;
  double amplitude = 1.0;
  std::array<double, 2> center{};
  double width = 0.1;

  double evaluate(double x, double y, bool radial) const;
};

Field sample_density(const DensitySpec& spec, const GridPtr& grid);

/// Initial datum u0 as a nonnegative measure: atoms plus an optional density.
struct MeasureSpec {
  std::vector<Atom> atoms;
  std::optional<DensitySpec> density;

  bool has_density() const noexcept { return density.has_value(); }
  /// Throws InvalidParameter for nonpositive masses, atoms outside the open
  /// domain (or off the origin on radial grids), negative amplitudes, or m = 0.
  void validate(const Grid& grid) const;
  /// m = Σ atom masses + ∫ density, the density integrated on `grid`.
  double total_mass(const GridPtr& grid) const;
  /// ⟨u0, φ⟩ with the density part integrated on `grid`.
  double pair(const GridPtr& grid, const std::function<double(double, double)>& phi) const;
};

/// Cell representation before smoothing: each atom's mass is placed in the
/// cell whose center is nearest the atom, density sampled at centers.
Field cell_measure(const MeasureSpec& spec, const GridPtr& grid);

/// u_{0,ε} = e^{εΔ}u0 on the grid. Throws InvalidParameter for eps <= 0.
Field mollify_measure(const MeasureSpec& spec, double eps, const SemigroupPlan& plan);
Field mollify_measure(const MeasureSpec& spec, double eps, const GridPtr& grid);

/// v0, w0 for the parabolic chemical equations.
struct ChemicalInitialData {
  Field v0;
  Field w0;
};

/// (e^{−εβ}e^{εΔ}v0, e^{−εδ}e^{εΔ}w0). Throws MisuseError when τ = 0 and
/// InvalidParameter for eps <= 0.
std::pair<Field, Field> mollify_chemicals(const ChemicalInitialData& cd, double eps,
                                          const ModelParams& params, const SemigroupPlan& plan);

}  // namespace arks
