#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arks/diagnostics.hpp"
#include "arks/elliptic.hpp"
#include "arks/grid.hpp"
#include "arks/initial_data.hpp"
#include "arks/model.hpp"
#include "arks/stepper.hpp"

namespace arks::harness {

enum class ExperimentKind { Single, EpsFamily, Sweep, Convergence };

std::string_view to_string(ExperimentKind k);

struct GridSpec {
  Geometry geometry = Geometry::Rectangle;
  std::array<double, 2> extent{1.0, 1.0};  ///< radial: extent[0] is the radius
  std::array<int, 2> cells{64, 64};

  GridPtr build() const;
  /// Same geometry with the cell counts multiplied by `factor`.
  GridSpec refined(int factor) const;
};

struct LadderSpec {
  int levels = 20;  ///< t_end·2^{−k}, k = levels..0
  int uniform = 0;  ///< extra evenly spaced samples in (t_end/2, t_end)
};

struct SweepSpec {
  std::vector<double> chi;   ///< attraction strengths (columns)
  std::vector<double> mass;  ///< total masses (rows); atom masses are rescaled
};

struct ConvergenceSpec {
  double probe_time = 0.1;
  int refinements = 2;  ///< grids N, 2N, ... 2^refinements N at the first eps
};

struct ExperimentConfig {
  std::string name = "experiment";
  ExperimentKind kind = ExperimentKind::Single;
  std::string output;  ///< default output directory; may be empty

  ModelParams model;
  ScenarioConfig scenario;  ///< n and m are filled from the grid and initial data
  GridSpec grid;
  MeasureSpec measure;
  std::optional<DensitySpec> v0;
  std::optional<DensitySpec> w0;
  std::vector<double> eps{1e-3};

  StepControl control;
  double t_end = 1.0;
  LadderSpec ladder;
  std::optional<EllipticMethod> elliptic;

  std::vector<double> p_values;  ///< empty selects the default exponent set
  std::vector<TestFunction> test_functions{TestFunction::Constant, TestFunction::Cosine,
                                           TestFunction::Gaussian};
  bool snapshots = false;  ///< write u, v, w at t_end as binary fields

  SweepSpec sweep;
  ConvergenceSpec convergence;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  /// u0 given by a density alone.
  bool density_only() const { return measure.atoms.empty() && measure.has_density(); }
};

/// Parses the YAML text; unknown keys and type mismatches throw ConfigError
/// with the dotted field path. The result is validated.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

std::optional<EllipticMethod> parse_elliptic_method(std::string_view name);
std::string_view to_string(EllipticMethod m);
std::optional<Geometry> parse_geometry(std::string_view name);

}  // namespace arks::harness
