#include "arks/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "arks/error.hpp"

namespace arks::harness {

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Single: return "single";
    case ExperimentKind::EpsFamily: return "eps-family";
    case ExperimentKind::Sweep: return "sweep";
    case ExperimentKind::Convergence: return "convergence";
  }
  return "single";
}

std::optional<EllipticMethod> parse_elliptic_method(std::string_view name) {
  if (name == "spectral") return EllipticMethod::SpectralCosine;
  if (name == "cg") return EllipticMethod::ConjugateGradient;
  if (name == "tridiagonal") return EllipticMethod::Tridiagonal;
  return std::nullopt;
}

std::string_view to_string(EllipticMethod m) {
  switch (m) {
    case EllipticMethod::SpectralCosine: return "spectral";
    case EllipticMethod::ConjugateGradient: return "cg";
    case EllipticMethod::Tridiagonal: return "tridiagonal";
  }
  return "spectral";
}

std::optional<Geometry> parse_geometry(std::string_view name) {
  for (Geometry g : {Geometry::Interval, Geometry::Rectangle, Geometry::RadialDisk, Geometry::RadialBall}) {
    if (to_string(g) == name) return g;
  }
  return std::nullopt;
}

GridPtr GridSpec::build() const {
  switch (geometry) {
    case Geometry::Interval: return share(Grid::interval(extent[0], cells[0]));
    case Geometry::Rectangle: return share(Grid::rectangle(extent[0], extent[1], cells[0], cells[1]));
    case Geometry::RadialDisk: return share(Grid::radial_disk(extent[0], cells[0]));
    case Geometry::RadialBall: return share(Grid::radial_ball(extent[0], cells[0]));
  }
  throw MisuseError("unknown geometry");
}

GridSpec GridSpec::refined(int factor) const {
  GridSpec g = *this;
  g.cells[0] *= factor;
  if (geometry == Geometry::Rectangle) g.cells[1] *= factor;
  return g;
}

// ---------------------------------------------------------------------------

namespace {

/// A YAML mapping whose keys must all be consumed.
class Section {
 public:
  Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) throw ConfigError(path_, "expected a mapping");
  }

  bool has(const std::string& key) {
    if (!node_ || node_.IsNull()) return false;
    if (!node_[key]) return false;
    used_.insert(key);
    return true;
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  YAML::Node node(const std::string& key) const { return node_[key]; }

  template <class T>
  void read(const std::string& key, T& out) {
    if (!has(key)) return;
    out = convert<T>(node_[key], field(key));
  }

  template <class T>
  void read_list(const std::string& key, std::vector<T>& out) {
    if (!has(key)) return;
    out = convert_list<T>(node_[key], field(key));
  }

  Section child(const std::string& key) {
    has(key);
    return Section(node_ ? node_[key] : YAML::Node(), field(key));
  }

  void finish() const {
    if (!node_ || node_.IsNull()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!used_.count(key)) throw ConfigError(field(key), "unknown key");
    }
  }

  template <class T>
  static T convert(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) throw ConfigError(path, "expected a scalar");
    try {
      return n.as<T>();
    } catch (const YAML::BadConversion&) {
      if constexpr (std::is_same_v<T, bool>) throw ConfigError(path, "expected true or false");
      else if constexpr (std::is_integral_v<T>) throw ConfigError(path, "expected an integer");
      else if constexpr (std::is_floating_point_v<T>) throw ConfigError(path, "expected a number");
      else throw ConfigError(path, "expected a string");
    }
  }

  template <class T>
  static std::vector<T> convert_list(const YAML::Node& n, const std::string& path) {
    std::vector<T> out;
    if (n.IsScalar()) {
      out.push_back(convert<T>(n, path));
      return out;
    }
    if (!n.IsSequence()) throw ConfigError(path, "expected a list");
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(convert<T>(n[i], fmt::format("{}[{}]", path, i)));
    return out;
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> used_;
};

DensitySpec read_density(Section s) {
  DensitySpec d;
  std::string kind = "constant";
  s.read("kind", kind);
  const auto k = parse_density_kind(kind);
  if (!k) throw ConfigError(s.field("kind"), "expected constant, gaussian or cosine-bump");
  d.kind = *k;
  s.read("amplitude", d.amplitude);
  s.read("width", d.width);
  std::vector<double> center;
  s.read_list("center", center);
  if (center.size() > 2) throw ConfigError(s.field("center"), "expected at most two coordinates");
  for (std::size_t i = 0; i < center.size(); ++i) d.center[i] = center[i];
  s.finish();
  return d;
}

template <class T, std::size_t N>
void read_pair(Section& s, const std::string& key, std::array<T, N>& out, bool two_axes) {
  std::vector<T> values;
  s.read_list(key, values);
  if (values.empty()) return;
  const std::size_t want = two_axes ? 2 : 1;
  if (values.size() == 1 && two_axes) values.push_back(values[0]);
  if (values.size() != want) throw ConfigError(s.field(key), fmt::format("expected {} value(s)", want));
  for (std::size_t i = 0; i < want; ++i) out[i] = values[i];
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError("<document>", e.what());
  }
  Section top(root, "");
  ExperimentConfig cfg;

  {
    Section s = top.child("experiment");
    s.read("name", cfg.name);
    std::string kind = "single";
    s.read("kind", kind);
    if (kind == "single") cfg.kind = ExperimentKind::Single;
    else if (kind == "eps-family") cfg.kind = ExperimentKind::EpsFamily;
    else if (kind == "sweep") cfg.kind = ExperimentKind::Sweep;
    else if (kind == "convergence") cfg.kind = ExperimentKind::Convergence;
    else throw ConfigError(s.field("kind"), "expected single, eps-family, sweep or convergence");
    s.read("output", cfg.output);
    s.finish();
  }
  {
    Section s = top.child("model");
    s.read("chi", cfg.model.chi);
    s.read("xi", cfg.model.xi);
    s.read("alpha", cfg.model.alpha);
    s.read("beta", cfg.model.beta);
    s.read("gamma", cfg.model.gamma);
    s.read("delta", cfg.model.delta);
    s.read("tau", cfg.model.tau);
    s.finish();
  }
  {
    Section s = top.child("scenario");
    s.read("c_s2", cfg.scenario.c_s2);
    s.read("r", cfg.scenario.r);
    s.read("u_exponent", cfg.scenario.u_exponent);
    s.finish();
  }
  {
    Section s = top.child("grid");
    std::string geometry = "rectangle";
    s.read("geometry", geometry);
    const auto g = parse_geometry(geometry);
    if (!g) throw ConfigError(s.field("geometry"), "expected interval, rectangle, radial-disk or radial-ball");
    cfg.grid.geometry = *g;
    const bool two = *g == Geometry::Rectangle;
    read_pair(s, "extent", cfg.grid.extent, two);
    read_pair(s, "cells", cfg.grid.cells, two);
    s.finish();
  }
  {
    Section s = top.child("initial");
    if (s.has("atoms")) {
      const YAML::Node atoms = s.node("atoms");
      const std::string path = s.field("atoms");
      if (!atoms.IsSequence()) throw ConfigError(path, "expected a list of atoms");
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        Section a(atoms[i], fmt::format("{}[{}]", path, i));
        Atom atom;
        a.read("x", atom.location[0]);
        a.read("y", atom.location[1]);
        if (!a.has("mass")) throw ConfigError(a.field("mass"), "required");
        a.read("mass", atom.mass);
        a.finish();
        cfg.measure.atoms.push_back(atom);
      }
    }
    if (s.has("density")) cfg.measure.density = read_density(s.child("density"));
    if (s.has("v0")) cfg.v0 = read_density(s.child("v0"));
    if (s.has("w0")) cfg.w0 = read_density(s.child("w0"));
    s.read_list("eps", cfg.eps);
    s.finish();
  }
  {
    Section s = top.child("control");
    std::string formulation = std::string(to_string(cfg.control.formulation));
    s.read("formulation", formulation);
    const auto f = parse_formulation(formulation);
    if (!f) throw ConfigError(s.field("formulation"), "expected primitive or transformed");
    cfg.control.formulation = *f;
    s.read("dt_init", cfg.control.dt_init);
    s.read("dt_min", cfg.control.dt_min);
    s.read("dt_max", cfg.control.dt_max);
    s.read("cfl_safety", cfg.control.cfl_safety);
    s.read("growth", cfg.control.growth);
    s.read("blowup_threshold", cfg.control.blowup_threshold);
    s.read("blowup_factor", cfg.control.blowup_factor);
    s.read("t_end", cfg.t_end);
    s.read("ladder_levels", cfg.ladder.levels);
    s.read("ladder_uniform", cfg.ladder.uniform);
    if (s.has("elliptic")) {
      std::string name;
      s.read("elliptic", name);
      cfg.elliptic = parse_elliptic_method(name);
      if (!cfg.elliptic) throw ConfigError(s.field("elliptic"), "expected spectral, cg or tridiagonal");
    }
    s.finish();
  }
  {
    Section s = top.child("diagnostics");
    s.read_list("p_values", cfg.p_values);
    if (s.has("test_functions")) {
      std::vector<std::string> names;
      s.read_list("test_functions", names);
      cfg.test_functions.clear();
      for (std::size_t i = 0; i < names.size(); ++i) {
        const auto f = parse_test_function(names[i]);
        if (!f) {
          throw ConfigError(fmt::format("{}[{}]", s.field("test_functions"), i),
                            "expected constant, cosine or gaussian");
        }
        cfg.test_functions.push_back(*f);
      }
    }
    s.read("snapshots", cfg.snapshots);
    s.finish();
  }
  {
    Section s = top.child("sweep");
    s.read_list("chi", cfg.sweep.chi);
    s.read_list("mass", cfg.sweep.mass);
    s.finish();
  }
  {
    Section s = top.child("convergence");
    s.read("probe_time", cfg.convergence.probe_time);
    s.read("refinements", cfg.convergence.refinements);
    s.finish();
  }
  top.finish();

  cfg.validate();
  const GridPtr grid = cfg.grid.build();
  cfg.scenario.n = grid->dimension();
  cfg.scenario.m = cfg.measure.total_mass(grid);
  try {
    cfg.scenario.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError("scenario", e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", fmt::format("cannot read {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void ExperimentConfig::validate() const {
  if (name.empty()) throw ConfigError("experiment.name", "must not be empty");
  try {
    model.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError("model", e.what());
  }
  try {
    control.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError("control", e.what());
  }
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("control.t_end", "must be > 0");
  if (ladder.levels < 0 || ladder.levels > 60) throw ConfigError("control.ladder_levels", "must lie in [0, 60]");
  if (ladder.uniform < 0) throw ConfigError("control.ladder_uniform", "must be >= 0");

  if (eps.empty()) throw ConfigError("initial.eps", "must list at least one value");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0 && eps[i] < 1.0)) throw ConfigError(fmt::format("initial.eps[{}]", i), "must lie in (0, 1)");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw ConfigError("initial.eps", "must be strictly decreasing");
  }

  GridPtr g;
  try {
    g = grid.build();
  } catch (const InvalidParameter& e) {
    throw ConfigError("grid", e.what());
  }
  try {
    measure.validate(*g);
  } catch (const InvalidParameter& e) {
    throw ConfigError("initial", e.what());
  }
  if (model.tau == 0 && (v0 || w0)) throw ConfigError(v0 ? "initial.v0" : "initial.w0", "only allowed when tau = 1");
  for (const auto* d : {&v0, &w0}) {
    if (*d && !((*d)->amplitude >= 0.0)) throw ConfigError(d == &v0 ? "initial.v0" : "initial.w0", "amplitude must be >= 0");
  }
  if (elliptic == EllipticMethod::SpectralCosine && g->radial()) {
    throw ConfigError("control.elliptic", "spectral solves need an interval or rectangle grid");
  }
  if (elliptic == EllipticMethod::Tridiagonal && g->axes() != 1) {
    throw ConfigError("control.elliptic", "tridiagonal solves need a single-axis grid");
  }
  for (std::size_t i = 0; i < p_values.size(); ++i) {
    if (!(p_values[i] >= 1.0)) throw ConfigError(fmt::format("diagnostics.p_values[{}]", i), "must be >= 1");
  }

  if (kind == ExperimentKind::Sweep) {
    if (sweep.chi.empty()) throw ConfigError("sweep.chi", "must list at least one value");
    if (sweep.mass.empty()) throw ConfigError("sweep.mass", "must list at least one value");
    for (double c : sweep.chi) {
      if (!(c >= 0.0)) throw ConfigError("sweep.chi", "values must be >= 0");
    }
    for (double m : sweep.mass) {
      if (!(m > 0.0)) throw ConfigError("sweep.mass", "values must be > 0");
    }
  }
  if (kind == ExperimentKind::Convergence) {
    if (eps.size() < 3) throw ConfigError("initial.eps", "convergence studies need at least 3 values");
    if (!(convergence.probe_time > 0.0 && convergence.probe_time <= t_end)) {
      throw ConfigError("convergence.probe_time", "must lie in (0, t_end]");
    }
    if (convergence.refinements < 1 || convergence.refinements > 4) {
      throw ConfigError("convergence.refinements", "must lie in [1, 4]");
    }
  }
}

}  // namespace arks::harness
