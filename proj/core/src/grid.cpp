#include "arks/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <string>

#include "arks/error.hpp"

namespace arks {

std::string_view to_string(Geometry g) {
  switch (g) {
    case Geometry::Interval: return "interval";
    case Geometry::Rectangle: return "rectangle";
    case Geometry::RadialDisk: return "radial-disk";
    case Geometry::RadialBall: return "radial-ball";
  }
  return "interval";
}

namespace {

void check_axis(double length, int cells) {
  if (!(std::isfinite(length) && length > 0.0)) throw InvalidParameter("grid extent must be > 0");
  if (cells < 4) throw InvalidParameter("grid needs at least 4 cells per axis");
}

}  // namespace

Grid Grid::interval(double length, int cells) {
  check_axis(length, cells);
  return Grid(Geometry::Interval, {length, 1.0}, {cells, 1});
}

Grid Grid::rectangle(double lx, double ly, int nx, int ny) {
  check_axis(lx, nx);
  check_axis(ly, ny);
  return Grid(Geometry::Rectangle, {lx, ly}, {nx, ny});
}

Grid Grid::radial_disk(double radius, int cells) {
  check_axis(radius, cells);
  return Grid(Geometry::RadialDisk, {radius, 1.0}, {cells, 1});
}

Grid Grid::radial_ball(double radius, int cells) {
  check_axis(radius, cells);
  return Grid(Geometry::RadialBall, {radius, 1.0}, {cells, 1});
}

Grid::Grid(Geometry g, std::array<double, 2> extents, std::array<int, 2> cells)
    : geometry_(g), extents_(extents), cells_(cells) {
  using std::numbers::pi;
  spacing_ = {extents_[0] / cells_[0], extents_[1] / cells_[1]};
  const auto n = static_cast<std::size_t>(cells_[0]) * static_cast<std::size_t>(cells_[1]);
  volumes_.resize(n);
  tx_.assign(static_cast<std::size_t>(cells_[0]) + 1, 0.0);
  const double h = spacing_[0];

  switch (geometry_) {
    case Geometry::Interval:
      std::fill(volumes_.begin(), volumes_.end(), h);
      for (int i = 1; i < cells_[0]; ++i) tx_[i] = 1.0 / h;
      measure_ = extents_[0];
      break;
    case Geometry::Rectangle:
      std::fill(volumes_.begin(), volumes_.end(), spacing_[0] * spacing_[1]);
      for (int i = 1; i < cells_[0]; ++i) tx_[i] = spacing_[1] / spacing_[0];
      ty_ = spacing_[0] / spacing_[1];
      measure_ = extents_[0] * extents_[1];
      break;
    case Geometry::RadialDisk:
      for (int i = 0; i < cells_[0]; ++i) {
        const double r0 = i * h;
        const double r1 = (i + 1) * h;
        volumes_[i] = pi * (r1 * r1 - r0 * r0);
      }
      for (int i = 1; i < cells_[0]; ++i) tx_[i] = 2.0 * pi * (i * h) / h;
      measure_ = pi * extents_[0] * extents_[0];
      break;
    case Geometry::RadialBall:
      for (int i = 0; i < cells_[0]; ++i) {
        const double r0 = i * h;
        const double r1 = (i + 1) * h;
        volumes_[i] = 4.0 * pi / 3.0 * (r1 * r1 * r1 - r0 * r0 * r0);
      }
      for (int i = 1; i < cells_[0]; ++i) {
        const double r = i * h;
        tx_[i] = 4.0 * pi * r * r / h;
      }
      measure_ = 4.0 * pi / 3.0 * extents_[0] * extents_[0] * extents_[0];
      break;
  }
}

int Grid::dimension() const noexcept {
  switch (geometry_) {
    case Geometry::Interval: return 1;
    case Geometry::Rectangle: return 2;
    case Geometry::RadialDisk: return 2;
    case Geometry::RadialBall: return 3;
  }
  return 1;
}

double Grid::min_spacing() const noexcept {
  return axes() == 2 ? std::min(spacing_[0], spacing_[1]) : spacing_[0];
}

std::array<double, 2> Grid::center(std::size_t i) const noexcept {
  const auto nx = static_cast<std::size_t>(cells_[0]);
  const auto ix = static_cast<double>(i % nx);
  const auto iy = static_cast<double>(i / nx);
  if (axes() == 1) return {(ix + 0.5) * spacing_[0], 0.0};
  return {(ix + 0.5) * spacing_[0], (iy + 0.5) * spacing_[1]};
}

std::uint64_t Grid::hash() const noexcept {
  // FNV-1a
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < n; ++k) {
      h ^= bytes[k];
      h *= 1099511628211ULL;
    }
  };
  const auto tag = static_cast<std::uint32_t>(geometry_);
  mix(&tag, sizeof tag);
  mix(cells_.data(), sizeof cells_);
  mix(extents_.data(), sizeof extents_);
  return h;
}

// ---------------------------------------------------------------------------

Field::Field(GridPtr g, double fill) : grid(std::move(g)), values(grid->size(), fill) {}

Field::Field(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid->size()) throw InvalidParameter("field size does not match grid");
}

Field Field::sample(GridPtr g, const std::function<double(double, double)>& fn) {
  Field f(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto c = g->center(i);
    f.values[i] = fn(c[0], c[1]);
  }
  return f;
}

double Field::min() const { return *std::min_element(values.begin(), values.end()); }
double Field::max() const { return *std::max_element(values.begin(), values.end()); }

bool Field::finite() const {
  return std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); });
}

Field& Field::operator+=(const Field& o) {
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& x : values) x *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

// ---------------------------------------------------------------------------

double pairwise_sum(std::span<const double> x) {
  constexpr std::size_t kBlock = 128;
  if (x.size() <= kBlock) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

double integrate(const Field& f) {
  const auto vol = f.grid->cell_volumes();
  std::vector<double> terms(f.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = f.values[i] * vol[i];
  return pairwise_sum(terms);
}

double lp_norm(const Field& f, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(p >= 1.0)) throw InvalidParameter("lp_norm requires p >= 1");
  const auto vol = f.grid->cell_volumes();
  std::vector<double> terms(f.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = std::pow(std::abs(f.values[i]), p) * vol[i];
  return std::pow(pairwise_sum(terms), 1.0 / p);
}

double gradient_sq_integral(const Field& f) {
  std::vector<double> terms;
  terms.reserve(2 * f.size());
  for_each_face(*f.grid, [&](std::size_t l, std::size_t r, double trans, int) {
    const double d = f.values[r] - f.values[l];
    terms.push_back(trans * d * d);
  });
  return pairwise_sum(terms);
}

Field neumann_laplacian(const Field& f) {
  Field out(f.grid);
  for_each_face(*f.grid, [&](std::size_t l, std::size_t r, double trans, int) {
    const double flux = trans * (f.values[r] - f.values[l]);
    out.values[l] += flux;
    out.values[r] -= flux;
  });
  const auto vol = f.grid->cell_volumes();
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] /= vol[i];
  return out;
}

double clamp_rounding_negatives(Field& f, double rel) {
  const double scale = lp_norm(f, kInfinity);
  double clamped = 0.0;
  for (double& x : f.values) {
    if (x >= 0.0) continue;
    if (-x > rel * scale) {
      throw ConsistencyError("negative value " + std::to_string(x) + " exceeds rounding tolerance");
    }
    clamped = std::max(clamped, -x);
    x = 0.0;
  }
  return clamped;
}

std::vector<double> cell_gradient_sq(const Field& f) {
  const Grid& g = *f.grid;
  std::vector<double> gx(f.size(), 0.0);
  std::vector<double> gy(g.axes() == 2 ? f.size() : 0, 0.0);
  const double hx = g.hx();
  const double hy = g.hy();
  for_each_face(g, [&](std::size_t l, std::size_t r, double, int axis) {
    if (axis == 0) {
      const double d = 0.5 * (f.values[r] - f.values[l]) / hx;
      gx[l] += d;
      gx[r] += d;
    } else {
      const double d = 0.5 * (f.values[r] - f.values[l]) / hy;
      gy[l] += d;
      gy[r] += d;
    }
  });
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = gx[i] * gx[i] + (gy.empty() ? 0.0 : gy[i] * gy[i]);
  }
  return out;
}

double w1r_norm(const Field& f, double r) {
  if (!(r >= 1.0)) throw InvalidParameter("w1r_norm requires r >= 1");
  const auto g2 = cell_gradient_sq(f);
  const auto vol = f.grid->cell_volumes();
  std::vector<double> terms(f.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    terms[i] = (std::pow(std::abs(f.values[i]), r) + std::pow(g2[i], 0.5 * r)) * vol[i];
  }
  return std::pow(pairwise_sum(terms), 1.0 / r);
}

}  // namespace arks
