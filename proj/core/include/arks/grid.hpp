#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace arks {

enum class Geometry : std::uint32_t {
  Interval = 0,    ///< [0, L]
  Rectangle = 1,   ///< [0, Lx] x [0, Ly]
  RadialDisk = 2,  ///< radially symmetric disk of radius R (n = 2)
  RadialBall = 3,  ///< radially symmetric ball of radius R (n = 3)
};

std::string_view to_string(Geometry g);

/// Uniform cell-centered grid. Radial geometries store one axis (the radius)
/// with annulus/shell cell volumes. Cell index is row-major, x fastest.
class Grid {
 public:
  static Grid interval(double length, int cells);
  static Grid rectangle(double lx, double ly, int nx, int ny);
  static Grid radial_disk(double radius, int cells);
  static Grid radial_ball(double radius, int cells);

  Geometry geometry() const noexcept { return geometry_; }
  bool radial() const noexcept {
    return geometry_ == Geometry::RadialDisk || geometry_ == Geometry::RadialBall;
  }
  bool tensor() const noexcept { return !radial(); }
  /// Physical dimension n of the domain the grid discretizes.
  int dimension() const noexcept;
  /// Number of storage axes (1 or 2).
  int axes() const noexcept { return geometry_ == Geometry::Rectangle ? 2 : 1; }

  int nx() const noexcept { return cells_[0]; }
  int ny() const noexcept { return cells_[1]; }
  double hx() const noexcept { return spacing_[0]; }
  double hy() const noexcept { return spacing_[1]; }
  std::array<double, 2> extents() const noexcept { return extents_; }
  std::array<int, 2> cells() const noexcept { return cells_; }
  /// Smallest cell width over all axes.
  double min_spacing() const noexcept;

  std::size_t size() const noexcept { return volumes_.size(); }
  std::size_t index(int ix, int iy) const noexcept {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(cells_[0]) +
           static_cast<std::size_t>(ix);
  }

  double cell_volume(std::size_t i) const noexcept { return volumes_[i]; }
  std::span<const double> cell_volumes() const noexcept { return volumes_; }
  /// |Ω| as the disk/ball/box measure.
  double measure() const noexcept { return measure_; }

  /// Cell center; for radial grids x is the radius and y is 0.
  std::array<double, 2> center(std::size_t i) const noexcept;

  /// Area-over-distance coefficient of the face between x-cells ix-1 and ix, ix in [1, nx).
  double x_transmissibility(int ix) const noexcept { return tx_[static_cast<std::size_t>(ix)]; }
  /// Area-over-distance coefficient of every y-face (Rectangle only).
  double y_transmissibility() const noexcept { return ty_; }
  /// Face area of the x-face at ix (radial: 2πr or 4πr², tensor: hy or 1).
  double x_face_area(int ix) const noexcept { return tx_[static_cast<std::size_t>(ix)] * spacing_[0]; }

  /// Stable 64-bit digest of geometry, extents and cell counts.
  std::uint64_t hash() const noexcept;

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.geometry_ == b.geometry_ && a.cells_ == b.cells_ && a.extents_ == b.extents_;
  }

 private:
  Grid(Geometry g, std::array<double, 2> extents, std::array<int, 2> cells);

  Geometry geometry_;
  std::array<double, 2> extents_;
  std::array<int, 2> cells_;
  std::array<double, 2> spacing_;
  std::vector<double> volumes_;
  std::vector<double> tx_;  // indexed by face, 0 and nx unused (zero-flux)
  double ty_ = 0.0;
  double measure_ = 0.0;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr share(Grid g) {
  return std::make_shared<const Grid>(std::move(g));
}

/// Cell averages on a grid.
struct Field {
  GridPtr grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(GridPtr g, double fill = 0.0);
  Field(GridPtr g, std::vector<double> v);

  /// Samples `fn(x, y)` at cell centers (radial: fn(r, 0)).
  static Field sample(GridPtr g, const std::function<double(double, double)>& fn);

  std::size_t size() const noexcept { return values.size(); }
  double& operator[](std::size_t i) noexcept { return values[i]; }
  double operator[](std::size_t i) const noexcept { return values[i]; }

  double min() const;
  double max() const;
  bool finite() const;

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double s);
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

/// Pairwise (cascade) summation; result is independent of thread count.
double pairwise_sum(std::span<const double> x);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Σ f_i |K_i|.
double integrate(const Field& f);
/// (Σ |f_i|^p |K_i|)^{1/p}; p = kInfinity gives max |f_i|.
double lp_norm(const Field& f, double p);
/// Σ over interior faces of (area/distance)(f_R − f_L)²; boundary faces carry zero flux.
double gradient_sq_integral(const Field& f);
/// Flux-form Laplacian with zero-flux boundary faces.
Field neumann_laplacian(const Field& f);
/// Per-cell |∇f|² using the mean of the two adjacent face differences per axis.
std::vector<double> cell_gradient_sq(const Field& f);

/// Discrete W^{1,r} norm (‖f‖_r^r + ‖|∇f|‖_r^r)^{1/r} with the cell
/// gradient magnitudes of cell_gradient_sq.
double w1r_norm(const Field& f, double r);

/// Zeroes rounding-level negatives in a field that must be nonnegative.
/// Values in [−rel·max|f|, 0) become 0; anything more negative throws
/// ConsistencyError. Returns the largest clamped magnitude.
double clamp_rounding_negatives(Field& f, double rel = 1e-12);

/// Visits every interior face as fn(left, right, transmissibility, axis).
template <class Fn>
void for_each_face(const Grid& g, Fn&& fn) {
  const int nx = g.nx();
  const int ny = g.axes() == 2 ? g.ny() : 1;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 1; ix < nx; ++ix) {
      fn(g.index(ix - 1, iy), g.index(ix, iy), g.x_transmissibility(ix), 0);
    }
  }
  if (g.axes() == 2) {
    const double ty = g.y_transmissibility();
    for (int iy = 1; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) {
        fn(g.index(ix, iy - 1), g.index(ix, iy), ty, 1);
      }
    }
  }
}

}  // namespace arks
