#include "arks/cosine_transform.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "arks/error.hpp"

namespace arks {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<double> axis_eigenvalues(int n, double h) {
  std::vector<double> lam(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double s = std::sin(std::numbers::pi * k / (2.0 * n));
    lam[k] = 4.0 / (h * h) * s * s;
  }
  return lam;
}

}  // namespace

struct CosineTransform::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

CosineTransform::CosineTransform(const Grid& grid) : plans_(std::make_unique<Plans>()) {
  if (!grid.tensor()) throw MisuseError("cosine transform requires an interval or rectangle grid");
  const int nx = grid.nx();
  const auto lx = axis_eigenvalues(nx, grid.hx());
  std::vector<double> scratch(grid.size());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

  std::lock_guard lock(planner_mutex());
  if (grid.axes() == 1) {
    eigenvalues_ = lx;
    plans_->forward = fftw_plan_r2r_1d(nx, scratch.data(), scratch.data(), FFTW_REDFT10, flags);
    plans_->inverse = fftw_plan_r2r_1d(nx, scratch.data(), scratch.data(), FFTW_REDFT01, flags);
    scale_ = 1.0 / (2.0 * nx);
  } else {
    const int ny = grid.ny();
    const auto ly = axis_eigenvalues(ny, grid.hy());
    eigenvalues_.resize(grid.size());
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) eigenvalues_[grid.index(ix, iy)] = lx[ix] + ly[iy];
    }
    plans_->forward = fftw_plan_r2r_2d(ny, nx, scratch.data(), scratch.data(), FFTW_REDFT10,
                                       FFTW_REDFT10, flags);
    plans_->inverse = fftw_plan_r2r_2d(ny, nx, scratch.data(), scratch.data(), FFTW_REDFT01,
                                       FFTW_REDFT01, flags);
    scale_ = 1.0 / (4.0 * nx * ny);
  }
  if (plans_->forward == nullptr || plans_->inverse == nullptr) {
    throw ConsistencyError("FFTW failed to create cosine transform plans");
  }
}

CosineTransform::~CosineTransform() {
  std::lock_guard lock(planner_mutex());
  if (plans_->forward) fftw_destroy_plan(plans_->forward);
  if (plans_->inverse) fftw_destroy_plan(plans_->inverse);
}

void CosineTransform::forward(std::span<double> data) const {
  fftw_execute_r2r(plans_->forward, data.data(), data.data());
}

void CosineTransform::inverse(std::span<double> data) const {
  fftw_execute_r2r(plans_->inverse, data.data(), data.data());
  for (double& x : data) x *= scale_;
}

}  // namespace arks
