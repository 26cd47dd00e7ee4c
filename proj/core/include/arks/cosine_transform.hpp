#pragma once

#include <memory>
#include <span>
#include <vector>

#include "arks/grid.hpp"

namespace arks {

/// Half-sample cosine transform on a uniform tensor grid. The discrete Neumann
/// Laplacian of the grid module is diagonal in this basis; `eigenvalues()`
/// holds the spectrum of −Δ_h in coefficient order.
///
/// Plans are built once (FFTW_ESTIMATE, deterministic) and executed on caller
/// buffers, so a single instance may be shared by concurrent callers.
class CosineTransform {
 public:
  explicit CosineTransform(const Grid& grid);
  ~CosineTransform();
  CosineTransform(const CosineTransform&) = delete;
  CosineTransform& operator=(const CosineTransform&) = delete;

  /// Unnormalized DCT-II, in place.
  void forward(std::span<double> data) const;
  /// DCT-III scaled so that inverse(forward(x)) == x.
  void inverse(std::span<double> data) const;

  std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
  std::size_t size() const noexcept { return eigenvalues_.size(); }

 private:
  struct Plans;
  std::unique_ptr<Plans> plans_;
  std::vector<double> eigenvalues_;
  double scale_ = 1.0;
};

}  // namespace arks
