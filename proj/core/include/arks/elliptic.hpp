#pragma once

#include <memory>

#include "arks/grid.hpp"

namespace arks {

class CosineTransform;

enum class EllipticMethod {
  SpectralCosine,     ///< direct diagonalization; interval/rectangle only
  ConjugateGradient,  ///< matrix-free Jacobi-preconditioned CG; any grid
  Tridiagonal,        ///< direct Thomas sweep; single-axis grids only
};

struct CgOptions {
  double tol = 1e-10;  ///< relative residual, ‖r‖₂ ≤ tol·‖s·u‖₂ (volume-weighted norms)
  int max_iter = 50000;
};

/// −Δ_h v + κ v = s·u with zero-flux boundaries. κ > 0 keeps the operator
/// invertible without compatibility conditions.
struct HelmholtzProblem {
  GridPtr grid;
  double kappa = 1.0;
  double source_scale = 1.0;
  EllipticMethod method = EllipticMethod::SpectralCosine;
  CgOptions cg{};
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Reusable solver for one grid; transform tables are built once. solve()
/// allocates its own scratch, so one instance may serve concurrent callers.
class HelmholtzSolver {
 public:
  HelmholtzSolver(GridPtr grid, EllipticMethod method, CgOptions cg = {});

  /// Spectral on tensor grids, tridiagonal on radial grids.
  static EllipticMethod default_method(const Grid& grid);

  EllipticMethod method() const noexcept { return method_; }
  const GridPtr& grid() const noexcept { return grid_; }

  /// Returns v with −Δ_h v + κ v = scale·source. Throws SolverFailure when CG
  /// misses its tolerance within max_iter.
  Field solve(double kappa, double scale, const Field& source, SolveStats* stats = nullptr) const;

 private:
  Field solve_spectral(double kappa, double scale, const Field& source) const;
  Field solve_cg(double kappa, double scale, const Field& source, SolveStats* stats) const;

  GridPtr grid_;
  EllipticMethod method_;
  CgOptions cg_;
  std::shared_ptr<const CosineTransform> transform_;
};

/// One-shot convenience wrapper over HelmholtzSolver.
Field solve(const HelmholtzProblem& problem, const Field& u);

}  // namespace arks
