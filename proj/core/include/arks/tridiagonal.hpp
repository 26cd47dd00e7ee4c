#pragma once

#include <span>

#include "arks/grid.hpp"

namespace arks {

/// Direct solve of −Δ_h x + κ x = rhs on a single-axis grid (interval or
/// radial). The volume-weighted system is a symmetric, strictly diagonally
/// dominant M-matrix, so the Thomas sweep needs no pivoting and maps
/// nonnegative right-hand sides to nonnegative solutions.
void solve_tridiagonal_helmholtz(const Grid& grid, double kappa, std::span<const double> rhs,
                                 std::span<double> out);

}  // namespace arks
