#include "arks/tridiagonal.hpp"

#include <vector>

#include "arks/error.hpp"

namespace arks {

void solve_tridiagonal_helmholtz(const Grid& grid, double kappa, std::span<const double> rhs,
                                 std::span<double> out) {
  if (grid.axes() != 1) throw MisuseError("tridiagonal solve needs a single-axis grid");
  if (!(kappa > 0.0)) throw InvalidParameter("tridiagonal Helmholtz solve needs kappa > 0");
  const int n = grid.nx();
  const auto vol = grid.cell_volumes();

  // Row i: −T_i x_{i−1} + (κV_i + T_i + T_{i+1}) x_i − T_{i+1} x_{i+1} = V_i rhs_i
  std::vector<double> c_prime(static_cast<std::size_t>(n));
  std::vector<double> d_prime(static_cast<std::size_t>(n));
  auto trans = [&](int face) { return (face <= 0 || face >= n) ? 0.0 : grid.x_transmissibility(face); };

  for (int i = 0; i < n; ++i) {
    const double lower = -trans(i);
    const double upper = -trans(i + 1);
    const double diag = kappa * vol[i] + trans(i) + trans(i + 1);
    const double b = vol[i] * rhs[i];
    if (i == 0) {
      c_prime[0] = upper / diag;
      d_prime[0] = b / diag;
    } else {
      const double denom = diag - lower * c_prime[i - 1];
      c_prime[i] = upper / denom;
      d_prime[i] = (b - lower * d_prime[i - 1]) / denom;
    }
  }
  out[n - 1] = d_prime[n - 1];
  for (int i = n - 2; i >= 0; --i) out[i] = d_prime[i] - c_prime[i] * out[i + 1];
}

}  // namespace arks
