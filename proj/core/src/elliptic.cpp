#include "arks/elliptic.hpp"

#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "arks/cosine_transform.hpp"
#include "arks/error.hpp"
#include "arks/tridiagonal.hpp"

namespace arks {

namespace {

// y = κV x − L x, the volume-weighted Helmholtz operator (symmetric positive definite).
void apply_operator(const Grid& g, double kappa, std::span<const double> x, std::span<double> y) {
  const auto vol = g.cell_volumes();
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = kappa * vol[i] * x[i];
  for_each_face(g, [&](std::size_t l, std::size_t r, double trans, int) {
    const double flux = trans * (x[r] - x[l]);
    y[l] -= flux;
    y[r] += flux;
  });
}

double dot(std::span<const double> a, std::span<const double> b) {
  std::vector<double> terms(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) terms[i] = a[i] * b[i];
  return pairwise_sum(terms);
}

}  // namespace

HelmholtzSolver::HelmholtzSolver(GridPtr grid, EllipticMethod method, CgOptions cg)
    : grid_(std::move(grid)), method_(method), cg_(cg) {
  switch (method_) {
    case EllipticMethod::SpectralCosine:
      if (!grid_->tensor()) throw MisuseError("spectral Helmholtz solve needs an interval or rectangle grid");
      transform_ = std::make_shared<const CosineTransform>(*grid_);
      break;
    case EllipticMethod::Tridiagonal:
      if (grid_->axes() != 1) throw MisuseError("tridiagonal Helmholtz solve needs a single-axis grid");
      break;
    case EllipticMethod::ConjugateGradient:
      if (!(cg_.tol > 0.0) || cg_.max_iter <= 0) throw InvalidParameter("CG needs tol > 0 and max_iter > 0");
      break;
  }
}

EllipticMethod HelmholtzSolver::default_method(const Grid& grid) {
  return grid.tensor() ? EllipticMethod::SpectralCosine : EllipticMethod::Tridiagonal;
}

Field HelmholtzSolver::solve(double kappa, double scale, const Field& source, SolveStats* stats) const {
  if (!(kappa > 0.0)) throw InvalidParameter("Helmholtz decay coefficient must be > 0");
  switch (method_) {
    case EllipticMethod::SpectralCosine:
      if (stats) *stats = {};
      return solve_spectral(kappa, scale, source);
    case EllipticMethod::Tridiagonal: {
      if (stats) *stats = {};
      Field out(grid_);
      std::vector<double> rhs(source.values);
      for (double& x : rhs) x *= scale;
      solve_tridiagonal_helmholtz(*grid_, kappa, rhs, out.values);
      return out;
    }
    case EllipticMethod::ConjugateGradient:
      return solve_cg(kappa, scale, source, stats);
  }
  return Field(grid_);
}

Field HelmholtzSolver::solve_spectral(double kappa, double scale, const Field& source) const {
  Field out = source;
  transform_->forward(out.values);
  const auto lam = transform_->eigenvalues();
  for (std::size_t k = 0; k < out.size(); ++k) out.values[k] *= scale / (kappa + lam[k]);
  transform_->inverse(out.values);
  return out;
}

Field HelmholtzSolver::solve_cg(double kappa, double scale, const Field& source, SolveStats* stats) const {
  const Grid& g = *grid_;
  const auto vol = g.cell_volumes();
  const std::size_t n = g.size();

  std::vector<double> b(n), diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = vol[i] * scale * source.values[i];
    diag[i] = kappa * vol[i];
  }
  for_each_face(g, [&](std::size_t l, std::size_t r, double trans, int) {
    diag[l] += trans;
    diag[r] += trans;
  });

  // Residual measured as ‖(b − Ax)/V‖ in the volume-weighted L² norm.
  auto weighted_norm = [&](std::span<const double> r) {
    std::vector<double> terms(n);
    for (std::size_t i = 0; i < n; ++i) terms[i] = r[i] * r[i] / vol[i];
    return std::sqrt(pairwise_sum(terms));
  };

  Field x(grid_);
  std::vector<double> r(b), z(n), p(n), ap(n);
  const double b_norm = weighted_norm(b);
  if (b_norm == 0.0) {
    if (stats) *stats = {0, 0.0};
    return x;
  }
  for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = dot(r, z);
  double rel = 1.0;
  for (int it = 1; it <= cg_.max_iter; ++it) {
    apply_operator(g, kappa, p, ap);
    const double alpha = rz / dot(p, ap);
    for (std::size_t i = 0; i < n; ++i) {
      x.values[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    rel = weighted_norm(r) / b_norm;
    if (rel <= cg_.tol) {
      if (stats) *stats = {it, rel};
      return x;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw SolverFailure(fmt::format("CG did not converge in {} iterations (relative residual {:.3e})",
                                  cg_.max_iter, rel),
                      rel);
}

Field solve(const HelmholtzProblem& problem, const Field& u) {
  const HelmholtzSolver solver(problem.grid, problem.method, problem.cg);
  return solver.solve(problem.kappa, problem.source_scale, u);
}

}  // namespace arks
