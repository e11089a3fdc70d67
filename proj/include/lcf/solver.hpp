#ifndef LCF_SOLVER_HPP_
#define LCF_SOLVER_HPP_

#include "lcf/field.hpp"
#include "lcf/grid.hpp"

namespace lcf {

struct CgOptions {
  double rtol = 1e-13;
  double atol = 1e-15;
  int max_iters = 0;  // 0: pick from problem size
};

// Conjugate gradients on -div(grad p) = -rhs with homogeneous Neumann walls.
// The right-hand side is projected onto mean zero and the solution is
// returned mean-zero (the compatible gauge for the singular Neumann problem).
// Throws SolverError on nonconvergence, reporting the final residual.
ScalarField poisson_solve_meanzero(const Grid& g, const ScalarField& rhs,
                                   const CgOptions& opt = {});

// Conjugate gradients on (I - alpha*Laplacian) u = b over interior faces with
// no-slip walls. Boundary-normal faces of the result are zero.
VectorField2 helmholtz_solve(const Grid& g, double alpha, const VectorField2& b,
                             const CgOptions& opt = {});

// Projection onto the discrete divergence-free space:
//   p solves div(grad p) = div(u)/dt,  out = u - dt*grad(p).
// Self-adjoint in the face inner product. Returns the mean-zero p.
struct ProjectionResult {
  VectorField2 u;
  ScalarField p;
};
ProjectionResult pressure_projection(const Grid& g, const VectorField2& ustar,
                                     double dt, const CgOptions& opt = {});

// Deterministic blocked summation; result does not depend on thread count.
double blocked_sum(const double* x, size_t n);
double blocked_dot(const double* a, const double* b, size_t n);

}  // namespace lcf

#endif
