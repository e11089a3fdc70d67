#ifndef LCF_OPS_HPP_
#define LCF_OPS_HPP_

#include "lcf/field.hpp"
#include "lcf/grid.hpp"

// Stencil kernels shared by the solvers. Cell-centered fields take Dirichlet
// data through boundary traces sampled at face midpoints; the production ghost
// rule is linear extrapolation through the face value, g = 2h - f_cell.
// Every nonlinear kernel ships with a directional-derivative (jvp) and a
// transpose (vjp) entry point so the tangent and adjoint sweeps can reuse the
// exact discrete stencils. The jvp/vjp pairs are verified by dot-product tests.
//
// Trace layout: ncomp doubles per boundary sample, sample-major (m*ncomp).
// A null trace pointer means a homogeneous (zero) Dirichlet value.

namespace lcf {

// ---- divergence / gradient / projection plumbing (MAC duality) ----

void divergence(const Grid& g, const VectorField2& u, ScalarField& out);

// Pressure gradient on interior faces; boundary-normal faces stay zero.
void gradient_faces(const Grid& g, const ScalarField& p, VectorField2& out);

// Fused div(grad(p)) with homogeneous Neumann walls; equals the composition
// of the two kernels above entrywise.
void poisson_apply(const Grid& g, const ScalarField& p, ScalarField& out);

// (I - alpha*Laplacian) on staggered faces with no-slip tangential ghosts.
// Acts on interior faces; boundary-normal faces pass through unchanged.
void helmholtz_apply(const Grid& g, double alpha, const VectorField2& u,
                     VectorField2& out);

// Difference between the second-order one-sided wall closure of the viscous
// operator and the symmetric reflection closure used inside the implicit
// solve. Nonzero only on wall-adjacent faces; applied explicitly as a
// deferred correction so the Helmholtz operator stays symmetric.
void viscous_ring_correction(const Grid& g, const VectorField2& u,
                             VectorField2& out);
void viscous_ring_correction_vjp(const Grid& g, const VectorField2& cout,
                                 VectorField2& cu);

// ---- cell-centered derivative kernels ----

// Centered first derivatives at cell centers, trace ghosts on the walls.
void cell_gradient(const Grid& g, const VectorField3& f, const double* trace,
                   VectorField3& fx, VectorField3& fy);
void cell_gradient_vjp(const Grid& g, const VectorField3& cfx,
                       const VectorField3& cfy, VectorField3& cf,
                       double* ctrace);

// Five-point Laplacian at cells, trace ghosts. Scalar and 3-vector variants.
void laplacian_cells(const Grid& g, const ScalarField& f, const double* trace,
                     ScalarField& out);
void laplacian_cells(const Grid& g, const VectorField3& f, const double* trace,
                     VectorField3& out);
void laplacian_cells_vjp(const Grid& g, const VectorField3& cout,
                         VectorField3& cf, double* ctrace);

// Laplacian with explicit ghost values (exact-data variant used by tests and
// oracles): ghost arrays hold the sample of f at the ghost cell centers,
// one row per side in boundary-sample order.
void laplacian_cells_ghost(const Grid& g, const ScalarField& f,
                           const double* ghost, ScalarField& out);

// ---- nonlinear kernels of the director equation ----

// |grad d|^2 at cells from the centered cell gradients.
void gradsq(const Grid& g, const VectorField3& d, const double* trace,
            ScalarField& out);
// Directional derivative along (phi, xi): 2 <grad d, grad phi>.
void gradsq_jvp(const Grid& g, const VectorField3& d, const double* trace,
                const VectorField3& phi, const double* xi, ScalarField& out);
void gradsq_vjp(const Grid& g, const VectorField3& d, const double* trace,
                const ScalarField& cout, VectorField3& cphi, double* cxi);

// Face velocities averaged to cell centers. cux/cuy variant is the transpose.
void faces_to_centers(const Grid& g, const VectorField2& u, ScalarField& ucx,
                      ScalarField& ucy);
void faces_to_centers_vjp(const Grid& g, const ScalarField& cucx,
                          const ScalarField& cucy, VectorField2& cu);

// (u . grad) f at cells, centered differencing (optional first-order upwind).
void advect_cells(const Grid& g, const VectorField2& u, const VectorField3& f,
                  const double* trace, bool upwind, VectorField3& out);
void advect_cells_jvp(const Grid& g, const VectorField2& u,
                      const VectorField3& f, const double* trace, bool upwind,
                      const VectorField2& du, const VectorField3& df,
                      const double* dtrace, VectorField3& out);
void advect_cells_vjp(const Grid& g, const VectorField2& u,
                      const VectorField3& f, const double* trace, bool upwind,
                      const VectorField3& cout, VectorField2& cu,
                      VectorField3& cf, double* ctrace);

// ---- momentum kernels ----

// (u . grad) u at interior faces.
void advect_faces(const Grid& g, const VectorField2& u, bool upwind,
                  VectorField2& out);
void advect_faces_jvp(const Grid& g, const VectorField2& u, bool upwind,
                      const VectorField2& du, VectorField2& out);
void advect_faces_vjp(const Grid& g, const VectorField2& u, bool upwind,
                      const VectorField2& cout, VectorField2& cu);

// Elastic stress tensor at cells: s[a][b] = <grad_a d, grad_b d>.
struct StressTensor {
  ScalarField s11, s12, s21, s22;
};
StressTensor elastic_stress(const Grid& g, const VectorField3& d,
                            const double* trace);

// div(grad d (x) grad d) evaluated at interior faces. The diagonal entries
// are differenced between cell centers; the off-diagonal entry is built at
// grid nodes, with one-sided second-order normal derivatives against the
// trace on wall nodes.
void stress_force(const Grid& g, const VectorField3& d, const double* trace,
                  VectorField2& out);
void stress_force_jvp(const Grid& g, const VectorField3& d, const double* trace,
                      const VectorField3& phi, const double* xi,
                      VectorField2& out);
void stress_force_vjp(const Grid& g, const VectorField3& d, const double* trace,
                      const VectorField2& cout, VectorField3& cphi,
                      double* cxi);

// ---- pointwise sphere kernels ----

// d / |d| per cell; throws DegenerateDirector if any norm < 0.5.
void renormalize_director(const VectorField3& d, VectorField3& out);
// Tangent map of renormalization at base d_raw: (v - n<n,v>)/|d_raw| with
// n = d_raw/|d_raw|. The Jacobian is symmetric, so jvp and vjp coincide.
void renormalize_jvp(const VectorField3& d_raw, const VectorField3& v,
                     VectorField3& out);

}  // namespace lcf

#endif
