#ifndef LCF_REF_HPP_
#define LCF_REF_HPP_

#include "lcf/field.hpp"
#include "lcf/grid.hpp"

// Serial reference implementations, kept deliberately independent of the
// production kernels: cell fields are padded into explicit ghost layers and
// plain stencils applied, instead of the fused gather loops in ops.cpp.
// Tests check the production kernels against these, and the benchmark tool
// compares their runtimes.

namespace lcf::ref {

// Padded copy of a cell field with the linear trace ghost rule g = 2h - f.
// Layout: (nx+2) x (ny+2), entry (i+1, j+1) holds cell (i,j).
std::vector<double> pad_with_trace(const Grid& g, const VectorField3& f,
                                   const double* trace);

VectorField3 laplacian_cells(const Grid& g, const VectorField3& f,
                             const double* trace);
ScalarField divergence(const Grid& g, const VectorField2& u);
VectorField3 advect_cells(const Grid& g, const VectorField2& u,
                          const VectorField3& f, const double* trace);
ScalarField gradsq(const Grid& g, const VectorField3& d, const double* trace);

// One explicit diffusion step d + dt*mu*lap(d) with Dirichlet trace.
VectorField3 heat_step(const Grid& g, const VectorField3& d, const double* trace,
                       double mu, double dt);

// Viscous Laplacian of a staggered field with no-slip walls.
VectorField2 laplacian_faces(const Grid& g, const VectorField2& u);
VectorField2 advect_faces(const Grid& g, const VectorField2& u);
VectorField2 stress_force(const Grid& g, const VectorField3& d,
                          const double* trace);

// Plain accumulation quadratures (energy oracle).
double sum_cells(const ScalarField& f, double w);

}  // namespace lcf::ref

#endif
