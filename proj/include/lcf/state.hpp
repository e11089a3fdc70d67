#ifndef LCF_STATE_HPP_
#define LCF_STATE_HPP_

#include <vector>

#include "lcf/field.hpp"
#include "lcf/grid.hpp"
#include "lcf/ops.hpp"

namespace lcf {

// The (velocity, pressure, director) triple at one time level. The director
// is cell-centered; its Dirichlet trace lives in the DirectorBC row for the
// same time level and is consumed through ghost values.
struct FlowState {
  VectorField2 u;
  ScalarField p;
  VectorField3 d;
  double t = 0.0;

  FlowState() = default;
  FlowState(int nx, int ny) : u(nx, ny), p(nx, ny), d(nx, ny) {}
};

// Director boundary data h on the perimeter samples x time grid, values on
// the closed upper hemisphere. Row n is the trace at time n*dt.
struct DirectorBC {
  int m = 0;        // boundary samples
  int nlevels = 0;  // nsteps + 1
  std::vector<double> values;  // (n*m + j)*3 + c

  DirectorBC() = default;
  DirectorBC(int m_, int nlevels_)
      : m(m_), nlevels(nlevels_), values(size_t(m_) * nlevels_ * 3, 0.0) {}

  double* row(int n) { return &values[size_t(n) * m * 3]; }
  const double* row(int n) const { return &values[size_t(n) * m * 3]; }
  double* at(int j, int n) { return &values[(size_t(n) * m + j) * 3]; }
  const double* at(int j, int n) const { return &values[(size_t(n) * m + j) * 3]; }
};

// Validates unit norm (1e-12), hemisphere membership and, when a trace of the
// initial director is supplied, compatibility of row 0 with it.
void validate_bc(const Grid& g, const DirectorBC& bc,
                 const std::vector<double>* d0_trace = nullptr);

struct EnergyReport {
  double kinetic = 0.0;
  double elastic = 0.0;
  double total = 0.0;
  double dissipation = 0.0;
  double boundary_flux = 0.0;
};

// Energy functional and its dissipation/boundary-flux terms at the state's
// time level. Kinetic/dissipation use midpoint sums at cell centers; the
// elastic part uses the face-difference Dirichlet quadrature whose gradient
// is exactly the five-point operator of the director step, which keeps the
// discrete balance residual at the splitting order. The flux pairs the
// one-sided second-order normal derivative of d against the centered time
// derivative of the trace.
EnergyReport energy(const Grid& g, const FlowState& state, const DirectorBC& bc);

// Elastic part alone via plain cell-centered midpoint quadrature of
// 0.5*|grad d|^2 (used by diagnostics and tests).
double elastic_midpoint(const Grid& g, const VectorField3& d, const double* trace);

// sup over cell centers of the windowed energy integral
// int_{B_r(x) ^ domain} (|u|^2 + |grad d|^2).
double local_energy_max(const Grid& g, const FlowState& state,
                        const double* trace, double r);

// min over cells of the third director component.
double hemisphere_min(const VectorField3& d);

// max over cells of | |d| - 1 |.
double unit_norm_error(const VectorField3& d);

// max |div u| over cells.
double max_divergence(const Grid& g, const VectorField2& u);

double mean_pressure(const ScalarField& p);

// One-sided second-order outward normal derivative of d at boundary sample k.
void normal_derivative_d(const Grid& g, const VectorField3& d,
                         const double* trace, int k, double out[3]);

}  // namespace lcf

#endif
