#ifndef LCF_FORWARD_HPP_
#define LCF_FORWARD_HPP_

#include <functional>
#include <vector>

#include "lcf/solver.hpp"
#include "lcf/state.hpp"

namespace lcf {

// Source hooks for manufactured-solution verification; zero in control runs.
struct Forcing {
  std::function<VectorField2(const Grid&, double)> f_u;  // momentum source at faces
  std::function<VectorField3(const Grid&, double)> f_d;  // director source at cells
};

struct SimOptions {
  bool freeze_velocity = false;  // keep u = u0 (director relaxation runs)
  bool upwind = false;           // first-order upwind advection
  bool disable_gradsq = false;   // test hook: drop the |grad d|^2 d term
  double div_tol = 1e-10;
  CgOptions cg{1e-13, 1e-16, 0};
};

struct Trajectory {
  Grid grid;
  DirectorBC bc;
  SimOptions opts;
  std::vector<FlowState> states;  // nsteps + 1 levels

  int nsteps() const { return int(states.size()) - 1; }
};

// Semi-implicit momentum predictor: solves
//   (I - dt*nu*Lap) u* = u + dt*(-(u.grad)u - lambda*div(stress(d)) + f_u)
// with no-slip walls. The trace is the director boundary row at the state's
// own time level (the stress and advection are explicit).
VectorField2 momentum_predictor(const Grid& g, const FlowState& state,
                                const double* trace, double dt,
                                const Forcing& forcing, const SimOptions& opts);

// Explicit director update with Dirichlet trace at the new time level in the
// diffusion stencil and the old level in the explicit terms, followed by
// pointwise renormalization. The _raw variant returns the pre-renormalization
// value; the tangent and adjoint sweeps rebuild it to linearize the
// renormalization map.
VectorField3 director_step_raw(const Grid& g, const VectorField2& u_new,
                               const VectorField3& d, const double* trace_old,
                               const double* trace_new, double t, double dt,
                               const Forcing& forcing, const SimOptions& opts);
VectorField3 director_step(const Grid& g, const VectorField2& u_new,
                           const VectorField3& d, const double* trace_old,
                           const double* trace_new, double t, double dt,
                           const Forcing& forcing, const SimOptions& opts);

// March nsteps steps of predictor -> projection -> director update.
// d0_trace, when given, is checked against bc row 0 (compatibility).
Trajectory simulate(const Grid& g, const VectorField2& u0, const VectorField3& d0,
                    const DirectorBC& bc, const Forcing& forcing = {},
                    const SimOptions& opts = {},
                    const std::vector<double>* d0_trace = nullptr);

// Discrete balance residuals r_n = E_{n+1} - E_n + dt*diss_n - dt*flux_n.
std::vector<double> energy_balance_series(const Trajectory& traj);

}  // namespace lcf

#endif
