#include "lcf/forward.hpp"

#include <cmath>
#include <string>

#include "lcf/errors.hpp"
#include "lcf/ops.hpp"

namespace lcf {

VectorField2 momentum_predictor(const Grid& g, const FlowState& state,
                                const double* trace, double dt,
                                const Forcing& forcing, const SimOptions& opts) {
  const int nx = g.nx(), ny = g.ny();
  VectorField2 conv(nx, ny), force(nx, ny);
  advect_faces(g, state.u, opts.upwind, conv);
  stress_force(g, state.d, trace, force);

  VectorField2 ring(nx, ny);
  viscous_ring_correction(g, state.u, ring);

  VectorField2 b = state.u;
  const double lam = g.spec.lambda, nu = g.spec.nu;
#pragma omp parallel for
  for (size_t q = 0; q < b.ux.size(); ++q)
    b.ux[q] += dt * (-conv.ux[q] - lam * force.ux[q] + nu * ring.ux[q]);
#pragma omp parallel for
  for (size_t q = 0; q < b.uy.size(); ++q)
    b.uy[q] += dt * (-conv.uy[q] - lam * force.uy[q] + nu * ring.uy[q]);
  if (forcing.f_u) {
    VectorField2 fu = forcing.f_u(g, state.t);
    for (size_t q = 0; q < b.ux.size(); ++q) b.ux[q] += dt * fu.ux[q];
    for (size_t q = 0; q < b.uy.size(); ++q) b.uy[q] += dt * fu.uy[q];
  }
  // no-slip data on the walls
  for (int j = 0; j < ny; ++j) { b.x(0, j) = 0.0; b.x(nx, j) = 0.0; }
  for (int i = 0; i < nx; ++i) { b.y(i, 0) = 0.0; b.y(i, ny) = 0.0; }

  return helmholtz_solve(g, dt * g.spec.nu, b, opts.cg);
}

VectorField3 director_step_raw(const Grid& g, const VectorField2& u_new,
                               const VectorField3& d, const double* trace_old,
                               const double* trace_new, double t, double dt,
                               const Forcing& forcing, const SimOptions& opts) {
  const int nx = g.nx(), ny = g.ny();
  VectorField3 lap(nx, ny), adv(nx, ny);
  laplacian_cells(g, d, trace_new, lap);
  advect_cells(g, u_new, d, trace_old, opts.upwind, adv);
  ScalarField gsq_(nx, ny);
  if (!opts.disable_gradsq) gradsq(g, d, trace_old, gsq_);

  VectorField3 raw(nx, ny);
  const double mu = g.spec.mu;
  const size_t n = raw.cells();
#pragma omp parallel for
  for (size_t q = 0; q < n; ++q)
    for (int c = 0; c < 3; ++c)
      raw.data[3 * q + c] = d.data[3 * q + c] +
                            dt * (mu * (lap.data[3 * q + c] +
                                        gsq_.data[q] * d.data[3 * q + c]) -
                                  adv.data[3 * q + c]);
  if (forcing.f_d) {
    VectorField3 fd = forcing.f_d(g, t);
    for (size_t q = 0; q < raw.data.size(); ++q) raw.data[q] += dt * fd.data[q];
  }
  return raw;
}

VectorField3 director_step(const Grid& g, const VectorField2& u_new,
                           const VectorField3& d, const double* trace_old,
                           const double* trace_new, double t, double dt,
                           const Forcing& forcing, const SimOptions& opts) {
  VectorField3 raw =
      director_step_raw(g, u_new, d, trace_old, trace_new, t, dt, forcing, opts);
  VectorField3 out(g.nx(), g.ny());
  renormalize_director(raw, out);
  return out;
}

Trajectory simulate(const Grid& g, const VectorField2& u0, const VectorField3& d0,
                    const DirectorBC& bc, const Forcing& forcing,
                    const SimOptions& opts, const std::vector<double>* d0_trace) {
  const int nsteps = g.spec.nsteps;
  if (bc.nlevels != nsteps + 1)
    throw InvalidParameter("simulate: bc has " + std::to_string(bc.nlevels) +
                           " levels, expected " + std::to_string(nsteps + 1));
  validate_bc(g, bc, d0_trace);
  if (unit_norm_error(d0) > 1e-12)
    throw InvalidParameter("simulate: initial director is not unit length");
  if (max_divergence(g, u0) > opts.div_tol)
    throw InvalidParameter("simulate: initial velocity is not divergence free");

  Trajectory traj{g, bc, opts, {}};
  traj.states.reserve(nsteps + 1);
  FlowState s0(g.nx(), g.ny());
  s0.u = u0;
  s0.d = d0;
  s0.t = 0.0;
  traj.states.push_back(std::move(s0));

  const double dt = g.spec.dt;
  for (int n = 0; n < nsteps; ++n) {
    const FlowState& cur = traj.states.back();
    FlowState next(g.nx(), g.ny());
    try {
      if (opts.freeze_velocity) {
        next.u = cur.u;
      } else {
        VectorField2 ustar = momentum_predictor(g, cur, bc.row(n), dt, forcing, opts);
        ProjectionResult proj = pressure_projection(g, ustar, dt, opts.cg);
        next.u = std::move(proj.u);
        next.p = std::move(proj.p);
      }
      next.d = director_step(g, next.u, cur.d, bc.row(n), bc.row(n + 1), cur.t,
                             dt, forcing, opts);
    } catch (const Error& e) {
      throw Error("simulate: step " + std::to_string(n) + " failed: " + e.what());
    }
    next.t = (n + 1) * dt;
    const double dv = max_divergence(g, next.u);
    if (dv > opts.div_tol)
      throw Error("simulate: step " + std::to_string(n) +
                  " divergence " + std::to_string(dv) + " above tolerance");
    traj.states.push_back(std::move(next));
  }
  return traj;
}

std::vector<double> energy_balance_series(const Trajectory& traj) {
  const int nsteps = traj.nsteps();
  std::vector<EnergyReport> reps(nsteps + 1);
  for (int n = 0; n <= nsteps; ++n)
    reps[n] = energy(traj.grid, traj.states[n], traj.bc);
  std::vector<double> r(nsteps);
  const double dt = traj.grid.spec.dt;
  for (int n = 0; n < nsteps; ++n)
    r[n] = reps[n + 1].total - reps[n].total + dt * reps[n].dissipation -
           dt * reps[n].boundary_flux;
  return r;
}

}  // namespace lcf
