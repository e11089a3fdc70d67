#include "lcf/adjoint.hpp"

#include <cmath>

#include "lcf/errors.hpp"
#include "lcf/ops.hpp"
#include "lcf/solver.hpp"

namespace lcf {

// defined in adjoint_continuous.cpp
void solve_adjoint_continuous(const Trajectory& traj, const TargetSet& targets,
                              const CostWeights& w, AdjointState& adj);

namespace {

void axpy_faces(VectorField2& y, double a, const VectorField2& x) {
  for (size_t q = 0; q < y.ux.size(); ++q) y.ux[q] += a * x.ux[q];
  for (size_t q = 0; q < y.uy.size(); ++q) y.uy[q] += a * x.uy[q];
}

void axpy_cells3(VectorField3& y, double a, const VectorField3& x) {
  for (size_t q = 0; q < y.data.size(); ++q) y.data[q] += a * x.data[q];
}

void zero_boundary_faces(const Grid& g, VectorField2& u) {
  for (int j = 0; j < g.ny(); ++j) { u.x(0, j) = 0.0; u.x(g.nx(), j) = 0.0; }
  for (int i = 0; i < g.nx(); ++i) { u.y(i, 0) = 0.0; u.y(i, g.ny()) = 0.0; }
}

// Transpose of one tangent step about stored step n -> n+1. Consumes the raw
// cotangents of (u_{n+1}, d_{n+1}) and emits the raw cotangents of
// (u_n, d_n) plus the boundary-row contributions at levels n and n+1.
void step_vjp(const Trajectory& traj, int n, const VectorField2& cu,
              const VectorField3& cd, LinMode mode, VectorField2& cu_prev,
              VectorField3& cd_prev, double* cxi_n, double* cxi_np1) {
  const Grid& g = traj.grid;
  const SimOptions& opts = traj.opts;
  const int nx = g.nx(), ny = g.ny();
  const double dt = g.spec.dt;
  const FlowState& cur = traj.states[n];
  const FlowState& nxt = traj.states[n + 1];
  const double* trace_n = traj.bc.row(n);

  // ---- director update, reversed ----
  VectorField3 c_raw(nx, ny);
  if (mode == LinMode::Discrete) {
    Forcing none;
    VectorField3 d_raw = director_step_raw(g, nxt.u, cur.d, trace_n,
                                           traj.bc.row(n + 1), cur.t, dt, none,
                                           opts);
    renormalize_jvp(d_raw, cd, c_raw);  // symmetric Jacobian
  } else {
    c_raw = cd;
  }

  cd_prev = c_raw;  // identity term of the explicit update

  ScalarField gsq_(nx, ny);
  if (!opts.disable_gradsq) {
    gradsq(g, cur.d, trace_n, gsq_);
    // gsq * phi term
    for (size_t q = 0; q < cd_prev.cells(); ++q)
      for (int c = 0; c < 3; ++c)
        cd_prev.data[3 * q + c] +=
            dt * g.spec.mu * gsq_.data[q] * c_raw.data[3 * q + c];
    // dgsq * d term
    ScalarField cdgsq(nx, ny);
    for (size_t q = 0; q < cdgsq.size(); ++q)
      cdgsq.data[q] = dt * g.spec.mu *
                      (cur.d.data[3 * q] * c_raw.data[3 * q] +
                       cur.d.data[3 * q + 1] * c_raw.data[3 * q + 1] +
                       cur.d.data[3 * q + 2] * c_raw.data[3 * q + 2]);
    gradsq_vjp(g, cur.d, trace_n, cdgsq, cd_prev, cxi_n);
  }

  {  // diffusion term with the new-level trace
    VectorField3 clap(nx, ny);
    for (size_t q = 0; q < clap.data.size(); ++q)
      clap.data[q] = dt * g.spec.mu * c_raw.data[q];
    laplacian_cells_vjp(g, clap, cd_prev, cxi_np1);
  }

  VectorField2 cu_total = cu;
  {  // advection by the new velocity
    VectorField3 cadv(nx, ny);
    for (size_t q = 0; q < cadv.data.size(); ++q)
      cadv.data[q] = -dt * c_raw.data[q];
    advect_cells_vjp(g, nxt.u, cur.d, trace_n, opts.upwind, cadv, cu_total,
                     cd_prev, cxi_n);
  }

  // ---- momentum update, reversed ----
  // the transposed stencils scatter onto boundary-normal faces, but the
  // forward tangent never varies them; drop those entries so the projection
  // transpose acts on the interior-face space it was built for
  zero_boundary_faces(g, cu_total);
  if (opts.freeze_velocity) {
    cu_prev = cu_total;
    return;
  }
  ProjectionResult proj = pressure_projection(g, cu_total, dt, opts.cg);
  VectorField2 cb = helmholtz_solve(g, dt * g.spec.nu, proj.u, opts.cg);
  zero_boundary_faces(g, cb);

  cu_prev = cb;
  {
    VectorField2 cring(nx, ny);
    axpy_faces(cring, dt * g.spec.nu, cb);
    viscous_ring_correction_vjp(g, cring, cu_prev);
  }
  {
    VectorField2 cconv(nx, ny);
    axpy_faces(cconv, -dt, cb);
    advect_faces_vjp(g, cur.u, opts.upwind, cconv, cu_prev);
  }
  {
    VectorField2 cforce(nx, ny);
    axpy_faces(cforce, -dt * g.spec.lambda, cb);
    stress_force_vjp(g, cur.d, trace_n, cforce, cd_prev, cxi_n);
  }
  zero_boundary_faces(g, cu_prev);
}

}  // namespace

AdjointState solve_adjoint(const Trajectory& traj, const TargetSet& targets,
                           const CostWeights& w, LinMode mode) {
  const Grid& g = traj.grid;
  const int N = traj.nsteps();
  const double dt = g.spec.dt;
  const double vol = g.cell_volume();
  validate_weights(w);
  validate_targets(g, targets, N);

  AdjointState adj;
  adj.mode = mode;
  adj.p1.assign(N + 1, VectorField2(g.nx(), g.ny()));
  adj.pi.assign(N + 1, ScalarField(g.nx(), g.ny()));
  adj.p2.assign(N + 1, VectorField3(g.nx(), g.ny()));
  adj.gxi = TangentBoundarySection(g.m, N + 1);

  // raw cotangents of the current level state (plain-sum pairing)
  VectorField2 gu(g.nx(), g.ny());
  VectorField3 gd(g.nx(), g.ny());

  // terminal conditions (field form; raw = field * vol)
  if (w.beta3 > 0.0) {
    axpy_faces(gu, vol * w.beta3, traj.states[N].u);
    axpy_faces(gu, -vol * w.beta3, targets.u_omega);
    zero_boundary_faces(g, gu);
  }
  if (w.beta4 > 0.0) {
    axpy_cells3(gd, vol * w.beta4, traj.states[N].d);
    axpy_cells3(gd, -vol * w.beta4, targets.d_omega);
  }
  for (size_t q = 0; q < gu.ux.size(); ++q) adj.p1[N].ux[q] = gu.ux[q] / vol;
  for (size_t q = 0; q < gu.uy.size(); ++q) adj.p1[N].uy[q] = gu.uy[q] / vol;
  for (size_t q = 0; q < gd.data.size(); ++q) adj.p2[N].data[q] = gd.data[q] / vol;
  if (mode == LinMode::Discrete) {
    ProjectionResult pr = pressure_projection(g, adj.p1[N], dt, traj.opts.cg);
    adj.pi[N] = std::move(pr.p);
  }

  if (mode == LinMode::Discrete) {
    for (int n = N - 1; n >= 0; --n) {
      // running tracking sources of level n+1 enter before the transposed step
      const double wt = time_weight(n + 1, N) * dt;
      if (w.beta1 > 0.0) {
        axpy_faces(gu, vol * w.beta1 * wt, traj.states[n + 1].u);
        axpy_faces(gu, -vol * w.beta1 * wt, targets.uqt(n + 1));
        zero_boundary_faces(g, gu);
      }
      if (w.beta2 > 0.0) {
        axpy_cells3(gd, vol * w.beta2 * wt, traj.states[n + 1].d);
        axpy_cells3(gd, -vol * w.beta2 * wt, targets.dqt(n + 1));
      }

      VectorField2 cu_prev(g.nx(), g.ny());
      VectorField3 cd_prev(g.nx(), g.ny());
      step_vjp(traj, n, gu, gd, mode, cu_prev, cd_prev, adj.gxi.row(n),
               adj.gxi.row(n + 1));
      gu = std::move(cu_prev);
      gd = std::move(cd_prev);

      // store the backpropagated multipliers in field form; the velocity
      // multiplier is reported in its divergence-free representation
      ProjectionResult pr = pressure_projection(g, gu, dt, traj.opts.cg);
      for (size_t q = 0; q < gu.ux.size(); ++q) adj.p1[n].ux[q] = pr.u.ux[q] / vol;
      for (size_t q = 0; q < gu.uy.size(); ++q) adj.p1[n].uy[q] = pr.u.uy[q] / vol;
      for (size_t q = 0; q < pr.p.size(); ++q) adj.pi[n].data[q] = pr.p.data[q] / vol;
      for (size_t q = 0; q < gd.data.size(); ++q) adj.p2[n].data[q] = gd.data[q] / vol;
    }
  } else {
    solve_adjoint_continuous(traj, targets, w, adj);
  }

  boundary_multipliers(adj, traj);
  return adj;
}

double gradient_pairing(const DirectorBC& h, const TangentBoundarySection& xi,
                        const AdjointState& adj, const Trajectory& traj,
                        const CostWeights& w) {
  const Grid& g = traj.grid;
  const int N = traj.nsteps();
  const double dt = g.spec.dt;
  double s = 0.0;

  if (adj.mode == LinMode::Discrete) {
    for (size_t q = 0; q < adj.gxi.values.size(); ++q)
      s += adj.gxi.values[q] * xi.values[q];
  } else {
    for (int n = 0; n <= N; ++n) {
      const double wt = time_weight(n, N) * dt;
      double row = 0.0;
      for (int j = 0; j < g.m; ++j) {
        const double* q2 = adj.q2_at(j, n, g.m);
        const double* xv = xi.at(j, n);
        row += g.boundary[j].ds * (q2[0] * xv[0] + q2[1] * xv[1] + q2[2] * xv[2]);
      }
      s += wt * row;
    }
  }

  if (w.beta5 > 0.0) {
    for (int n = 0; n <= N; ++n) {
      const double wt = time_weight(n, N) * dt;
      double row = 0.0;
      for (int j = 0; j < g.m; ++j) {
        const double* hv = h.at(j, n);
        const double* xv = xi.at(j, n);
        row += g.boundary[j].ds *
               (hv[0] * xv[0] + hv[1] * xv[1] + (hv[2] - 1.0) * xv[2]);
      }
      s += w.beta5 * wt * row;
    }
  }
  return s;
}

}  // namespace lcf
