#include "lcf/linearized.hpp"

#include <cmath>
#include <string>

#include "lcf/errors.hpp"
#include "lcf/ops.hpp"

namespace lcf {

void validate_section(const TangentBoundarySection& xi, const DirectorBC& h) {
  if (xi.m != h.m || xi.nlevels != h.nlevels)
    throw InvalidParameter("section: shape does not match the control");
  for (int j = 0; j < xi.m; ++j)
    for (int c = 0; c < 3; ++c)
      if (xi.at(j, 0)[c] != 0.0)
        throw InvalidParameter("section: nonzero entry at time level 0");
  for (int n = 0; n < xi.nlevels; ++n)
    for (int j = 0; j < xi.m; ++j) {
      const double* x = xi.at(j, n);
      const double* hv = h.at(j, n);
      if (std::abs(x[0] * hv[0] + x[1] * hv[1] + x[2] * hv[2]) > 1e-12)
        throw InvalidParameter("section: not tangent at sample " + std::to_string(j) +
                               " level " + std::to_string(n));
    }
}

namespace {

// One tangent step about the stored step n -> n+1. Mirrors the forward
// sub-step order exactly; mode Continuous skips the renormalization tangent.
void tangent_step(const Trajectory& traj, int n, const VectorField2& omega,
                  const VectorField3& phi, const double* xi_n,
                  const double* xi_np1, LinMode mode, VectorField2& omega_out,
                  ScalarField& lp_out, VectorField3& phi_out) {
  const Grid& g = traj.grid;
  const SimOptions& opts = traj.opts;
  const int nx = g.nx(), ny = g.ny();
  const double dt = g.spec.dt;
  const FlowState& cur = traj.states[n];
  const FlowState& nxt = traj.states[n + 1];
  const double* trace_n = traj.bc.row(n);

  if (opts.freeze_velocity) {
    omega_out = omega;
    lp_out = ScalarField(nx, ny);
  } else {
    VectorField2 conv(nx, ny), force(nx, ny), ring(nx, ny);
    advect_faces_jvp(g, cur.u, opts.upwind, omega, conv);
    stress_force_jvp(g, cur.d, trace_n, phi, xi_n, force);
    viscous_ring_correction(g, omega, ring);
    VectorField2 b = omega;
    const double lam = g.spec.lambda, nu = g.spec.nu;
#pragma omp parallel for
    for (size_t q = 0; q < b.ux.size(); ++q)
      b.ux[q] += dt * (-conv.ux[q] - lam * force.ux[q] + nu * ring.ux[q]);
#pragma omp parallel for
    for (size_t q = 0; q < b.uy.size(); ++q)
      b.uy[q] += dt * (-conv.uy[q] - lam * force.uy[q] + nu * ring.uy[q]);
    for (int j = 0; j < ny; ++j) { b.x(0, j) = 0.0; b.x(nx, j) = 0.0; }
    for (int i = 0; i < nx; ++i) { b.y(i, 0) = 0.0; b.y(i, ny) = 0.0; }
    VectorField2 wstar = helmholtz_solve(g, dt * g.spec.nu, b, opts.cg);
    ProjectionResult proj = pressure_projection(g, wstar, dt, opts.cg);
    omega_out = std::move(proj.u);
    lp_out = std::move(proj.p);
  }

  // director tangent
  VectorField3 lap(nx, ny), adv(nx, ny);
  laplacian_cells(g, phi, xi_np1, lap);
  advect_cells_jvp(g, nxt.u, cur.d, trace_n, opts.upwind, omega_out, phi, xi_n, adv);
  ScalarField gsq_(nx, ny), dgsq(nx, ny);
  if (!opts.disable_gradsq) {
    gradsq(g, cur.d, trace_n, gsq_);
    gradsq_jvp(g, cur.d, trace_n, phi, xi_n, dgsq);
  }

  VectorField3 raw(nx, ny);
  const double mu = g.spec.mu;
  const size_t ncells = raw.cells();
#pragma omp parallel for
  for (size_t q = 0; q < ncells; ++q)
    for (int c = 0; c < 3; ++c)
      raw.data[3 * q + c] =
          phi.data[3 * q + c] +
          dt * (mu * (lap.data[3 * q + c] + dgsq.data[q] * cur.d.data[3 * q + c] +
                      gsq_.data[q] * phi.data[3 * q + c]) -
                adv.data[3 * q + c]);

  if (mode == LinMode::Discrete) {
    Forcing forcing;  // sources are state-independent, they drop out here
    VectorField3 d_raw = director_step_raw(g, nxt.u, cur.d, trace_n,
                                           traj.bc.row(n + 1), cur.t, dt,
                                           forcing, opts);
    phi_out = VectorField3(nx, ny);
    renormalize_jvp(d_raw, raw, phi_out);
  } else {
    phi_out = std::move(raw);
  }
}

}  // namespace

std::vector<LinearizedState> solve_linearized(const Trajectory& traj,
                                              const TangentBoundarySection& xi,
                                              LinMode mode) {
  const Grid& g = traj.grid;
  validate_section(xi, traj.bc);

  std::vector<LinearizedState> lin;
  lin.reserve(traj.nsteps() + 1);
  lin.emplace_back(g.nx(), g.ny());  // zero initial data
  for (int n = 0; n < traj.nsteps(); ++n) {
    LinearizedState next(g.nx(), g.ny());
    tangent_step(traj, n, lin.back().omega, lin.back().phi, xi.row(n),
                 xi.row(n + 1), mode, next.omega, next.lin_p, next.phi);
    lin.push_back(std::move(next));
  }
  return lin;
}

double tangency_residual(const std::vector<LinearizedState>& lin,
                         const Trajectory& traj) {
  double worst = 0.0;
  for (size_t n = 0; n < lin.size(); ++n) {
    const VectorField3& phi = lin[n].phi;
    const VectorField3& d = traj.states[n].d;
    for (size_t q = 0; q < d.cells(); ++q) {
      const double v = phi.data[3 * q] * d.data[3 * q] +
                       phi.data[3 * q + 1] * d.data[3 * q + 1] +
                       phi.data[3 * q + 2] * d.data[3 * q + 2];
      worst = std::max(worst, std::abs(v));
    }
  }
  return worst;
}

double cost_derivative_via_tangent(const std::vector<LinearizedState>& lin,
                                   const Trajectory& traj,
                                   const TargetSet& targets,
                                   const CostWeights& w,
                                   const TangentBoundarySection& xi) {
  const Grid& g = traj.grid;
  const int N = traj.nsteps();
  const double dt = g.spec.dt;
  double s = 0.0;

  VectorField2 du(g.nx(), g.ny());
  VectorField3 dd(g.nx(), g.ny());
  for (int n = 0; n <= N; ++n) {
    const double wt = time_weight(n, N) * dt;
    if (w.beta1 > 0.0) {
      const VectorField2& uq = targets.uqt(n);
      for (size_t q = 0; q < du.ux.size(); ++q) du.ux[q] = traj.states[n].u.ux[q] - uq.ux[q];
      for (size_t q = 0; q < du.uy.size(); ++q) du.uy[q] = traj.states[n].u.uy[q] - uq.uy[q];
      s += w.beta1 * wt * face_inner(g, du, lin[n].omega);
    }
    if (w.beta2 > 0.0) {
      const VectorField3& dq = targets.dqt(n);
      for (size_t q = 0; q < dd.data.size(); ++q) dd.data[q] = traj.states[n].d.data[q] - dq.data[q];
      s += w.beta2 * wt * cell_inner3(g, dd, lin[n].phi);
    }
  }
  if (w.beta3 > 0.0) {
    for (size_t q = 0; q < du.ux.size(); ++q) du.ux[q] = traj.states[N].u.ux[q] - targets.u_omega.ux[q];
    for (size_t q = 0; q < du.uy.size(); ++q) du.uy[q] = traj.states[N].u.uy[q] - targets.u_omega.uy[q];
    s += w.beta3 * face_inner(g, du, lin[N].omega);
  }
  if (w.beta4 > 0.0) {
    for (size_t q = 0; q < dd.data.size(); ++q) dd.data[q] = traj.states[N].d.data[q] - targets.d_omega.data[q];
    s += w.beta4 * cell_inner3(g, dd, lin[N].phi);
  }
  if (w.beta5 > 0.0) {
    double acc = 0.0;
    for (int n = 0; n <= N; ++n) {
      const double wt = time_weight(n, N) * dt;
      double row = 0.0;
      for (int j = 0; j < g.m; ++j) {
        const double* hv = traj.bc.at(j, n);
        const double* xv = xi.at(j, n);
        row += g.boundary[j].ds *
               (hv[0] * xv[0] + hv[1] * xv[1] + (hv[2] - 1.0) * xv[2]);
      }
      acc += wt * row;
    }
    s += w.beta5 * acc;
  }
  return s;
}

namespace {

double l2_faces(const Grid& g, const VectorField2& u) {
  return std::sqrt(face_inner(g, u, u));
}

double l2_cells3(const Grid& g, const VectorField3& f) {
  return std::sqrt(cell_inner3(g, f, f));
}

// Interior-difference seminorms; traces cancel in the difference quotients
// these norms compare, so boundary closures are unnecessary.
double h1_semi_faces(const Grid& g, const VectorField2& u) {
  double s = 0.0;
  const int nx = g.nx(), ny = g.ny();
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i <= nx; ++i) {
      const double v = (u.x(i, j) - u.x(i - 1, j)) / g.dx;
      s += v * v;
    }
  for (int j = 0; j < ny - 1; ++j)
    for (int i = 1; i < nx; ++i) {
      const double v = (u.x(i, j + 1) - u.x(i, j)) / g.dy;
      s += v * v;
    }
  for (int j = 1; j <= ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double v = (u.y(i, j) - u.y(i, j - 1)) / g.dy;
      s += v * v;
    }
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx - 1; ++i) {
      const double v = (u.y(i + 1, j) - u.y(i, j)) / g.dx;
      s += v * v;
    }
  return std::sqrt(s * g.cell_volume());
}

double h1_semi_cells3(const Grid& g, const VectorField3& f) {
  double s = 0.0;
  const int nx = g.nx(), ny = g.ny();
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i)
      for (int c = 0; c < 3; ++c) {
        const double v = (f(i + 1, j, c) - f(i, j, c)) / g.dx;
        s += v * v;
      }
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i < nx; ++i)
      for (int c = 0; c < 3; ++c) {
        const double v = (f(i, j + 1, c) - f(i, j, c)) / g.dy;
        s += v * v;
      }
  return std::sqrt(s * g.cell_volume());
}

double h2_semi_cells3(const Grid& g, const VectorField3& f) {
  double s = 0.0;
  const int nx = g.nx(), ny = g.ny();
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i + 1 < nx; ++i)
      for (int c = 0; c < 3; ++c) {
        const double v = (f(i + 1, j, c) - 2.0 * f(i, j, c) + f(i - 1, j, c)) / (g.dx * g.dx);
        s += v * v;
      }
  for (int j = 1; j + 1 < ny; ++j)
    for (int i = 0; i < nx; ++i)
      for (int c = 0; c < 3; ++c) {
        const double v = (f(i, j + 1, c) - 2.0 * f(i, j, c) + f(i, j - 1, c)) / (g.dy * g.dy);
        s += v * v;
      }
  return std::sqrt(s * g.cell_volume());
}

}  // namespace

double w_norm(const Trajectory& base, const std::vector<LinearizedState>& lin) {
  const Grid& g = base.grid;
  const double dt = g.spec.dt;
  double sup = 0.0, acc = 0.0;
  for (const auto& s : lin) {
    const double a = l2_faces(g, s.omega) +
                     std::sqrt(std::pow(l2_cells3(g, s.phi), 2) +
                               std::pow(h1_semi_cells3(g, s.phi), 2));
    const double b = l2_faces(g, s.omega) + h1_semi_faces(g, s.omega) +
                     std::sqrt(std::pow(l2_cells3(g, s.phi), 2) +
                               std::pow(h1_semi_cells3(g, s.phi), 2) +
                               std::pow(h2_semi_cells3(g, s.phi), 2));
    sup = std::max(sup, a);
    acc += dt * b * b;
  }
  return sup + std::sqrt(acc);
}

}  // namespace lcf
