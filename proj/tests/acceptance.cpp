// Acceptance suite: every release property of the solver stack, one pass/fail
// line each, exit code = number of failures. Tolerances are pinned here in
// code; runtimes are wall-clock bounds on desk-scale hardware.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "lcf/io.hpp"
#include "lcf/presets.hpp"
#include "lcf/verify.hpp"

using namespace lcf;
using clock_type = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, double value, const char* cond,
            double seconds) {
  std::printf("[%2d] %-34s %s  value = %.3e  (%s, %.1f s)\n", id, name,
              ok ? "PASS" : "FAIL", value, cond, seconds);
  if (!ok) ++failures;
}

double elapsed(const clock_type::time_point& t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

ControlProblem tracking_problem_16(int nsteps, DirectorBC& h0_out) {
  Problem p = make_driven(16, cfl_dt(GridSpec{.nx = 16, .ny = 16}, 0.5), nsteps,
                          0.3, 0.0);
  ControlProblem prob;
  prob.spec = p.spec;
  prob.u0 = p.u0;
  prob.d0 = p.d0;
  prob.d0_trace = p.d0_trace;
  prob.opts = p.opts;

  Grid g = build_grid(p.spec);
  DirectorBC hstar = make_target_control(g, nsteps, 0.3);
  for (int k = 0; k < g.m; ++k)
    for (int c = 0; c < 3; ++c) hstar.at(k, 0)[c] = p.d0_trace[3 * k + c];
  Trajectory ref = simulate(g, p.u0, p.d0, hstar, p.forcing, p.opts, &p.d0_trace);
  for (int lvl = 0; lvl <= nsteps; ++lvl) {
    prob.targets.u_qt.push_back(ref.states[lvl].u);
    prob.targets.d_qt.push_back(ref.states[lvl].d);
  }
  prob.targets.u_omega = ref.states.back().u;
  prob.targets.d_omega = ref.states.back().d;
  prob.weights = CostWeights{1.0, 1.0, 0.0, 0.0, 0.0};
  h0_out = p.bc;  // constant extension of the initial trace
  return prob;
}

// smooth driven problem with every cost term active (duality/gradient checks)
ControlProblem driven_problem_16(int nsteps, DirectorBC& h_out) {
  Problem p = make_driven(16, cfl_dt(GridSpec{.nx = 16, .ny = 16}, 0.5), nsteps,
                          0.35, 0.25);
  ControlProblem prob;
  prob.spec = p.spec;
  prob.u0 = p.u0;
  prob.d0 = p.d0;
  prob.d0_trace = p.d0_trace;
  prob.opts = p.opts;
  VectorField3 pole(16, 16);
  for (size_t q = 0; q < pole.cells(); ++q) pole.data[3 * q + 2] = 1.0;
  prob.targets.u_qt.assign(1, VectorField2(16, 16));
  prob.targets.d_qt.assign(1, pole);
  prob.targets.u_omega = VectorField2(16, 16);
  prob.targets.d_omega = pole;
  prob.weights = CostWeights{0.8, 1.0, 0.6, 0.9, 0.3};
  h_out = p.bc;
  return prob;
}

}  // namespace

int main() {
  std::printf("acceptance suite\n----------------\n");

  // 1 & 2: unit-sphere preservation and solenoidal velocity on a driven run
  {
    const auto t0 = clock_type::now();
    Problem p = make_driven(32, cfl_dt(GridSpec{.nx = 32, .ny = 32}, 1.0), 200);
    Grid g = build_grid(p.spec);
    Trajectory traj = simulate(g, p.u0, p.d0, p.bc, p.forcing, p.opts, &p.d0_trace);
    double unit = 0.0, div = 0.0;
    for (const FlowState& s : traj.states) {
      unit = std::max(unit, unit_norm_error(s.d));
      div = std::max(div, max_divergence(g, s.u));
    }
    const double secs = elapsed(t0);
    report(1, "unit-sphere preservation", unit <= 1e-12 && secs <= 10.0, unit,
           "max | |d|-1 | <= 1e-12, <= 10 s", secs);
    report(2, "divergence-free velocity", div <= 1e-10, div,
           "max |div u| <= 1e-10", secs);
  }

  // 3: stationary exactness
  {
    const auto t0 = clock_type::now();
    Problem p = make_stationary(16, cfl_dt(GridSpec{.nx = 16, .ny = 16}, 1.0), 100);
    Grid g = build_grid(p.spec);
    Trajectory traj = simulate(g, p.u0, p.d0, p.bc, p.forcing, p.opts, &p.d0_trace);
    double drift = 0.0;
    for (const FlowState& s : traj.states) {
      for (size_t q = 0; q < s.d.data.size(); ++q)
        drift = std::max(drift, std::abs(s.d.data[q] - p.d0.data[q]));
      for (double v : s.u.ux) drift = std::max(drift, std::abs(v));
      for (double v : s.u.uy) drift = std::max(drift, std::abs(v));
      for (double v : s.p.data) drift = std::max(drift, std::abs(v));
    }
    report(3, "stationary exactness", drift <= 1e-13, drift,
           "state drift <= 1e-13 over 100 steps", elapsed(t0));
  }

  // 4: hemisphere maximum principle on 64^2
  {
    const auto t0 = clock_type::now();
    Problem p = make_hemisphere(64, cfl_dt(GridSpec{.nx = 64, .ny = 64}, 1.0), 200);
    Grid g = build_grid(p.spec);
    Trajectory traj = simulate(g, p.u0, p.d0, p.bc, p.forcing, p.opts, &p.d0_trace);
    double min_d3 = 1.0;
    for (const FlowState& s : traj.states)
      min_d3 = std::min(min_d3, hemisphere_min(s.d));
    report(4, "hemisphere maximum principle", min_d3 >= -1e-8, min_d3,
           "min d3 >= -1e-8 on 64^2", elapsed(t0));
  }

  // 5: energy balance under refinement, static trace
  {
    const auto t0 = clock_type::now();
    auto residuals = [](double dt, int nsteps) {
      Problem p = make_relaxation(24, dt, nsteps, 0.02);
      Grid g = build_grid(p.spec);
      Trajectory traj = simulate(g, p.u0, p.d0, p.bc, p.forcing, p.opts, &p.d0_trace);
      double worst = 0.0, pos = 0.0;
      for (double r : energy_balance_series(traj)) {
        worst = std::max(worst, std::abs(r));
        pos = std::max(pos, r);
      }
      return std::pair(worst, pos);
    };
    auto [r0, p0] = residuals(2e-5, 40);
    auto [r1, p1] = residuals(1e-5, 80);
    auto [r2, p2] = residuals(5e-6, 160);
    (void)p0; (void)p1;
    const bool ok = (r0 / r1 >= 1.8) && (r1 / r2 >= 1.8) && (p2 <= 1e-10);
    report(5, "energy balance refinement", ok, std::min(r0 / r1, r1 / r2),
           "residual drop >= 1.8 per halving, positive part <= 1e-10",
           elapsed(t0));
  }

  // 6: difference quotients converge to the tangent flow
  DirectorBC h16;
  ControlProblem prob16 = driven_problem_16(50, h16);
  {
    const auto t0 = clock_type::now();
    Grid g = build_grid(prob16.spec);
    TangentBoundarySection xi = verify::random_section(g, h16, 616, 0.4);
    verify::ConvergenceReport rep = verify::linearization_convergence(
        prob16, h16, xi, {1e-2, 5e-3, 2.5e-3});
    report(6, "tangent consistency order", rep.slope >= 0.9, rep.slope,
           "fitted slope >= 0.9", elapsed(t0));
  }

  // 7: transpose duality over random sections
  {
    const auto t0 = clock_type::now();
    const double gap = verify::duality_check(prob16, h16, 10, 707);
    report(7, "tangent/adjoint duality", gap <= 1e-10, gap,
           "worst relative gap <= 1e-10 over 10 sections", elapsed(t0));
  }

  // 8: adjoint gradient against the finite-difference oracle
  {
    const auto t0 = clock_type::now();
    Trajectory traj = solve_forward(prob16, h16);
    AdjointState adj = solve_adjoint(traj, prob16.targets, prob16.weights);
    TangentBoundarySection xi =
        verify::random_section(traj.grid, h16, 808, 0.5);
    const double pairing = gradient_pairing(h16, xi, adj, traj, prob16.weights);
    const double fd = verify::fd_directional_derivative(prob16, h16, xi, 1e-4);
    const double gap = std::abs(pairing - fd) / std::max(1.0, std::abs(fd));
    const double secs = elapsed(t0);
    report(8, "gradient vs finite differences", gap <= 1e-6 && secs <= 30.0,
           gap, "relative gap <= 1e-6 at eps = 1e-4, <= 30 s", secs);
  }

  // 9 & 10: boundary-control optimization and the stationarity certificate
  {
    const auto t0 = clock_type::now();
    DirectorBC h0;
    ControlProblem prob = tracking_problem_16(50, h0);
    OptimizeConfig cfg;
    cfg.M = 60.0;
    cfg.step0 = 2.0;
    cfg.max_iters = 100;
    cfg.grad_tol = 2e-4;
    OptimizeResult res = optimize(prob, h0, cfg);
    const double secs = elapsed(t0);

    const auto& its = res.history.iters;
    bool nonincreasing = true;
    double feas_worst = 0.0;
    for (size_t k = 1; k < its.size(); ++k) {
      if (its[k].cost > its[k - 1].cost) nonincreasing = false;
      feas_worst = std::max(feas_worst, its[k].feasibility_norm);
    }
    Grid g = build_grid(prob.spec);
    bool feasible = feas_worst <= cfg.M + 1e-12;
    try {
      validate_bc(g, res.h, &prob.d0_trace);  // hemisphere, unit, compatible
    } catch (const Error&) {
      feasible = false;
    }
    const double ratio = its.back().cost / its.front().cost;
    const bool ok9 = nonincreasing && feasible && ratio <= 0.1 &&
                     int(its.size()) <= 101 && secs <= 300.0;
    report(9, "tracking optimization", ok9, ratio,
           "cost nonincreasing, final <= 10% initial, feasible, <= 5 min", secs);

    // certificate at the returned control
    const auto t1 = clock_type::now();
    Trajectory traj = solve_forward(prob, res.h);
    AdjointState adj = solve_adjoint(traj, prob.targets, prob.weights);
    ChartControl z = to_chart(res.h);
    std::mt19937_64 rng(910);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      ChartControl zp = z;
      for (int n = 1; n < zp.nlevels; ++n)
        for (int j = 0; j < zp.m; ++j) {
          zp.at(j, n)[0] += 0.3 * uni(rng);
          zp.at(j, n)[1] += 0.3 * uni(rng);
        }
      ChartControl zhat = project_feasible(zp, cfg.M);
      ChartControl dz(z.m, z.nlevels);
      for (size_t q = 0; q < dz.z.size(); ++q) dz.z[q] = zhat.z[q] - z.z[q];
      TangentBoundarySection xi = build_tangent_from_chart(res.h, dz);
      const double pairing = gradient_pairing(res.h, xi, adj, traj, prob.weights);
      double norm = 0.0;
      for (int n = 0; n <= traj.nsteps(); ++n) {
        const double wt = time_weight(n, traj.nsteps()) * prob.spec.dt;
        for (int j = 0; j < g.m; ++j) {
          const double* x = xi.at(j, n);
          norm += wt * g.boundary[j].ds * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        }
      }
      norm = std::sqrt(norm);
      if (norm > 0.0) worst = std::min(worst, pairing / norm);
      else worst = std::min(worst, pairing >= 0.0 ? 0.0 : -1.0);
    }
    report(10, "stationarity certificate", worst >= -cfg.grad_tol, worst,
           "pairing >= -grad_tol * ||xi|| over 100 feasible directions",
           elapsed(t1));
  }

  // 11: manufactured-solution convergence
  {
    const auto t0 = clock_type::now();
    verify::ManufacturedReport rep = verify::manufactured_suite({8, 12, 16}, 0.01);
    const bool ok = rep.u.slope >= 0.9 && rep.d.slope >= 0.9;
    report(11, "manufactured convergence", ok,
           std::min(rep.u.slope, rep.d.slope),
           "fitted space-time slopes >= 0.9 for velocity and director",
           elapsed(t0));
  }

  // 12: pointwise tangency of the tangent flow
  {
    const auto t0 = clock_type::now();
    Trajectory traj = solve_forward(prob16, h16);
    TangentBoundarySection xi = verify::random_section(traj.grid, h16, 1212, 0.8);
    auto lin = solve_linearized(traj, xi);
    const double worst = tangency_residual(lin, traj);
    report(12, "tangent flow stays tangent", worst <= 1e-10, worst,
           "max |<phi, d>| <= 1e-10", elapsed(t0));
  }

  std::printf("----------------\n%s (%d failure%s)\n",
              failures == 0 ? "ALL CRITERIA PASS" : "CRITERIA FAILED", failures,
              failures == 1 ? "" : "s");
  return failures;
}
