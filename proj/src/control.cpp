#include "lcf/control.hpp"

#include <cmath>
#include <string>

#include "lcf/errors.hpp"

namespace lcf {

Trajectory solve_forward(const ControlProblem& prob, const DirectorBC& h) {
  Grid g = build_grid(prob.spec);
  return simulate(g, prob.u0, prob.d0, h, prob.forcing, prob.opts,
                  prob.d0_trace.empty() ? nullptr : &prob.d0_trace);
}

void validate_optimize_config(const OptimizeConfig& cfg) {
  if (!(cfg.M > 0.0)) throw InvalidParameter("optimize: M must be positive");
  if (!(cfg.armijo_c > 0.0 && cfg.armijo_c < 1.0))
    throw InvalidParameter("optimize: armijo_c must lie in (0,1)");
  if (!(cfg.armijo_shrink > 0.0 && cfg.armijo_shrink < 1.0))
    throw InvalidParameter("optimize: armijo_shrink must lie in (0,1)");
  if (!(cfg.step0 > 0.0)) throw InvalidParameter("optimize: step0 must be positive");
  if (cfg.max_iters < 1) throw InvalidParameter("optimize: max_iters must be >= 1");
}

double chart_l2_inner(const Grid& g, const ChartControl& a, const ChartControl& b,
                      double dt) {
  const int N = a.nlevels - 1;
  double s = 0.0;
  for (int n = 0; n <= N; ++n) {
    const double wt = time_weight(n, N) * dt;
    double row = 0.0;
    for (int j = 0; j < a.m; ++j)
      row += g.boundary[j].ds *
             (a.at(j, n)[0] * b.at(j, n)[0] + a.at(j, n)[1] * b.at(j, n)[1]);
    s += wt * row;
  }
  return s;
}

double chart_l2_norm(const Grid& g, const ChartControl& a, double dt) {
  return std::sqrt(chart_l2_inner(g, a, a, dt));
}

ChartControl chart_gradient(const DirectorBC& h, const AdjointState& adj,
                            const Trajectory& traj, const CostWeights& w) {
  const Grid& g = traj.grid;
  const int N = traj.nsteps();
  const double dt = g.spec.dt;
  ChartControl grad(h.m, h.nlevels);

  for (int n = 1; n <= N; ++n) {
    const double wt = time_weight(n, N) * dt;
    for (int j = 0; j < g.m; ++j) {
      const double* hv = h.at(j, n);
      // raw boundary cotangent: transposed-trace accumulation plus the
      // regularization term with its quadrature weights
      double raw[3];
      for (int c = 0; c < 3; ++c) raw[c] = adj.gxi.at(j, n)[c];
      if (w.beta5 > 0.0) {
        const double q = w.beta5 * wt * g.boundary[j].ds;
        raw[0] += q * hv[0];
        raw[1] += q * hv[1];
        raw[2] += q * (hv[2] - 1.0);
      }
      double z[2], J[3][2];
      chart_forward(hv, z);
      chart_inverse_jacobian(z, J);
      const double scale = 1.0 / (wt * g.boundary[j].ds);
      double* gz = grad.at(j, n);
      gz[0] = scale * (J[0][0] * raw[0] + J[1][0] * raw[1] + J[2][0] * raw[2]);
      gz[1] = scale * (J[0][1] * raw[0] + J[1][1] * raw[1] + J[2][1] * raw[2]);
    }
  }
  return grad;
}

namespace {

ChartControl chart_axpy(const ChartControl& z, double a, const ChartControl& d) {
  ChartControl out = z;
  for (size_t q = 0; q < out.z.size(); ++q) out.z[q] += a * d.z[q];
  return out;
}

}  // namespace

OptimizeResult optimize(const ControlProblem& prob, const DirectorBC& h0,
                        const OptimizeConfig& cfg) {
  validate_optimize_config(cfg);
  Grid g = build_grid(prob.spec);
  validate_weights(prob.weights);
  validate_targets(g, prob.targets, prob.spec.nsteps);
  const double dt = prob.spec.dt;

  ChartControl z = to_chart(h0);
  if (discrete_U_norm(z) > cfg.M * (1.0 + 1e-12))
    throw InfeasibleBase("optimize: initial control is infeasible, norm " +
                         std::to_string(discrete_U_norm(z)) + " > M");

  OptimizeResult res{h0, {}};
  double best_cost = 0.0;
  double step = cfg.step0;

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    DirectorBC h = from_chart(z);
    Trajectory traj = solve_forward(prob, h);
    CostBreakdown cb = cost(traj, h, prob.targets, prob.weights);
    AdjointState adj = solve_adjoint(traj, prob.targets, prob.weights);
    ChartControl grad = chart_gradient(h, adj, traj, prob.weights);
    const double gnorm = chart_l2_norm(g, grad, dt);

    IterRecord rec;
    rec.iter = iter;
    rec.cost = cb.total;
    for (int k = 0; k < 5; ++k) rec.term[k] = cb.term[k];
    rec.grad_norm = gnorm;
    rec.feasibility_norm = discrete_U_norm(z);
    rec.step = 0.0;

    if (iter == 0) {
      best_cost = cb.total;
      res.h = h;
    }

    if (gnorm == 0.0) {
      res.history.stationary_at_start = (iter == 0);
      res.history.reached_grad_tol = true;
      res.history.iters.push_back(rec);
      res.h = h;
      break;
    }

    // projected-gradient stationarity measure at the reference step
    ChartControl zref = project_feasible(chart_axpy(z, -cfg.step0, grad), cfg.M);
    ChartControl pg(z.m, z.nlevels);
    for (size_t q = 0; q < pg.z.size(); ++q)
      pg.z[q] = (z.z[q] - zref.z[q]) / cfg.step0;
    if (chart_l2_norm(g, pg, dt) <= cfg.grad_tol) {
      res.history.reached_grad_tol = true;
      res.history.iters.push_back(rec);
      res.h = h;
      break;
    }

    // Armijo backtracking on the projected step
    bool accepted = false;
    for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
      ChartControl zt = project_feasible(chart_axpy(z, -step, grad), cfg.M);
      ChartControl pga(z.m, z.nlevels);
      for (size_t q = 0; q < pga.z.size(); ++q)
        pga.z[q] = (z.z[q] - zt.z[q]) / step;
      const double pgn = chart_l2_norm(g, pga, dt);
      if (pgn == 0.0) break;  // projection pinned us, no feasible descent here
      DirectorBC ht = from_chart(zt);
      Trajectory tt = solve_forward(prob, ht);
      const double ct = cost(tt, ht, prob.targets, prob.weights).total;
      if (ct <= cb.total - cfg.armijo_c * step * pgn * pgn) {
        rec.step = step;
        z = std::move(zt);
        res.h = from_chart(z);
        best_cost = ct;
        accepted = true;
        break;
      }
      step *= cfg.armijo_shrink;
    }
    res.history.iters.push_back(rec);
    if (!accepted) {
      res.history.line_search_stall = true;
      break;
    }
    step = std::min(cfg.step0, step / cfg.armijo_shrink);

    if (iter == cfg.max_iters - 1) {
      // log the point reached by the final accepted step
      DirectorBC hf = from_chart(z);
      Trajectory tf = solve_forward(prob, hf);
      CostBreakdown cf = cost(tf, hf, prob.targets, prob.weights);
      IterRecord last;
      last.iter = cfg.max_iters;
      last.cost = cf.total;
      for (int k = 0; k < 5; ++k) last.term[k] = cf.term[k];
      last.grad_norm = 0.0;
      last.step = 0.0;
      last.feasibility_norm = discrete_U_norm(z);
      res.history.iters.push_back(last);
    }
  }
  (void)best_cost;
  return res;
}

}  // namespace lcf
