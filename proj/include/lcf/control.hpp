#ifndef LCF_CONTROL_HPP_
#define LCF_CONTROL_HPP_

#include <vector>

#include "lcf/adjoint.hpp"
#include "lcf/chart.hpp"

namespace lcf {

// Everything a control run needs besides the control itself.
struct ControlProblem {
  GridSpec spec;
  VectorField2 u0;
  VectorField3 d0;
  std::vector<double> d0_trace;
  SimOptions opts;
  Forcing forcing;
  TargetSet targets;
  CostWeights weights;
};

Trajectory solve_forward(const ControlProblem& prob, const DirectorBC& h);

struct OptimizeConfig {
  double M = 10.0;           // feasibility radius
  double step0 = 1.0;        // initial line-search step
  double armijo_c = 1e-4;    // sufficient-decrease constant
  double armijo_shrink = 0.5;
  int max_iters = 100;
  double grad_tol = 1e-8;    // stationarity tolerance on the projected gradient
  int max_backtracks = 40;
};
void validate_optimize_config(const OptimizeConfig& cfg);

// Boundary L2 inner product of chart trajectories: trapezoid in time,
// arclength weights in space. The gradient below is the Riesz representative
// of the boundary pairing in this inner product.
double chart_l2_inner(const Grid& g, const ChartControl& a, const ChartControl& b,
                      double dt);
double chart_l2_norm(const Grid& g, const ChartControl& a, double dt);

// Pullback of the boundary gradient through the chart Jacobian, divided by
// the quadrature weights; zero at time level 0 (the row is pinned).
ChartControl chart_gradient(const DirectorBC& h, const AdjointState& adj,
                            const Trajectory& traj, const CostWeights& weights);

struct IterRecord {
  int iter = 0;
  double cost = 0.0;
  double term[5] = {0, 0, 0, 0, 0};
  double grad_norm = 0.0;
  double step = 0.0;
  double feasibility_norm = 0.0;
};

struct OptimizeHistory {
  std::vector<IterRecord> iters;
  bool stationary_at_start = false;
  bool line_search_stall = false;
  bool reached_grad_tol = false;
};

struct OptimizeResult {
  DirectorBC h;
  OptimizeHistory history;
};

// Projected gradient with Armijo backtracking in chart coordinates. Every
// iterate is feasible (norm ball, disk, pinned row 0); the cost sequence is
// nonincreasing; stalls return the best iterate with the stall flag set.
OptimizeResult optimize(const ControlProblem& prob, const DirectorBC& h0,
                        const OptimizeConfig& cfg);

}  // namespace lcf

#endif
