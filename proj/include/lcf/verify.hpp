#ifndef LCF_VERIFY_HPP_
#define LCF_VERIFY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "lcf/control.hpp"

// Independent oracles and property suites. Everything here checks the solver
// stack from the outside: finite differences of full nonlinear solves,
// transposition identities, manufactured sources, and the invariant sweeps.

namespace lcf::verify {

struct ConvergenceReport {
  std::vector<double> params;
  std::vector<double> errors;
  double slope = 0.0;  // least-squares log-log fit
};

double fitted_slope(const std::vector<double>& params,
                    const std::vector<double>& errors);

// Random tangent section: pointwise projected onto the tangent plane of h,
// zero at time level 0, smooth along the boundary.
TangentBoundarySection random_section(const Grid& g, const DirectorBC& h,
                                      uint64_t seed, double amp = 1.0);

// Pointwise sphere-exponential perturbation of a control.
DirectorBC perturb_exp(const DirectorBC& h, const TangentBoundarySection& xi,
                       double eps);

double eval_cost(const ControlProblem& prob, const DirectorBC& h);

// Central difference of the tracking functional along the exponential path.
double fd_directional_derivative(const ControlProblem& prob, const DirectorBC& h,
                                 const TangentBoundarySection& xi, double eps);

// Difference of two trajectories scaled by 1/eps, as tangent-shaped data.
std::vector<LinearizedState> trajectory_difference(const Trajectory& a,
                                                   const Trajectory& b,
                                                   double eps);

// ||(S(exp_h(eps*xi)) - S(h))/eps - L_h xi||_W over a list of eps values.
ConvergenceReport linearization_convergence(const ControlProblem& prob,
                                            const DirectorBC& h,
                                            const TangentBoundarySection& xi,
                                            const std::vector<double>& eps_list);

// Worst relative gap between the tangent-side and adjoint-side derivative
// pairings over random sections.
double duality_check(const ControlProblem& prob, const DirectorBC& h,
                     int n_directions, uint64_t seed,
                     LinMode mode = LinMode::Discrete);

// Manufactured space-time solution with sources; returns the fitted slopes
// of the velocity and director space-time errors over the given grid levels
// (time step tied to the square of the mesh width).
struct ManufacturedReport {
  ConvergenceReport u;
  ConvergenceReport d;
};
ManufacturedReport manufactured_suite(const std::vector<int>& levels,
                                      double t_end);
// One manufactured problem instance (exposed for the CLI and tests).
ControlProblem manufactured_problem(int n, double t_end);
DirectorBC manufactured_bc(const Grid& g, int nsteps);
void manufactured_exact(const Grid& g, double t, VectorField2& u, VectorField3& d);

struct InvariantReport {
  double max_unit_error = 0.0;
  double max_divergence = 0.0;
  double min_d3 = 0.0;
  bool hemisphere_applicable = false;
  double max_balance_residual = 0.0;
  double max_positive_residual = 0.0;
  bool unit_ok = false, div_ok = false, hemisphere_ok = false;
  std::string summary() const;
};
InvariantReport invariant_suite(const Trajectory& traj);

// Windowed interpolation inequality diagnostic: reports the three quadrature
// values and their ratio (the constant itself is not asserted).
struct WindowReport {
  double lhs = 0.0;         // integral of |f|^4
  double sup_window = 0.0;  // sup over centers of the windowed |f|^2 mass
  double rhs = 0.0;         // |grad f|^2 integral + r^-2 |f|^2 integral
  double ratio = 0.0;       // lhs / (sup_window * rhs)
};
WindowReport ladyzhenskaya_report(const Grid& g, const VectorField3& f,
                                  const double* trace, double r);

// Pressure gradient versus convection/elastic bounds, per time level.
struct PressureReportRow {
  double t = 0.0;
  double lhs = 0.0;  // ||grad P||_{L^{4/3}}
  double rhs = 0.0;  // ||u||_4 ||grad u||_2 + ||grad d||_4 ||lap d||_2
  double ratio = 0.0;
};
std::vector<PressureReportRow> pressure_estimate_report(const Trajectory& traj);

}  // namespace lcf::verify

#endif
