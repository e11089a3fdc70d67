#ifndef LCF_ADJOINT_HPP_
#define LCF_ADJOINT_HPP_

#include <vector>

#include "lcf/cost.hpp"
#include "lcf/linearized.hpp"

namespace lcf {

// Multiplier fields of the backward sweep. In Discrete mode the sweep is the
// literal transpose of the linearized forward map; gxi then carries the raw
// partial derivatives of the tracking terms with respect to each boundary
// value, so that gradient pairings reproduce the tangent derivative to
// machine precision. p1/pi/p2 are the per-level multiplier fields (stored for
// reporting and for the continuous-mode comparison); q1/q2 the boundary
// multipliers recovered from them.
struct AdjointState {
  LinMode mode = LinMode::Discrete;
  std::vector<VectorField2> p1;   // divergence-free, zero wall trace
  std::vector<ScalarField> pi;    // mean-zero
  std::vector<VectorField3> p2;   // zero wall trace
  std::vector<double> q1;         // (n*m + j)*2 + c
  std::vector<double> q2;         // (n*m + j)*3 + c
  TangentBoundarySection gxi;     // raw boundary cotangent (Discrete mode)

  const double* q1_at(int j, int n, int m) const { return &q1[(size_t(n) * m + j) * 2]; }
  const double* q2_at(int j, int n, int m) const { return &q2[(size_t(n) * m + j) * 3]; }
};

AdjointState solve_adjoint(const Trajectory& traj, const TargetSet& targets,
                           const CostWeights& weights,
                           LinMode mode = LinMode::Discrete);

// Recover (q1, q2) on the boundary samples from the stored multiplier fields
// with one-sided second-order normal derivatives. Called by solve_adjoint;
// exposed for tests.
void boundary_multipliers(AdjointState& adj, const Trajectory& traj);

// Boundary pairing representing the derivative of the tracking functional at
// h along xi: the control-regularization term plus, in Discrete mode, the
// exact transposed-trace accumulation, or, in Continuous mode, the q2
// quadrature.
double gradient_pairing(const DirectorBC& h, const TangentBoundarySection& xi,
                        const AdjointState& adj, const Trajectory& traj,
                        const CostWeights& weights);

// Tracking functional plus multiplier pairings with the discrete equation
// residuals of the stored trajectory. For a trajectory produced by the
// forward solver the residuals sit at solver tolerance and the value agrees
// with the plain cost.
double lagrangian_value(const Trajectory& traj, const DirectorBC& h,
                        const AdjointState& adj, const TargetSet& targets,
                        const CostWeights& weights,
                        const Forcing& forcing = {});

}  // namespace lcf

#endif
