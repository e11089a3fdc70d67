#ifndef LCF_COST_HPP_
#define LCF_COST_HPP_

#include <vector>

#include "lcf/forward.hpp"

namespace lcf {

// Tracking weights; nonnegative and not simultaneously zero.
struct CostWeights {
  double beta1 = 0.0, beta2 = 0.0, beta3 = 0.0, beta4 = 0.0, beta5 = 0.0;
};
void validate_weights(const CostWeights& w);

// Tracking targets; the time series may be stored with a single entry,
// interpreted as constant in time.
struct TargetSet {
  std::vector<VectorField2> u_qt;
  std::vector<VectorField3> d_qt;
  VectorField2 u_omega;
  VectorField3 d_omega;

  const VectorField2& uqt(int n) const { return u_qt.size() == 1 ? u_qt[0] : u_qt[n]; }
  const VectorField3& dqt(int n) const { return d_qt.size() == 1 ? d_qt[0] : d_qt[n]; }
};
void validate_targets(const Grid& g, const TargetSet& t, int nsteps);

// Trapezoid weight of time level n on a grid of N steps.
inline double time_weight(int n, int nsteps) {
  return (n == 0 || n == nsteps) ? 0.5 : 1.0;
}

struct CostBreakdown {
  double total = 0.0;
  double term[5] = {0.0, 0.0, 0.0, 0.0, 0.0};  // the five tracking terms
};

// Tracking functional: interior-face sums for velocity terms, cell sums for
// director terms (both midpoint in space), trapezoid in time, and the
// boundary-sample quadrature for the control regularization term.
CostBreakdown cost(const Trajectory& traj, const DirectorBC& h,
                   const TargetSet& targets, const CostWeights& w);

// Sum over interior faces of (a-b).(c-d) style pairings, exposed for the
// derivative pairings.
double face_inner(const Grid& g, const VectorField2& a, const VectorField2& b);
double cell_inner3(const Grid& g, const VectorField3& a, const VectorField3& b);

}  // namespace lcf

#endif
