#ifndef LCF_LINEARIZED_HPP_
#define LCF_LINEARIZED_HPP_

#include <vector>

#include "lcf/cost.hpp"
#include "lcf/forward.hpp"

namespace lcf {

// Pointwise-tangent boundary perturbation: <xi, h> = 0 and xi(.,0) = 0.
struct TangentBoundarySection {
  int m = 0;
  int nlevels = 0;
  std::vector<double> values;  // (n*m + j)*3 + c

  TangentBoundarySection() = default;
  TangentBoundarySection(int m_, int nlevels_)
      : m(m_), nlevels(nlevels_), values(size_t(m_) * nlevels_ * 3, 0.0) {}

  double* row(int n) { return &values[size_t(n) * m * 3]; }
  const double* row(int n) const { return &values[size_t(n) * m * 3]; }
  double* at(int j, int n) { return &values[(size_t(n) * m + j) * 3]; }
  const double* at(int j, int n) const { return &values[(size_t(n) * m + j) * 3]; }
};

void validate_section(const TangentBoundarySection& xi, const DirectorBC& h);

struct LinearizedState {
  VectorField2 omega;
  ScalarField lin_p;
  VectorField3 phi;

  LinearizedState() = default;
  LinearizedState(int nx, int ny) : omega(nx, ny), lin_p(nx, ny), phi(nx, ny) {}
};

// Discrete: exact linearization of every forward sub-step including the
// renormalization map (machine-precision dual of the adjoint sweep).
// Continuous: the same sweep without the renormalization projection, i.e. a
// direct discretization of the first-order perturbation system; used as an
// order-(dx+dt) cross-check.
enum class LinMode { Discrete, Continuous };

std::vector<LinearizedState> solve_linearized(const Trajectory& traj,
                                              const TangentBoundarySection& xi,
                                              LinMode mode = LinMode::Discrete);

// max over cells and levels of |<phi, d>|.
double tangency_residual(const std::vector<LinearizedState>& lin,
                         const Trajectory& traj);

// Directional derivative of the tracking functional along the tangent flow:
// the pairing of the cost residuals with (omega, phi) plus the control term.
double cost_derivative_via_tangent(const std::vector<LinearizedState>& lin,
                                   const Trajectory& traj,
                                   const TargetSet& targets,
                                   const CostWeights& weights,
                                   const TangentBoundarySection& xi);

// Discrete trajectory-space norm used by the consistency tests:
//   max_n (||omega||_2 + ||phi||_{H1}) + (sum_n dt (||omega||_{H1} + ||phi||_{H2})^2)^{1/2}
// with difference-quotient gradients over interior cells.
double w_norm(const Trajectory& base, const std::vector<LinearizedState>& lin);

}  // namespace lcf

#endif
