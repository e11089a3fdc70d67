#ifndef LCF_CHART_HPP_
#define LCF_CHART_HPP_

#include <vector>

#include "lcf/linearized.hpp"
#include "lcf/state.hpp"

namespace lcf {

// Stereographic projection from the south pole and its inverse:
//   Pi(y)  = (y1/(1+y3), y2/(1+y3)),   Pi^-1(z) = (2z, 1-|z|^2)/(1+|z|^2).
// The upper hemisphere maps onto the closed unit disk.
void chart_forward(const double h[3], double z[2]);
void chart_inverse(const double z[2], double h[3]);
// Jacobian of Pi^-1, 3x2, row-major in J[r][c].
void chart_inverse_jacobian(const double z[2], double J[3][2]);

// Exponential map on the unit sphere; returns h for |xi| below 1e-14.
void sphere_exp(const double h[3], const double xi[3], double out[3]);

// Chart coordinates of a boundary control, |z| <= 1 entrywise.
struct ChartControl {
  int m = 0;
  int nlevels = 0;
  std::vector<double> z;  // (n*m + j)*2 + c

  ChartControl() = default;
  ChartControl(int m_, int nlevels_)
      : m(m_), nlevels(nlevels_), z(size_t(m_) * nlevels_ * 2, 0.0) {}

  double* at(int j, int n) { return &z[(size_t(n) * m + j) * 2]; }
  const double* at(int j, int n) const { return &z[(size_t(n) * m + j) * 2]; }
};

ChartControl to_chart(const DirectorBC& h);
DirectorBC from_chart(const ChartControl& z);

// Anisotropic Fourier-weight norm of the chart trajectory. The transform runs
// over the periodic arclength index and the even time reflection; mode (k,q)
// with symmetrized integer frequencies carries the weight
//   (1+k^2)^{5/2} + (1+q^2)^{5/4} + (1+q^2)(1+k^2)^{3/2}.
double discrete_U_norm(const ChartControl& z);

// Deviation rescale onto the norm ball of radius M: the time-level-0 row is
// held fixed, the deviation from its constant-in-time extension is scaled by
// the exact quadratic-form factor reaching norm M, then any |z|>1 entries are
// clipped radially to the disk. Throws InfeasibleBase when the base row alone
// exceeds M.
ChartControl project_feasible(const ChartControl& z, double M,
                              int* clip_count = nullptr);

// Pointwise chart-line interpolation Pi^-1(s*Pi(a) + (1-s)*Pi(b)).
DirectorBC chart_segment(const DirectorBC& a, const DirectorBC& b, double s);

// Pushforward of a chart perturbation through dPi^-1 at Pi(h); tangency
// holds by construction and the perturbation must vanish at time level 0.
TangentBoundarySection build_tangent_from_chart(const DirectorBC& h,
                                                const ChartControl& dz);

}  // namespace lcf

#endif
