#ifndef LCF_OPS_INTERNAL_HPP_
#define LCF_OPS_INTERNAL_HPP_

#include "lcf/field.hpp"
#include "lcf/grid.hpp"

// Shared stencil pieces for the kernel translation units; not installed.

namespace lcf::detail {

inline const double kZeroTrace[3] = {0.0, 0.0, 0.0};

inline const double* tr3(const double* trace, int k) {
  return trace ? trace + 3 * k : kZeroTrace;
}

// First derivative of one component at a cell center: centered in the
// interior, second-order one-sided against the trace at wall cells (the
// parabola through the face value and the two nearest cells; exact for
// quadratics). The difference arrangement annihilates constants bit-exactly.
inline void grad_at(const Grid& g, const VectorField3& f, const double* trace,
                    int i, int j, int cc, double& gx, double& gy) {
  const int nx = g.nx(), ny = g.ny();
  const double c = f(i, j, cc);
  if (i == 0) {
    const double hl = tr3(trace, g.sample_left(j))[cc];
    gx = ((f(1, j, cc) - hl) + 3.0 * (c - hl)) / (3.0 * g.dx);
  } else if (i == nx - 1) {
    const double hr = tr3(trace, g.sample_right(j))[cc];
    gx = ((hr - f(nx - 2, j, cc)) + 3.0 * (hr - c)) / (3.0 * g.dx);
  } else {
    gx = (f(i + 1, j, cc) - f(i - 1, j, cc)) * 0.5 / g.dx;
  }
  if (j == 0) {
    const double hb = tr3(trace, g.sample_bottom(i))[cc];
    gy = ((f(i, 1, cc) - hb) + 3.0 * (c - hb)) / (3.0 * g.dy);
  } else if (j == ny - 1) {
    const double ht = tr3(trace, g.sample_top(i))[cc];
    gy = ((ht - f(i, ny - 2, cc)) + 3.0 * (ht - c)) / (3.0 * g.dy);
  } else {
    gy = (f(i, j + 1, cc) - f(i, j - 1, cc)) * 0.5 / g.dy;
  }
}

}  // namespace lcf::detail

#endif
