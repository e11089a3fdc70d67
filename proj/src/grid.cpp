#include "lcf/grid.hpp"

#include <cmath>
#include <string>

namespace lcf {

Grid build_grid(const GridSpec& spec) {
  if (spec.nx < 4 || spec.ny < 4)
    throw InvalidParameter("grid: nx and ny must be >= 4, got nx=" +
                           std::to_string(spec.nx) + " ny=" + std::to_string(spec.ny));
  if (!(spec.lx > 0.0) || !(spec.ly > 0.0))
    throw InvalidParameter("grid: domain side lengths must be positive");
  if (!(spec.dt > 0.0)) throw InvalidParameter("grid: dt must be positive");
  if (spec.nsteps < 1) throw InvalidParameter("grid: nsteps must be >= 1");
  if (!(spec.nu > 0.0) || !(spec.mu > 0.0) || !(spec.lambda > 0.0))
    throw InvalidParameter("grid: nu, mu, lambda must be positive");

  Grid g;
  g.spec = spec;
  g.dx = spec.lx / spec.nx;
  g.dy = spec.ly / spec.ny;

  const double hmin = std::min(g.dx, g.dy);
  const double dt_max = spec.cfl * hmin * hmin;
  if (spec.dt > dt_max * (1.0 + 1e-12))
    throw InvalidParameter("grid: dt=" + std::to_string(spec.dt) +
                           " violates the stability bound cfl*min(dx,dy)^2=" +
                           std::to_string(dt_max));

  g.m = 2 * (spec.nx + spec.ny);
  g.boundary.reserve(g.m);
  const double perim_x = spec.lx, perim_y = spec.ly;
  double s = 0.0;
  for (int i = 0; i < spec.nx; ++i) {  // bottom, x increasing
    g.boundary.push_back({Side::Bottom, i, 0, (i + 0.5) * g.dx, 0.0, 0.0, -1.0,
                          s + 0.5 * g.dx, g.dx});
    s += g.dx;
  }
  for (int j = 0; j < spec.ny; ++j) {  // right, y increasing
    g.boundary.push_back({Side::Right, spec.nx - 1, j, perim_x, (j + 0.5) * g.dy,
                          1.0, 0.0, s + 0.5 * g.dy, g.dy});
    s += g.dy;
  }
  for (int i = spec.nx - 1; i >= 0; --i) {  // top, x decreasing
    g.boundary.push_back({Side::Top, i, spec.ny - 1, (i + 0.5) * g.dx, perim_y,
                          0.0, 1.0, s + 0.5 * g.dx, g.dx});
    s += g.dx;
  }
  for (int j = spec.ny - 1; j >= 0; --j) {  // left, y decreasing
    g.boundary.push_back({Side::Left, 0, j, 0.0, (j + 0.5) * g.dy, -1.0, 0.0,
                          s + 0.5 * g.dy, g.dy});
    s += g.dy;
  }
  return g;
}

}  // namespace lcf
