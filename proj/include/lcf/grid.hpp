#ifndef LCF_GRID_HPP_
#define LCF_GRID_HPP_

#include <vector>

#include "lcf/errors.hpp"
#include "lcf/field.hpp"

namespace lcf {

struct GridSpec {
  double lx = 1.0, ly = 1.0;  // domain side lengths
  int nx = 16, ny = 16;       // interior cell counts
  double dt = 1e-4;
  int nsteps = 1;
  double nu = 1.0, mu = 1.0, lambda = 1.0;
  double cfl = 0.2;  // stability bound: dt <= cfl * min(dx,dy)^2
};

enum class Side { Bottom = 0, Right = 1, Top = 2, Left = 3 };

// One boundary face midpoint, ordered counterclockwise by arclength.
struct BoundarySample {
  Side side;
  int ci, cj;    // adjacent interior cell
  double px, py; // position on the boundary
  double nx, ny; // outward unit normal
  double s;      // arclength from the origin corner
  double ds;     // arclength weight (dx on horizontal edges, dy on vertical)
};

class Grid {
 public:
  GridSpec spec;
  double dx = 0.0, dy = 0.0;
  int m = 0;  // boundary sample count, 2(nx+ny)
  std::vector<BoundarySample> boundary;

  // Boundary sample index adjacent to cell (i,j) across the given side.
  int sample_bottom(int i) const { return i; }
  int sample_right(int j) const { return spec.nx + j; }
  int sample_top(int i) const { return spec.nx + spec.ny + (spec.nx - 1 - i); }
  int sample_left(int j) const { return 2 * spec.nx + spec.ny + (spec.ny - 1 - j); }

  int nx() const { return spec.nx; }
  int ny() const { return spec.ny; }
  double cell_volume() const { return dx * dy; }

  double cx(int i) const { return (i + 0.5) * dx; }  // cell-center coordinates
  double cy(int j) const { return (j + 0.5) * dy; }
};

Grid build_grid(const GridSpec& spec);

}  // namespace lcf

#endif
