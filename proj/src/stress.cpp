#include <atomic>
#include <cmath>

#include "lcf/errors.hpp"
#include "lcf/ops.hpp"
#include "ops_internal.hpp"

// Elastic stress divergence at faces. The in-line entries (s11, s22) are
// differenced between cell centers; the cross entry s12 lives at grid nodes.
// Wall-node gradients use the tangential difference of the trace along the
// wall and a one-sided second-order normal derivative against the trace.

namespace lcf {

namespace {

const double kZero3n[3] = {0.0, 0.0, 0.0};
inline const double* tr3n(const double* trace, int k) {
  return trace ? trace + 3 * k : kZero3n;
}

// Gradients of a cell field at grid nodes, sized (nx+1) x (ny+1).
// Corner nodes are left zero; they never enter the face divergence.
void node_gradient(const Grid& g, const VectorField3& d, const double* trace,
                   VectorField3& gnx, VectorField3& gny) {
  const int nx = g.nx(), ny = g.ny();
  const double i2x = 0.5 / g.dx, i2y = 0.5 / g.dy;
  const double i3x = 1.0 / (3.0 * g.dx), i3y = 1.0 / (3.0 * g.dy);
#pragma omp parallel for
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const bool xedge = (i == 0 || i == nx), yedge = (j == 0 || j == ny);
      if (xedge && yedge) continue;  // corner, unused
      double* gx = gnx.at(i, j);
      double* gy = gny.at(i, j);
      if (!xedge && !yedge) {
        for (int c = 0; c < 3; ++c) {
          gx[c] = (d(i, j, c) + d(i, j - 1, c) - d(i - 1, j, c) - d(i - 1, j - 1, c)) * i2x;
          gy[c] = (d(i, j, c) + d(i - 1, j, c) - d(i, j - 1, c) - d(i - 1, j - 1, c)) * i2y;
        }
      } else if (j == 0) {
        const double* ha = tr3n(trace, g.sample_bottom(i - 1));
        const double* hb = tr3n(trace, g.sample_bottom(i));
        for (int c = 0; c < 3; ++c) {
          gx[c] = (hb[c] - ha[c]) / g.dx;
          const double f0 = 0.5 * (ha[c] + hb[c]);
          const double f1 = 0.5 * (d(i - 1, 0, c) + d(i, 0, c));
          const double f2 = 0.5 * (d(i - 1, 1, c) + d(i, 1, c));
          gy[c] = (-8.0 * f0 + 9.0 * f1 - f2) * i3y;
        }
      } else if (j == ny) {
        const double* ha = tr3n(trace, g.sample_top(i - 1));
        const double* hb = tr3n(trace, g.sample_top(i));
        for (int c = 0; c < 3; ++c) {
          gx[c] = (hb[c] - ha[c]) / g.dx;
          const double f0 = 0.5 * (ha[c] + hb[c]);
          const double f1 = 0.5 * (d(i - 1, ny - 1, c) + d(i, ny - 1, c));
          const double f2 = 0.5 * (d(i - 1, ny - 2, c) + d(i, ny - 2, c));
          gy[c] = (8.0 * f0 - 9.0 * f1 + f2) * i3y;
        }
      } else if (i == 0) {
        const double* ha = tr3n(trace, g.sample_left(j - 1));
        const double* hb = tr3n(trace, g.sample_left(j));
        for (int c = 0; c < 3; ++c) {
          gy[c] = (hb[c] - ha[c]) / g.dy;
          const double f0 = 0.5 * (ha[c] + hb[c]);
          const double f1 = 0.5 * (d(0, j - 1, c) + d(0, j, c));
          const double f2 = 0.5 * (d(1, j - 1, c) + d(1, j, c));
          gx[c] = (-8.0 * f0 + 9.0 * f1 - f2) * i3x;
        }
      } else {  // i == nx
        const double* ha = tr3n(trace, g.sample_right(j - 1));
        const double* hb = tr3n(trace, g.sample_right(j));
        for (int c = 0; c < 3; ++c) {
          gy[c] = (hb[c] - ha[c]) / g.dy;
          const double f0 = 0.5 * (ha[c] + hb[c]);
          const double f1 = 0.5 * (d(nx - 1, j - 1, c) + d(nx - 1, j, c));
          const double f2 = 0.5 * (d(nx - 2, j - 1, c) + d(nx - 2, j, c));
          gx[c] = (8.0 * f0 - 9.0 * f1 + f2) * i3x;
        }
      }
    }
}

void node_gradient_vjp(const Grid& g, const VectorField3& cgnx,
                       const VectorField3& cgny, VectorField3& cd,
                       double* ctrace) {
  const int nx = g.nx(), ny = g.ny();
  const double i2x = 0.5 / g.dx, i2y = 0.5 / g.dy;
  const double i3x = 1.0 / (3.0 * g.dx), i3y = 1.0 / (3.0 * g.dy);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const bool xedge = (i == 0 || i == nx), yedge = (j == 0 || j == ny);
      if (xedge && yedge) continue;
      const double* ax = cgnx.at(i, j);
      const double* ay = cgny.at(i, j);
      if (!xedge && !yedge) {
        for (int c = 0; c < 3; ++c) {
          cd(i, j, c) += ax[c] * i2x + ay[c] * i2y;
          cd(i, j - 1, c) += ax[c] * i2x - ay[c] * i2y;
          cd(i - 1, j, c) += -ax[c] * i2x + ay[c] * i2y;
          cd(i - 1, j - 1, c) += -ax[c] * i2x - ay[c] * i2y;
        }
      } else if (j == 0) {
        const int ka = g.sample_bottom(i - 1), kb = g.sample_bottom(i);
        for (int c = 0; c < 3; ++c) {
          if (ctrace) {
            ctrace[3 * kb + c] += ax[c] / g.dx - 4.0 * ay[c] * i3y;
            ctrace[3 * ka + c] += -ax[c] / g.dx - 4.0 * ay[c] * i3y;
          }
          cd(i - 1, 0, c) += 4.5 * ay[c] * i3y;
          cd(i, 0, c) += 4.5 * ay[c] * i3y;
          cd(i - 1, 1, c) -= 0.5 * ay[c] * i3y;
          cd(i, 1, c) -= 0.5 * ay[c] * i3y;
        }
      } else if (j == ny) {
        const int ka = g.sample_top(i - 1), kb = g.sample_top(i);
        for (int c = 0; c < 3; ++c) {
          if (ctrace) {
            ctrace[3 * kb + c] += ax[c] / g.dx + 4.0 * ay[c] * i3y;
            ctrace[3 * ka + c] += -ax[c] / g.dx + 4.0 * ay[c] * i3y;
          }
          cd(i - 1, ny - 1, c) -= 4.5 * ay[c] * i3y;
          cd(i, ny - 1, c) -= 4.5 * ay[c] * i3y;
          cd(i - 1, ny - 2, c) += 0.5 * ay[c] * i3y;
          cd(i, ny - 2, c) += 0.5 * ay[c] * i3y;
        }
      } else if (i == 0) {
        const int ka = g.sample_left(j - 1), kb = g.sample_left(j);
        for (int c = 0; c < 3; ++c) {
          if (ctrace) {
            ctrace[3 * kb + c] += ay[c] / g.dy - 4.0 * ax[c] * i3x;
            ctrace[3 * ka + c] += -ay[c] / g.dy - 4.0 * ax[c] * i3x;
          }
          cd(0, j - 1, c) += 4.5 * ax[c] * i3x;
          cd(0, j, c) += 4.5 * ax[c] * i3x;
          cd(1, j - 1, c) -= 0.5 * ax[c] * i3x;
          cd(1, j, c) -= 0.5 * ax[c] * i3x;
        }
      } else {  // i == nx
        const int ka = g.sample_right(j - 1), kb = g.sample_right(j);
        for (int c = 0; c < 3; ++c) {
          if (ctrace) {
            ctrace[3 * kb + c] += ay[c] / g.dy + 4.0 * ax[c] * i3x;
            ctrace[3 * ka + c] += -ay[c] / g.dy + 4.0 * ax[c] * i3x;
          }
          cd(nx - 1, j - 1, c) -= 4.5 * ax[c] * i3x;
          cd(nx - 1, j, c) -= 4.5 * ax[c] * i3x;
          cd(nx - 2, j - 1, c) += 0.5 * ax[c] * i3x;
          cd(nx - 2, j, c) += 0.5 * ax[c] * i3x;
        }
      }
    }
}

inline double dot3(const double* a, const double* b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

void assemble_force(const Grid& g, const ScalarField& s11,
                    const ScalarField& s22, const ScalarField& s12n,
                    VectorField2& out) {
  const int nx = g.nx(), ny = g.ny();
  const double idx = 1.0 / g.dx, idy = 1.0 / g.dy;
  auto node = [&](int i, int j) { return s12n.data[size_t(j) * (nx + 1) + i]; };
#pragma omp parallel for
  for (int j = 0; j < ny; ++j) {
    out.x(0, j) = 0.0;
    out.x(nx, j) = 0.0;
    for (int i = 1; i < nx; ++i)
      out.x(i, j) = (s11(i, j) - s11(i - 1, j)) * idx + (node(i, j + 1) - node(i, j)) * idy;
  }
#pragma omp parallel for
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (j == 0 || j == ny) { out.y(i, j) = 0.0; continue; }
      out.y(i, j) = (s22(i, j) - s22(i, j - 1)) * idy + (node(i + 1, j) - node(i, j)) * idx;
    }
}

void assemble_force_vjp(const Grid& g, const VectorField2& cout,
                        ScalarField& cs11, ScalarField& cs22,
                        ScalarField& cs12n) {
  const int nx = g.nx(), ny = g.ny();
  const double idx = 1.0 / g.dx, idy = 1.0 / g.dy;
  auto cnode = [&](int i, int j) -> double& { return cs12n.data[size_t(j) * (nx + 1) + i]; };
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) {
      const double a = cout.x(i, j);
      cs11(i, j) += a * idx;
      cs11(i - 1, j) -= a * idx;
      cnode(i, j + 1) += a * idy;
      cnode(i, j) -= a * idy;
    }
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double a = cout.y(i, j);
      cs22(i, j) += a * idy;
      cs22(i, j - 1) -= a * idy;
      cnode(i + 1, j) += a * idx;
      cnode(i, j) -= a * idx;
    }
}

}  // namespace

void stress_force(const Grid& g, const VectorField3& d, const double* trace,
                  VectorField2& out) {
  const int nx = g.nx(), ny = g.ny();
  ScalarField s11(nx, ny), s22(nx, ny), s12n(nx + 1, ny + 1);
#pragma omp parallel for
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double xx = 0.0, yy = 0.0;
      for (int cc = 0; cc < 3; ++cc) {
        double gx, gy;
        detail::grad_at(g, d, trace, i, j, cc, gx, gy);
        xx += gx * gx;
        yy += gy * gy;
      }
      s11(i, j) = xx;
      s22(i, j) = yy;
    }
  {
    const double i2x = 0.5 / g.dx, i2y = 0.5 / g.dy;
    const double i3x = 1.0 / (3.0 * g.dx), i3y = 1.0 / (3.0 * g.dy);
#pragma omp parallel for
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        const bool xe = (i == 0 || i == nx), ye = (j == 0 || j == ny);
        if (xe && ye) continue;
        double dot = 0.0;
        for (int c = 0; c < 3; ++c) {
          double gx, gy;
          if (!xe && !ye) {
            gx = (d(i, j, c) + d(i, j - 1, c) - d(i - 1, j, c) - d(i - 1, j - 1, c)) * i2x;
            gy = (d(i, j, c) + d(i - 1, j, c) - d(i, j - 1, c) - d(i - 1, j - 1, c)) * i2y;
          } else if (j == 0) {
            const double ha = tr3n(trace, g.sample_bottom(i - 1))[c];
            const double hb = tr3n(trace, g.sample_bottom(i))[c];
            gx = (hb - ha) / g.dx;
            const double f0 = 0.5 * (ha + hb);
            const double f1 = 0.5 * (d(i - 1, 0, c) + d(i, 0, c));
            const double f2 = 0.5 * (d(i - 1, 1, c) + d(i, 1, c));
            gy = (-8.0 * f0 + 9.0 * f1 - f2) * i3y;
          } else if (j == ny) {
            const double ha = tr3n(trace, g.sample_top(i - 1))[c];
            const double hb = tr3n(trace, g.sample_top(i))[c];
            gx = (hb - ha) / g.dx;
            const double f0 = 0.5 * (ha + hb);
            const double f1 = 0.5 * (d(i - 1, ny - 1, c) + d(i, ny - 1, c));
            const double f2 = 0.5 * (d(i - 1, ny - 2, c) + d(i, ny - 2, c));
            gy = (8.0 * f0 - 9.0 * f1 + f2) * i3y;
          } else if (i == 0) {
            const double ha = tr3n(trace, g.sample_left(j - 1))[c];
            const double hb = tr3n(trace, g.sample_left(j))[c];
            gy = (hb - ha) / g.dy;
            const double f0 = 0.5 * (ha + hb);
            const double f1 = 0.5 * (d(0, j - 1, c) + d(0, j, c));
            const double f2 = 0.5 * (d(1, j - 1, c) + d(1, j, c));
            gx = (-8.0 * f0 + 9.0 * f1 - f2) * i3x;
          } else {
            const double ha = tr3n(trace, g.sample_right(j - 1))[c];
            const double hb = tr3n(trace, g.sample_right(j))[c];
            gy = (hb - ha) / g.dy;
            const double f0 = 0.5 * (ha + hb);
            const double f1 = 0.5 * (d(nx - 1, j - 1, c) + d(nx - 1, j, c));
            const double f2 = 0.5 * (d(nx - 2, j - 1, c) + d(nx - 2, j, c));
            gx = (8.0 * f0 - 9.0 * f1 + f2) * i3x;
          }
          dot += gx * gy;
        }
        s12n.data[size_t(j) * (nx + 1) + i] = dot;
      }
  }
  assemble_force(g, s11, s22, s12n, out);
}

void stress_force_jvp(const Grid& g, const VectorField3& d, const double* trace,
                      const VectorField3& phi, const double* xi,
                      VectorField2& out) {
  const int nx = g.nx(), ny = g.ny();
  VectorField3 gcx(nx, ny), gcy(nx, ny), pcx(nx, ny), pcy(nx, ny);
  cell_gradient(g, d, trace, gcx, gcy);
  cell_gradient(g, phi, xi, pcx, pcy);
  VectorField3 gnx(nx + 1, ny + 1), gny(nx + 1, ny + 1);
  VectorField3 pnx(nx + 1, ny + 1), pny(nx + 1, ny + 1);
  node_gradient(g, d, trace, gnx, gny);
  node_gradient(g, phi, xi, pnx, pny);

  ScalarField s11(nx, ny), s22(nx, ny), s12n(nx + 1, ny + 1);
#pragma omp parallel for
  for (size_t q = 0; q < s11.size(); ++q) {
    s11.data[q] = 2.0 * dot3(&gcx.data[3 * q], &pcx.data[3 * q]);
    s22.data[q] = 2.0 * dot3(&gcy.data[3 * q], &pcy.data[3 * q]);
  }
#pragma omp parallel for
  for (size_t q = 0; q < s12n.size(); ++q)
    s12n.data[q] = dot3(&pnx.data[3 * q], &gny.data[3 * q]) +
                   dot3(&gnx.data[3 * q], &pny.data[3 * q]);

  assemble_force(g, s11, s22, s12n, out);
}

void stress_force_vjp(const Grid& g, const VectorField3& d, const double* trace,
                      const VectorField2& cout, VectorField3& cphi,
                      double* cxi) {
  const int nx = g.nx(), ny = g.ny();
  VectorField3 gcx(nx, ny), gcy(nx, ny);
  cell_gradient(g, d, trace, gcx, gcy);
  VectorField3 gnx(nx + 1, ny + 1), gny(nx + 1, ny + 1);
  node_gradient(g, d, trace, gnx, gny);

  ScalarField cs11(nx, ny), cs22(nx, ny), cs12n(nx + 1, ny + 1);
  assemble_force_vjp(g, cout, cs11, cs22, cs12n);

  VectorField3 cpcx(nx, ny), cpcy(nx, ny);
  for (size_t q = 0; q < cs11.size(); ++q)
    for (int c = 0; c < 3; ++c) {
      cpcx.data[3 * q + c] = 2.0 * gcx.data[3 * q + c] * cs11.data[q];
      cpcy.data[3 * q + c] = 2.0 * gcy.data[3 * q + c] * cs22.data[q];
    }
  VectorField3 cpnx(nx + 1, ny + 1), cpny(nx + 1, ny + 1);
  for (size_t q = 0; q < cs12n.size(); ++q)
    for (int c = 0; c < 3; ++c) {
      cpnx.data[3 * q + c] = gny.data[3 * q + c] * cs12n.data[q];
      cpny.data[3 * q + c] = gnx.data[3 * q + c] * cs12n.data[q];
    }
  cell_gradient_vjp(g, cpcx, cpcy, cphi, cxi);
  node_gradient_vjp(g, cpnx, cpny, cphi, cxi);
}

// ---------------------------------------------------------------------------
// sphere kernels
// ---------------------------------------------------------------------------

void renormalize_director(const VectorField3& d, VectorField3& out) {
  const size_t n = d.cells();
  std::atomic<bool> degenerate{false};
#pragma omp parallel for
  for (size_t q = 0; q < n; ++q) {
    const double* v = &d.data[3 * q];
    const double norm = std::sqrt(dot3(v, v));
    if (norm < 0.5) {
      degenerate.store(true, std::memory_order_relaxed);
      continue;
    }
    const double inv = 1.0 / norm;
    out.data[3 * q + 0] = v[0] * inv;
    out.data[3 * q + 1] = v[1] * inv;
    out.data[3 * q + 2] = v[2] * inv;
  }
  if (degenerate.load())
    throw DegenerateDirector("renormalize: cell norm below 0.5, step blew up (reduce dt)");
}

void renormalize_jvp(const VectorField3& d_raw, const VectorField3& v,
                     VectorField3& out) {
  const size_t n = d_raw.cells();
#pragma omp parallel for
  for (size_t q = 0; q < n; ++q) {
    const double* x = &d_raw.data[3 * q];
    const double* w = &v.data[3 * q];
    const double norm = std::sqrt(dot3(x, x));
    const double inv = 1.0 / norm;
    const double nh[3] = {x[0] * inv, x[1] * inv, x[2] * inv};
    const double proj = dot3(nh, w);
    out.data[3 * q + 0] = (w[0] - nh[0] * proj) * inv;
    out.data[3 * q + 1] = (w[1] - nh[1] * proj) * inv;
    out.data[3 * q + 2] = (w[2] - nh[2] * proj) * inv;
  }
}

}  // namespace lcf
