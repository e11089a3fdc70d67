#include "lcf/ops.hpp"

#include <cmath>

#include "lcf/errors.hpp"
#include "ops_internal.hpp"

namespace lcf {

using detail::tr3;

namespace {

inline double tr1(const double* trace, int k) { return trace ? trace[k] : 0.0; }

}  // namespace

// ---------------------------------------------------------------------------
// divergence / gradient / Poisson / Helmholtz
// ---------------------------------------------------------------------------

void divergence(const Grid& g, const VectorField2& u, ScalarField& out) {
  const int nx = g.nx(), ny = g.ny();
  const double idx = 1.0 / g.dx, idy = 1.0 / g.dy;
#pragma omp parallel for
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      out(i, j) = (u.x(i + 1, j) - u.x(i, j)) * idx + (u.y(i, j + 1) - u.y(i, j)) * idy;
}

void gradient_faces(const Grid& g, const ScalarField& p, VectorField2& out) {
  const int nx = g.nx(), ny = g.ny();
  const double idx = 1.0 / g.dx, idy = 1.0 / g.dy;
#pragma omp parallel for
  for (int j = 0; j < ny; ++j) {
    out.x(0, j) = 0.0;
    out.x(nx, j) = 0.0;
    for (int i = 1; i < nx; ++i) out.x(i, j) = (p(i, j) - p(i - 1, j)) * idx;
  }
#pragma omp parallel for
  for (int i = 0; i < nx; ++i) {
    out.y(i, 0) = 0.0;
    out.y(i, ny) = 0.0;
  }
#pragma omp parallel for
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i) out.y(i, j) = (p(i, j) - p(i, j - 1)) * idy;
}

void poisson_apply(const Grid& g, const ScalarField& p, ScalarField& out) {
  const int nx = g.nx(), ny = g.ny();
  const double ix2 = 1.0 / (g.dx * g.dx), iy2 = 1.0 / (g.dy * g.dy);
#pragma omp parallel for
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double c = p(i, j);
      double v = 0.0;
      if (i + 1 < nx) v += (p(i + 1, j) - c) * ix2;
      if (i > 0) v += (p(i - 1, j) - c) * ix2;
      if (j + 1 < ny) v += (p(i, j + 1) - c) * iy2;
      if (j > 0) v += (p(i, j - 1) - c) * iy2;
      out(i, j) = v;
    }
}

void helmholtz_apply(const Grid& g, double alpha, const VectorField2& u,
                     VectorField2& out) {
  const int nx = g.nx(), ny = g.ny();
  const double ix2 = 1.0 / (g.dx * g.dx), iy2 = 1.0 / (g.dy * g.dy);
#pragma omp parallel for
  for (int j = 0; j < ny; ++j) {
    out.x(0, j) = u.x(0, j);
    out.x(nx, j) = u.x(nx, j);
    for (int i = 1; i < nx; ++i) {
      const double c = u.x(i, j);
      const double w = u.x(i - 1, j), e = u.x(i + 1, j);
      const double s = (j > 0) ? u.x(i, j - 1) : -c;       // tangential wall ghost
      const double n = (j + 1 < ny) ? u.x(i, j + 1) : -c;
      const double lap = (e - 2.0 * c + w) * ix2 + (n - 2.0 * c + s) * iy2;
      out.x(i, j) = c - alpha * lap;
    }
  }
#pragma omp parallel for
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (j == 0 || j == ny) {
        out.y(i, j) = u.y(i, j);
        continue;
      }
      const double c = u.y(i, j);
      const double s = u.y(i, j - 1), n = u.y(i, j + 1);
      const double w = (i > 0) ? u.y(i - 1, j) : -c;
      const double e = (i + 1 < nx) ? u.y(i + 1, j) : -c;
      const double lap = (e - 2.0 * c + w) * ix2 + (n - 2.0 * c + s) * iy2;
      out.y(i, j) = c - alpha * lap;
    }
}

void viscous_ring_correction(const Grid& g, const VectorField2& u,
                             VectorField2& out) {
  const int nx = g.nx(), ny = g.ny();
  const double iy2 = 1.0 / (g.dy * g.dy), ix2 = 1.0 / (g.dx * g.dx);
  for (auto& v : out.ux) v = 0.0;
  for (auto& v : out.uy) v = 0.0;
#pragma omp parallel for
  for (int i = 1; i < nx; ++i) {
    out.x(i, 0) = (u.x(i, 1) / 3.0 - u.x(i, 0)) * iy2;
    out.x(i, ny - 1) = (u.x(i, ny - 2) / 3.0 - u.x(i, ny - 1)) * iy2;
  }
#pragma omp parallel for
  for (int j = 1; j < ny; ++j) {
    out.y(0, j) = (u.y(1, j) / 3.0 - u.y(0, j)) * ix2;
    out.y(nx - 1, j) = (u.y(nx - 2, j) / 3.0 - u.y(nx - 1, j)) * ix2;
  }
}

void viscous_ring_correction_vjp(const Grid& g, const VectorField2& cout,
                                 VectorField2& cu) {
  const int nx = g.nx(), ny = g.ny();
  const double iy2 = 1.0 / (g.dy * g.dy), ix2 = 1.0 / (g.dx * g.dx);
  for (int i = 1; i < nx; ++i) {
    cu.x(i, 1) += cout.x(i, 0) * iy2 / 3.0;
    cu.x(i, 0) -= cout.x(i, 0) * iy2;
    cu.x(i, ny - 2) += cout.x(i, ny - 1) * iy2 / 3.0;
    cu.x(i, ny - 1) -= cout.x(i, ny - 1) * iy2;
  }
  for (int j = 1; j < ny; ++j) {
    cu.y(1, j) += cout.y(0, j) * ix2 / 3.0;
    cu.y(0, j) -= cout.y(0, j) * ix2;
    cu.y(nx - 2, j) += cout.y(nx - 1, j) * ix2 / 3.0;
    cu.y(nx - 1, j) -= cout.y(nx - 1, j) * ix2;
  }
}

// ---------------------------------------------------------------------------
// cell-centered derivatives
// ---------------------------------------------------------------------------

using detail::grad_at;

void cell_gradient(const Grid& g, const VectorField3& f, const double* trace,
                   VectorField3& fx, VectorField3& fy) {
  const int nx = g.nx(), ny = g.ny();
#pragma omp parallel for
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      for (int cc = 0; cc < 3; ++cc)
        grad_at(g, f, trace, i, j, cc, fx(i, j, cc), fy(i, j, cc));
}

void cell_gradient_vjp(const Grid& g, const VectorField3& cfx,
                       const VectorField3& cfy, VectorField3& cf,
                       double* ctrace) {
  const int nx = g.nx(), ny = g.ny();
  const double i2x = 0.5 / g.dx, i2y = 0.5 / g.dy;
  const double ix = 1.0 / g.dx, iy = 1.0 / g.dy;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      for (int cc = 0; cc < 3; ++cc) {
        const double ax = cfx(i, j, cc);
        if (i == 0) {
          if (ctrace) ctrace[3 * g.sample_left(j) + cc] -= (4.0 / 3.0) * ax * ix;
          cf(0, j, cc) += ax * ix;
          cf(1, j, cc) += (1.0 / 3.0) * ax * ix;
        } else if (i == nx - 1) {
          if (ctrace) ctrace[3 * g.sample_right(j) + cc] += (4.0 / 3.0) * ax * ix;
          cf(nx - 1, j, cc) -= ax * ix;
          cf(nx - 2, j, cc) -= (1.0 / 3.0) * ax * ix;
        } else {
          cf(i + 1, j, cc) += ax * i2x;
          cf(i - 1, j, cc) -= ax * i2x;
        }
        const double ay = cfy(i, j, cc);
        if (j == 0) {
          if (ctrace) ctrace[3 * g.sample_bottom(i) + cc] -= (4.0 / 3.0) * ay * iy;
          cf(i, 0, cc) += ay * iy;
          cf(i, 1, cc) += (1.0 / 3.0) * ay * iy;
        } else if (j == ny - 1) {
          if (ctrace) ctrace[3 * g.sample_top(i) + cc] += (4.0 / 3.0) * ay * iy;
          cf(i, ny - 1, cc) -= ay * iy;
          cf(i, ny - 2, cc) -= (1.0 / 3.0) * ay * iy;
        } else {
          cf(i, j + 1, cc) += ay * i2y;
          cf(i, j - 1, cc) -= ay * i2y;
        }
      }
}

namespace {

template <class Get, class Trace>
inline double lap_at(const Grid& g, Get&& val, Trace&& hval, int i, int j) {
  const int nx = g.nx(), ny = g.ny();
  const double ix2 = 1.0 / (g.dx * g.dx), iy2 = 1.0 / (g.dy * g.dy);
  const double c = val(i, j);
  const double e = (i + 1 < nx) ? val(i + 1, j) : 2.0 * hval(g.sample_right(j)) - c;
  const double w = (i > 0) ? val(i - 1, j) : 2.0 * hval(g.sample_left(j)) - c;
  const double n = (j + 1 < ny) ? val(i, j + 1) : 2.0 * hval(g.sample_top(i)) - c;
  const double s = (j > 0) ? val(i, j - 1) : 2.0 * hval(g.sample_bottom(i)) - c;
  return (e - 2.0 * c + w) * ix2 + (n - 2.0 * c + s) * iy2;
}

}  // namespace

void laplacian_cells(const Grid& g, const ScalarField& f, const double* trace,
                     ScalarField& out) {
  const int nx = g.nx(), ny = g.ny();
#pragma omp parallel for
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      out(i, j) = lap_at(g, [&](int a, int b) { return f(a, b); },
                         [&](int k) { return tr1(trace, k); }, i, j);
}

void laplacian_cells(const Grid& g, const VectorField3& f, const double* trace,
                     VectorField3& out) {
  const int nx = g.nx(), ny = g.ny();
#pragma omp parallel for
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      for (int cc = 0; cc < 3; ++cc)
        out(i, j, cc) = lap_at(g, [&](int a, int b) { return f(a, b, cc); },
                               [&](int k) { return tr3(trace, k)[cc]; }, i, j);
}

void laplacian_cells_vjp(const Grid& g, const VectorField3& cout,
                         VectorField3& cf, double* ctrace) {
  const int nx = g.nx(), ny = g.ny();
  const double ix2 = 1.0 / (g.dx * g.dx), iy2 = 1.0 / (g.dy * g.dy);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      for (int cc = 0; cc < 3; ++cc) {
        const double a = cout(i, j, cc);
        double diag = -2.0 * (ix2 + iy2);
        if (i + 1 < nx) cf(i + 1, j, cc) += a * ix2;
        else { if (ctrace) ctrace[3 * g.sample_right(j) + cc] += 2.0 * a * ix2; diag -= ix2; }
        if (i > 0) cf(i - 1, j, cc) += a * ix2;
        else { if (ctrace) ctrace[3 * g.sample_left(j) + cc] += 2.0 * a * ix2; diag -= ix2; }
        if (j + 1 < ny) cf(i, j + 1, cc) += a * iy2;
        else { if (ctrace) ctrace[3 * g.sample_top(i) + cc] += 2.0 * a * iy2; diag -= iy2; }
        if (j > 0) cf(i, j - 1, cc) += a * iy2;
        else { if (ctrace) ctrace[3 * g.sample_bottom(i) + cc] += 2.0 * a * iy2; diag -= iy2; }
        cf(i, j, cc) += a * diag;
      }
}

void laplacian_cells_ghost(const Grid& g, const ScalarField& f,
                           const double* ghost, ScalarField& out) {
  const int nx = g.nx(), ny = g.ny();
  const double ix2 = 1.0 / (g.dx * g.dx), iy2 = 1.0 / (g.dy * g.dy);
#pragma omp parallel for
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double c = f(i, j);
      const double e = (i + 1 < nx) ? f(i + 1, j) : ghost[g.sample_right(j)];
      const double w = (i > 0) ? f(i - 1, j) : ghost[g.sample_left(j)];
      const double n = (j + 1 < ny) ? f(i, j + 1) : ghost[g.sample_top(i)];
      const double s = (j > 0) ? f(i, j - 1) : ghost[g.sample_bottom(i)];
      out(i, j) = (e - 2.0 * c + w) * ix2 + (n - 2.0 * c + s) * iy2;
    }
}

// ---------------------------------------------------------------------------
// |grad d|^2
// ---------------------------------------------------------------------------

void gradsq(const Grid& g, const VectorField3& d, const double* trace,
            ScalarField& out) {
  const int nx = g.nx(), ny = g.ny();
#pragma omp parallel for
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double v = 0.0;
      for (int cc = 0; cc < 3; ++cc) {
        double gx, gy;
        grad_at(g, d, trace, i, j, cc, gx, gy);
        v += gx * gx + gy * gy;
      }
      out(i, j) = v;
    }
}

void gradsq_jvp(const Grid& g, const VectorField3& d, const double* trace,
                const VectorField3& phi, const double* xi, ScalarField& out) {
  const int nx = g.nx(), ny = g.ny();
#pragma omp parallel for
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double v = 0.0;
      for (int cc = 0; cc < 3; ++cc) {
        double gx, gy, px, py;
        grad_at(g, d, trace, i, j, cc, gx, gy);
        grad_at(g, phi, xi, i, j, cc, px, py);
        v += gx * px + gy * py;
      }
      out(i, j) = 2.0 * v;
    }
}

void gradsq_vjp(const Grid& g, const VectorField3& d, const double* trace,
                const ScalarField& cout, VectorField3& cphi, double* cxi) {
  VectorField3 fx(g.nx(), g.ny()), fy(g.nx(), g.ny());
  cell_gradient(g, d, trace, fx, fy);
  VectorField3 cpx(g.nx(), g.ny()), cpy(g.nx(), g.ny());
  const size_t n = cout.size();
  for (size_t q = 0; q < n; ++q)
    for (int cc = 0; cc < 3; ++cc) {
      cpx.data[3 * q + cc] = 2.0 * fx.data[3 * q + cc] * cout.data[q];
      cpy.data[3 * q + cc] = 2.0 * fy.data[3 * q + cc] * cout.data[q];
    }
  cell_gradient_vjp(g, cpx, cpy, cphi, cxi);
}

// ---------------------------------------------------------------------------
// advection at cells
// ---------------------------------------------------------------------------

void faces_to_centers(const Grid& g, const VectorField2& u, ScalarField& ucx,
                      ScalarField& ucy) {
  const int nx = g.nx(), ny = g.ny();
#pragma omp parallel for
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      ucx(i, j) = 0.5 * (u.x(i, j) + u.x(i + 1, j));
      ucy(i, j) = 0.5 * (u.y(i, j) + u.y(i, j + 1));
    }
}

void faces_to_centers_vjp(const Grid& g, const ScalarField& cucx,
                          const ScalarField& cucy, VectorField2& cu) {
  const int nx = g.nx(), ny = g.ny();
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      cu.x(i, j) += 0.5 * cucx(i, j);
      cu.x(i + 1, j) += 0.5 * cucx(i, j);
      cu.y(i, j) += 0.5 * cucy(i, j);
      cu.y(i, j + 1) += 0.5 * cucy(i, j);
    }
}

namespace {

// One-dimensional difference of a cell value against its neighbor or trace
// ghost, shared by the centered and upwind advection variants.
struct CellDiffs {
  double e, w, n, s, c;  // neighbor (or ghost) values and the center value
};

inline CellDiffs neighbor_values(const Grid& g, const VectorField3& f,
                                 const double* trace, int i, int j, int cc) {
  const int nx = g.nx(), ny = g.ny();
  CellDiffs r;
  r.c = f(i, j, cc);
  r.e = (i + 1 < nx) ? f(i + 1, j, cc) : 2.0 * tr3(trace, g.sample_right(j))[cc] - r.c;
  r.w = (i > 0) ? f(i - 1, j, cc) : 2.0 * tr3(trace, g.sample_left(j))[cc] - r.c;
  r.n = (j + 1 < ny) ? f(i, j + 1, cc) : 2.0 * tr3(trace, g.sample_top(i))[cc] - r.c;
  r.s = (j > 0) ? f(i, j - 1, cc) : 2.0 * tr3(trace, g.sample_bottom(i))[cc] - r.c;
  return r;
}

}  // namespace

void advect_cells(const Grid& g, const VectorField2& u, const VectorField3& f,
                  const double* trace, bool upwind, VectorField3& out) {
  const int nx = g.nx(), ny = g.ny();
  const double idx = 1.0 / g.dx, idy = 1.0 / g.dy;
  if (!upwind) {
#pragma omp parallel for
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double ax = 0.5 * (u.x(i, j) + u.x(i + 1, j));
        const double ay = 0.5 * (u.y(i, j) + u.y(i, j + 1));
        for (int cc = 0; cc < 3; ++cc) {
          double gx, gy;
          grad_at(g, f, trace, i, j, cc, gx, gy);
          out(i, j, cc) = ax * gx + ay * gy;
        }
      }
    return;
  }
#pragma omp parallel for
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double ax = 0.5 * (u.x(i, j) + u.x(i + 1, j));
      const double ay = 0.5 * (u.y(i, j) + u.y(i, j + 1));
      for (int cc = 0; cc < 3; ++cc) {
        const CellDiffs v = neighbor_values(g, f, trace, i, j, cc);
        const double gx = (ax > 0.0) ? (v.c - v.w) * idx : (v.e - v.c) * idx;
        const double gy = (ay > 0.0) ? (v.c - v.s) * idy : (v.n - v.c) * idy;
        out(i, j, cc) = ax * gx + ay * gy;
      }
    }
}

void advect_cells_jvp(const Grid& g, const VectorField2& u,
                      const VectorField3& f, const double* trace, bool upwind,
                      const VectorField2& du, const VectorField3& df,
                      const double* dtrace, VectorField3& out) {
  const int nx = g.nx(), ny = g.ny();
  const double idx = 1.0 / g.dx, idy = 1.0 / g.dy;
  if (!upwind) {
#pragma omp parallel for
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double ax = 0.5 * (u.x(i, j) + u.x(i + 1, j));
        const double ay = 0.5 * (u.y(i, j) + u.y(i, j + 1));
        const double dax = 0.5 * (du.x(i, j) + du.x(i + 1, j));
        const double day = 0.5 * (du.y(i, j) + du.y(i, j + 1));
        for (int cc = 0; cc < 3; ++cc) {
          double gx, gy, dgx, dgy;
          grad_at(g, f, trace, i, j, cc, gx, gy);
          grad_at(g, df, dtrace, i, j, cc, dgx, dgy);
          out(i, j, cc) = dax * gx + ax * dgx + day * gy + ay * dgy;
        }
      }
    return;
  }
#pragma omp parallel for
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double ax = 0.5 * (u.x(i, j) + u.x(i + 1, j));
      const double ay = 0.5 * (u.y(i, j) + u.y(i, j + 1));
      const double dax = 0.5 * (du.x(i, j) + du.x(i + 1, j));
      const double day = 0.5 * (du.y(i, j) + du.y(i, j + 1));
      for (int cc = 0; cc < 3; ++cc) {
        const CellDiffs v = neighbor_values(g, f, trace, i, j, cc);
        const CellDiffs dv = neighbor_values(g, df, dtrace, i, j, cc);
        const double gx = (ax > 0.0) ? (v.c - v.w) * idx : (v.e - v.c) * idx;
        const double gy = (ay > 0.0) ? (v.c - v.s) * idy : (v.n - v.c) * idy;
        const double dgx = (ax > 0.0) ? (dv.c - dv.w) * idx : (dv.e - dv.c) * idx;
        const double dgy = (ay > 0.0) ? (dv.c - dv.s) * idy : (dv.n - dv.c) * idy;
        out(i, j, cc) = dax * gx + ax * dgx + day * gy + ay * dgy;
      }
    }
}

namespace {

// Scatter the cotangent of one directional difference back onto (cf, ctrace).
// dir selects which neighbor the difference reached for; sign is its weight.
inline void scatter_neighbor(const Grid& g, int i, int j, int cc, int which,
                             double a, VectorField3& cf, double* ctrace) {
  const int nx = g.nx(), ny = g.ny();
  switch (which) {
    case 0:  // east
      if (i + 1 < nx) cf(i + 1, j, cc) += a;
      else { if (ctrace) ctrace[3 * g.sample_right(j) + cc] += 2.0 * a; cf(i, j, cc) -= a; }
      break;
    case 1:  // west
      if (i > 0) cf(i - 1, j, cc) += a;
      else { if (ctrace) ctrace[3 * g.sample_left(j) + cc] += 2.0 * a; cf(i, j, cc) -= a; }
      break;
    case 2:  // north
      if (j + 1 < ny) cf(i, j + 1, cc) += a;
      else { if (ctrace) ctrace[3 * g.sample_top(i) + cc] += 2.0 * a; cf(i, j, cc) -= a; }
      break;
    case 3:  // south
      if (j > 0) cf(i, j - 1, cc) += a;
      else { if (ctrace) ctrace[3 * g.sample_bottom(i) + cc] += 2.0 * a; cf(i, j, cc) -= a; }
      break;
  }
}

}  // namespace

void advect_cells_vjp(const Grid& g, const VectorField2& u,
                      const VectorField3& f, const double* trace, bool upwind,
                      const VectorField3& cout, VectorField2& cu,
                      VectorField3& cf, double* ctrace) {
  const int nx = g.nx(), ny = g.ny();
  const double idx = 1.0 / g.dx, idy = 1.0 / g.dy;
  if (!upwind) {
    VectorField3 gx(nx, ny), gy(nx, ny);
    cell_gradient(g, f, trace, gx, gy);
    VectorField3 cgx(nx, ny), cgy(nx, ny);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double ax = 0.5 * (u.x(i, j) + u.x(i + 1, j));
        const double ay = 0.5 * (u.y(i, j) + u.y(i, j + 1));
        double cax = 0.0, cay = 0.0;
        for (int cc = 0; cc < 3; ++cc) {
          const double a = cout(i, j, cc);
          cax += gx(i, j, cc) * a;
          cay += gy(i, j, cc) * a;
          cgx(i, j, cc) = ax * a;
          cgy(i, j, cc) = ay * a;
        }
        cu.x(i, j) += 0.5 * cax;
        cu.x(i + 1, j) += 0.5 * cax;
        cu.y(i, j) += 0.5 * cay;
        cu.y(i, j + 1) += 0.5 * cay;
      }
    cell_gradient_vjp(g, cgx, cgy, cf, ctrace);
    return;
  }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double ax = 0.5 * (u.x(i, j) + u.x(i + 1, j));
      const double ay = 0.5 * (u.y(i, j) + u.y(i, j + 1));
      double cax = 0.0, cay = 0.0;
      for (int cc = 0; cc < 3; ++cc) {
        const CellDiffs v = neighbor_values(g, f, trace, i, j, cc);
        const double a = cout(i, j, cc);
        const double gx = (ax > 0.0) ? (v.c - v.w) * idx : (v.e - v.c) * idx;
        const double gy = (ay > 0.0) ? (v.c - v.s) * idy : (v.n - v.c) * idy;
        cax += gx * a;
        cay += gy * a;
        if (ax > 0.0) { cf(i, j, cc) += ax * a * idx; scatter_neighbor(g, i, j, cc, 1, -ax * a * idx, cf, ctrace); }
        else { scatter_neighbor(g, i, j, cc, 0, ax * a * idx, cf, ctrace); cf(i, j, cc) -= ax * a * idx; }
        if (ay > 0.0) { cf(i, j, cc) += ay * a * idy; scatter_neighbor(g, i, j, cc, 3, -ay * a * idy, cf, ctrace); }
        else { scatter_neighbor(g, i, j, cc, 2, ay * a * idy, cf, ctrace); cf(i, j, cc) -= ay * a * idy; }
      }
      cu.x(i, j) += 0.5 * cax;
      cu.x(i + 1, j) += 0.5 * cax;
      cu.y(i, j) += 0.5 * cay;
      cu.y(i, j + 1) += 0.5 * cay;
    }
}

// ---------------------------------------------------------------------------
// advection at faces
// ---------------------------------------------------------------------------

namespace {

// tangential derivative of a face velocity across the wall-parallel
// direction: centered inside, second-order one-sided at the wall-adjacent
// rows (wall value zero). ring = -1: wall below, +1: wall above.
inline double tang_deriv(double s, double c, double n, int ring, double ih) {
  if (ring < 0) return (n + 3.0 * c) * (ih / 3.0);
  if (ring > 0) return -(s + 3.0 * c) * (ih / 3.0);
  return (n - s) * 0.5 * ih;
}

}  // namespace

void advect_faces(const Grid& g, const VectorField2& u, bool upwind,
                  VectorField2& out) {
  const int nx = g.nx(), ny = g.ny();
  const double idx = 1.0 / g.dx, idy = 1.0 / g.dy;
#pragma omp parallel for
  for (int j = 0; j < ny; ++j) {
    out.x(0, j) = 0.0;
    out.x(nx, j) = 0.0;
    const int ring = (j == 0) ? -1 : (j == ny - 1 ? 1 : 0);
    for (int i = 1; i < nx; ++i) {
      const double c = u.x(i, j);
      const double e = u.x(i + 1, j), w = u.x(i - 1, j);
      const double n = (j + 1 < ny) ? u.x(i, j + 1) : 0.0;
      const double s = (j > 0) ? u.x(i, j - 1) : 0.0;
      const double vb = 0.25 * (u.y(i - 1, j) + u.y(i, j) + u.y(i - 1, j + 1) + u.y(i, j + 1));
      double gx, gy;
      if (upwind) {
        gx = (c > 0.0) ? (c - w) * idx : (e - c) * idx;
        const double sg = (j > 0) ? s : -c;  // reflected ghost for upwinding
        const double ng = (j + 1 < ny) ? n : -c;
        gy = (vb > 0.0) ? (c - sg) * idy : (ng - c) * idy;
      } else {
        gx = (e - w) * 0.5 * idx;
        gy = tang_deriv(s, c, n, ring, idy);
      }
      out.x(i, j) = c * gx + vb * gy;
    }
  }
#pragma omp parallel for
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (j == 0 || j == ny) {
        out.y(i, j) = 0.0;
        continue;
      }
      const int ring = (i == 0) ? -1 : (i == nx - 1 ? 1 : 0);
      const double c = u.y(i, j);
      const double n = u.y(i, j + 1), s = u.y(i, j - 1);
      const double e = (i + 1 < nx) ? u.y(i + 1, j) : 0.0;
      const double w = (i > 0) ? u.y(i - 1, j) : 0.0;
      const double ub = 0.25 * (u.x(i, j - 1) + u.x(i + 1, j - 1) + u.x(i, j) + u.x(i + 1, j));
      double gx, gy;
      if (upwind) {
        const double wg = (i > 0) ? w : -c;
        const double eg = (i + 1 < nx) ? e : -c;
        gx = (ub > 0.0) ? (c - wg) * idx : (eg - c) * idx;
        gy = (c > 0.0) ? (c - s) * idy : (n - c) * idy;
      } else {
        gx = tang_deriv(w, c, e, ring, idx);
        gy = (n - s) * 0.5 * idy;
      }
      out.y(i, j) = ub * gx + c * gy;
    }
}

void advect_faces_jvp(const Grid& g, const VectorField2& u, bool upwind,
                      const VectorField2& du, VectorField2& out) {
  const int nx = g.nx(), ny = g.ny();
  const double idx = 1.0 / g.dx, idy = 1.0 / g.dy;
#pragma omp parallel for
  for (int j = 0; j < ny; ++j) {
    out.x(0, j) = 0.0;
    out.x(nx, j) = 0.0;
    const int ring = (j == 0) ? -1 : (j == ny - 1 ? 1 : 0);
    for (int i = 1; i < nx; ++i) {
      const double c = u.x(i, j), dc = du.x(i, j);
      const double e = u.x(i + 1, j), w = u.x(i - 1, j);
      const double de = du.x(i + 1, j), dw = du.x(i - 1, j);
      const double n = (j + 1 < ny) ? u.x(i, j + 1) : 0.0;
      const double s = (j > 0) ? u.x(i, j - 1) : 0.0;
      const double dn = (j + 1 < ny) ? du.x(i, j + 1) : 0.0;
      const double ds = (j > 0) ? du.x(i, j - 1) : 0.0;
      const double vb = 0.25 * (u.y(i - 1, j) + u.y(i, j) + u.y(i - 1, j + 1) + u.y(i, j + 1));
      const double dvb = 0.25 * (du.y(i - 1, j) + du.y(i, j) + du.y(i - 1, j + 1) + du.y(i, j + 1));
      double gx, gy, dgx, dgy;
      if (upwind) {
        gx = (c > 0.0) ? (c - w) * idx : (e - c) * idx;
        dgx = (c > 0.0) ? (dc - dw) * idx : (de - dc) * idx;
        const double sg = (j > 0) ? s : -c;
        const double ng = (j + 1 < ny) ? n : -c;
        const double dsg = (j > 0) ? ds : -dc;
        const double dng = (j + 1 < ny) ? dn : -dc;
        gy = (vb > 0.0) ? (c - sg) * idy : (ng - c) * idy;
        dgy = (vb > 0.0) ? (dc - dsg) * idy : (dng - dc) * idy;
      } else {
        gx = (e - w) * 0.5 * idx;
        gy = tang_deriv(s, c, n, ring, idy);
        dgx = (de - dw) * 0.5 * idx;
        dgy = tang_deriv(ds, dc, dn, ring, idy);
      }
      out.x(i, j) = dc * gx + c * dgx + dvb * gy + vb * dgy;
    }
  }
#pragma omp parallel for
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (j == 0 || j == ny) {
        out.y(i, j) = 0.0;
        continue;
      }
      const int ring = (i == 0) ? -1 : (i == nx - 1 ? 1 : 0);
      const double c = u.y(i, j), dc = du.y(i, j);
      const double n = u.y(i, j + 1), s = u.y(i, j - 1);
      const double dn = du.y(i, j + 1), ds = du.y(i, j - 1);
      const double e = (i + 1 < nx) ? u.y(i + 1, j) : 0.0;
      const double w = (i > 0) ? u.y(i - 1, j) : 0.0;
      const double de = (i + 1 < nx) ? du.y(i + 1, j) : 0.0;
      const double dw = (i > 0) ? du.y(i - 1, j) : 0.0;
      const double ub = 0.25 * (u.x(i, j - 1) + u.x(i + 1, j - 1) + u.x(i, j) + u.x(i + 1, j));
      const double dub = 0.25 * (du.x(i, j - 1) + du.x(i + 1, j - 1) + du.x(i, j) + du.x(i + 1, j));
      double gx, gy, dgx, dgy;
      if (upwind) {
        const double wg = (i > 0) ? w : -c;
        const double eg = (i + 1 < nx) ? e : -c;
        const double dwg = (i > 0) ? dw : -dc;
        const double deg = (i + 1 < nx) ? de : -dc;
        gx = (ub > 0.0) ? (c - wg) * idx : (eg - c) * idx;
        dgx = (ub > 0.0) ? (dc - dwg) * idx : (deg - dc) * idx;
        gy = (c > 0.0) ? (c - s) * idy : (n - c) * idy;
        dgy = (c > 0.0) ? (dc - ds) * idy : (dn - dc) * idy;
      } else {
        gx = tang_deriv(w, c, e, ring, idx);
        gy = (n - s) * 0.5 * idy;
        dgx = tang_deriv(dw, dc, de, ring, idx);
        dgy = (dn - ds) * 0.5 * idy;
      }
      out.y(i, j) = dub * gx + ub * dgx + dc * gy + c * dgy;
    }
}

void advect_faces_vjp(const Grid& g, const VectorField2& u, bool upwind,
                      const VectorField2& cout, VectorField2& cu) {
  const int nx = g.nx(), ny = g.ny();
  const double idx = 1.0 / g.dx, idy = 1.0 / g.dy;
  // x-faces
  for (int j = 0; j < ny; ++j) {
    const int ring = (j == 0) ? -1 : (j == ny - 1 ? 1 : 0);
    for (int i = 1; i < nx; ++i) {
      const double a = cout.x(i, j);
      if (a == 0.0) continue;
      const double c = u.x(i, j);
      const double e = u.x(i + 1, j), w = u.x(i - 1, j);
      const double n = (j + 1 < ny) ? u.x(i, j + 1) : 0.0;
      const double s = (j > 0) ? u.x(i, j - 1) : 0.0;
      const double vb = 0.25 * (u.y(i - 1, j) + u.y(i, j) + u.y(i - 1, j + 1) + u.y(i, j + 1));
      double gx, gy;
      if (upwind) {
        const double sg = (j > 0) ? s : -c;
        const double ng = (j + 1 < ny) ? n : -c;
        gx = (c > 0.0) ? (c - w) * idx : (e - c) * idx;
        gy = (vb > 0.0) ? (c - sg) * idy : (ng - c) * idy;
        if (c > 0.0) { cu.x(i, j) += c * a * idx; cu.x(i - 1, j) -= c * a * idx; }
        else { cu.x(i + 1, j) += c * a * idx; cu.x(i, j) -= c * a * idx; }
        if (vb > 0.0) {
          cu.x(i, j) += vb * a * idy;
          if (j > 0) cu.x(i, j - 1) -= vb * a * idy;
          else cu.x(i, j) += vb * a * idy;  // ghost -c
        } else {
          if (j + 1 < ny) cu.x(i, j + 1) += vb * a * idy;
          else cu.x(i, j) -= vb * a * idy;
          cu.x(i, j) -= vb * a * idy;
        }
      } else {
        gx = (e - w) * 0.5 * idx;
        gy = tang_deriv(s, c, n, ring, idy);
        cu.x(i + 1, j) += c * a * 0.5 * idx;
        cu.x(i - 1, j) -= c * a * 0.5 * idx;
        if (ring < 0) {
          cu.x(i, j + 1) += vb * a * idy / 3.0;
          cu.x(i, j) += vb * a * idy;
        } else if (ring > 0) {
          cu.x(i, j - 1) -= vb * a * idy / 3.0;
          cu.x(i, j) -= vb * a * idy;
        } else {
          cu.x(i, j + 1) += vb * a * 0.5 * idy;
          cu.x(i, j - 1) -= vb * a * 0.5 * idy;
        }
      }
      cu.x(i, j) += gx * a;
      const double cvb = gy * a * 0.25;
      cu.y(i - 1, j) += cvb;
      cu.y(i, j) += cvb;
      cu.y(i - 1, j + 1) += cvb;
      cu.y(i, j + 1) += cvb;
    }
  }
  // y-faces
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double a = cout.y(i, j);
      if (a == 0.0) continue;
      const int ring = (i == 0) ? -1 : (i == nx - 1 ? 1 : 0);
      const double c = u.y(i, j);
      const double n = u.y(i, j + 1), s = u.y(i, j - 1);
      const double e = (i + 1 < nx) ? u.y(i + 1, j) : 0.0;
      const double w = (i > 0) ? u.y(i - 1, j) : 0.0;
      const double ub = 0.25 * (u.x(i, j - 1) + u.x(i + 1, j - 1) + u.x(i, j) + u.x(i + 1, j));
      double gx, gy;
      if (upwind) {
        const double wg = (i > 0) ? w : -c;
        const double eg = (i + 1 < nx) ? e : -c;
        gx = (ub > 0.0) ? (c - wg) * idx : (eg - c) * idx;
        gy = (c > 0.0) ? (c - s) * idy : (n - c) * idy;
        if (ub > 0.0) {
          cu.y(i, j) += ub * a * idx;
          if (i > 0) cu.y(i - 1, j) -= ub * a * idx;
          else cu.y(i, j) += ub * a * idx;
        } else {
          if (i + 1 < nx) cu.y(i + 1, j) += ub * a * idx;
          else cu.y(i, j) -= ub * a * idx;
          cu.y(i, j) -= ub * a * idx;
        }
        if (c > 0.0) { cu.y(i, j) += c * a * idy; cu.y(i, j - 1) -= c * a * idy; }
        else { cu.y(i, j + 1) += c * a * idy; cu.y(i, j) -= c * a * idy; }
      } else {
        gx = tang_deriv(w, c, e, ring, idx);
        gy = (n - s) * 0.5 * idy;
        if (ring < 0) {
          cu.y(i + 1, j) += ub * a * idx / 3.0;
          cu.y(i, j) += ub * a * idx;
        } else if (ring > 0) {
          cu.y(i - 1, j) -= ub * a * idx / 3.0;
          cu.y(i, j) -= ub * a * idx;
        } else {
          cu.y(i + 1, j) += ub * a * 0.5 * idx;
          cu.y(i - 1, j) -= ub * a * 0.5 * idx;
        }
        cu.y(i, j + 1) += c * a * 0.5 * idy;
        cu.y(i, j - 1) -= c * a * 0.5 * idy;
      }
      cu.y(i, j) += gy * a;
      const double cub = gx * a * 0.25;
      cu.x(i, j - 1) += cub;
      cu.x(i + 1, j - 1) += cub;
      cu.x(i, j) += cub;
      cu.x(i + 1, j) += cub;
    }
}

// ---------------------------------------------------------------------------
// elastic stress
// ---------------------------------------------------------------------------

StressTensor elastic_stress(const Grid& g, const VectorField3& d,
                            const double* trace) {
  const int nx = g.nx(), ny = g.ny();
  VectorField3 fx(nx, ny), fy(nx, ny);
  cell_gradient(g, d, trace, fx, fy);
  StressTensor t{ScalarField(nx, ny), ScalarField(nx, ny), ScalarField(nx, ny),
                 ScalarField(nx, ny)};
  const size_t n = t.s11.size();
#pragma omp parallel for
  for (size_t q = 0; q < n; ++q) {
    double xx = 0.0, xy = 0.0, yy = 0.0;
    for (int cc = 0; cc < 3; ++cc) {
      const double a = fx.data[3 * q + cc], b = fy.data[3 * q + cc];
      xx += a * a;
      xy += a * b;
      yy += b * b;
    }
    t.s11.data[q] = xx;
    t.s12.data[q] = xy;
    t.s21.data[q] = xy;
    t.s22.data[q] = yy;
  }
  return t;
}

}  // namespace lcf
