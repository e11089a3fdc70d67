#include "lcf/ref.hpp"

#include <cmath>
#include <vector>

namespace lcf::ref {

namespace {

inline size_t pidx(const Grid& g, int i, int j, int c) {
  return (size_t(j + 1) * (g.nx() + 2) + (i + 1)) * 3 + c;
}

}  // namespace

std::vector<double> pad_with_trace(const Grid& g, const VectorField3& f,
                                   const double* trace) {
  const int nx = g.nx(), ny = g.ny();
  std::vector<double> p(size_t(nx + 2) * (ny + 2) * 3, 0.0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      for (int c = 0; c < 3; ++c) p[pidx(g, i, j, c)] = f(i, j, c);
  auto hv = [&](int k, int c) { return trace ? trace[3 * k + c] : 0.0; };
  for (int i = 0; i < nx; ++i)
    for (int c = 0; c < 3; ++c) {
      p[pidx(g, i, -1, c)] = 2.0 * hv(g.sample_bottom(i), c) - f(i, 0, c);
      p[pidx(g, i, ny, c)] = 2.0 * hv(g.sample_top(i), c) - f(i, ny - 1, c);
    }
  for (int j = 0; j < ny; ++j)
    for (int c = 0; c < 3; ++c) {
      p[pidx(g, -1, j, c)] = 2.0 * hv(g.sample_left(j), c) - f(0, j, c);
      p[pidx(g, nx, j, c)] = 2.0 * hv(g.sample_right(j), c) - f(nx - 1, j, c);
    }
  return p;
}

VectorField3 laplacian_cells(const Grid& g, const VectorField3& f,
                             const double* trace) {
  const int nx = g.nx(), ny = g.ny();
  const auto p = pad_with_trace(g, f, trace);
  VectorField3 out(nx, ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      for (int c = 0; c < 3; ++c)
        out(i, j, c) =
            (p[pidx(g, i + 1, j, c)] - 2.0 * p[pidx(g, i, j, c)] + p[pidx(g, i - 1, j, c)]) /
                (g.dx * g.dx) +
            (p[pidx(g, i, j + 1, c)] - 2.0 * p[pidx(g, i, j, c)] + p[pidx(g, i, j - 1, c)]) /
                (g.dy * g.dy);
  return out;
}

ScalarField divergence(const Grid& g, const VectorField2& u) {
  ScalarField out(g.nx(), g.ny());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      out(i, j) = (u.x(i + 1, j) - u.x(i, j)) / g.dx +
                  (u.y(i, j + 1) - u.y(i, j)) / g.dy;
  return out;
}

namespace {

// first derivative at a cell center along one axis: centered inside, the
// three-point parabola against the trace at wall cells
double deriv1(double fm, double fc, double fp, double hwall, int pos, double h) {
  if (pos < 0) return ((fp - hwall) + 3.0 * (fc - hwall)) / (3.0 * h);
  if (pos > 0) return ((hwall - fm) + 3.0 * (hwall - fc)) / (3.0 * h);
  return (fp - fm) / (2.0 * h);
}

void ref_cell_grad(const Grid& g, const VectorField3& f, const double* trace,
                   int i, int j, int c, double& gx, double& gy) {
  const int nx = g.nx(), ny = g.ny();
  auto hv = [&](int k) { return trace ? trace[3 * k + c] : 0.0; };
  const double fc = f(i, j, c);
  const int px = (i == 0) ? -1 : (i == nx - 1 ? 1 : 0);
  gx = deriv1(i > 0 ? f(i - 1, j, c) : 0.0, fc, i + 1 < nx ? f(i + 1, j, c) : 0.0,
              px < 0 ? hv(g.sample_left(j)) : hv(g.sample_right(j)), px, g.dx);
  const int py = (j == 0) ? -1 : (j == ny - 1 ? 1 : 0);
  gy = deriv1(j > 0 ? f(i, j - 1, c) : 0.0, fc, j + 1 < ny ? f(i, j + 1, c) : 0.0,
              py < 0 ? hv(g.sample_bottom(i)) : hv(g.sample_top(i)), py, g.dy);
}

}  // namespace

VectorField3 advect_cells(const Grid& g, const VectorField2& u,
                          const VectorField3& f, const double* trace) {
  const int nx = g.nx(), ny = g.ny();
  VectorField3 out(nx, ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double ax = 0.5 * (u.x(i, j) + u.x(i + 1, j));
      const double ay = 0.5 * (u.y(i, j) + u.y(i, j + 1));
      for (int c = 0; c < 3; ++c) {
        double gx, gy;
        ref_cell_grad(g, f, trace, i, j, c, gx, gy);
        out(i, j, c) = ax * gx + ay * gy;
      }
    }
  return out;
}

ScalarField gradsq(const Grid& g, const VectorField3& d, const double* trace) {
  const int nx = g.nx(), ny = g.ny();
  ScalarField out(nx, ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double v = 0.0;
      for (int c = 0; c < 3; ++c) {
        double gx, gy;
        ref_cell_grad(g, d, trace, i, j, c, gx, gy);
        v += gx * gx + gy * gy;
      }
      out(i, j) = v;
    }
  return out;
}

VectorField3 heat_step(const Grid& g, const VectorField3& d, const double* trace,
                       double mu, double dt) {
  VectorField3 lap = laplacian_cells(g, d, trace);
  VectorField3 out(g.nx(), g.ny());
  for (size_t q = 0; q < out.data.size(); ++q)
    out.data[q] = d.data[q] + dt * mu * lap.data[q];
  return out;
}

VectorField2 laplacian_faces(const Grid& g, const VectorField2& u) {
  const int nx = g.nx(), ny = g.ny();
  VectorField2 out(nx, ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) {
      const double c = u.x(i, j);
      const double s = (j > 0) ? u.x(i, j - 1) : -c;
      const double n = (j + 1 < ny) ? u.x(i, j + 1) : -c;
      out.x(i, j) = (u.x(i + 1, j) - 2.0 * c + u.x(i - 1, j)) / (g.dx * g.dx) +
                    (n - 2.0 * c + s) / (g.dy * g.dy);
    }
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double c = u.y(i, j);
      const double w = (i > 0) ? u.y(i - 1, j) : -c;
      const double e = (i + 1 < nx) ? u.y(i + 1, j) : -c;
      out.y(i, j) = (e - 2.0 * c + w) / (g.dx * g.dx) +
                    (u.y(i, j + 1) - 2.0 * c + u.y(i, j - 1)) / (g.dy * g.dy);
    }
  return out;
}

VectorField2 advect_faces(const Grid& g, const VectorField2& u) {
  const int nx = g.nx(), ny = g.ny();
  VectorField2 out(nx, ny);
  auto tang = [](double s, double c, double n, int ring, double h) {
    if (ring < 0) return (n + 3.0 * c) / (3.0 * h);
    if (ring > 0) return -(s + 3.0 * c) / (3.0 * h);
    return (n - s) / (2.0 * h);
  };
  for (int j = 0; j < ny; ++j) {
    const int ring = (j == 0) ? -1 : (j == ny - 1 ? 1 : 0);
    for (int i = 1; i < nx; ++i) {
      const double c = u.x(i, j);
      const double s = (j > 0) ? u.x(i, j - 1) : 0.0;
      const double n = (j + 1 < ny) ? u.x(i, j + 1) : 0.0;
      const double vb =
          0.25 * (u.y(i - 1, j) + u.y(i, j) + u.y(i - 1, j + 1) + u.y(i, j + 1));
      out.x(i, j) = c * (u.x(i + 1, j) - u.x(i - 1, j)) / (2.0 * g.dx) +
                    vb * tang(s, c, n, ring, g.dy);
    }
  }
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int ring = (i == 0) ? -1 : (i == nx - 1 ? 1 : 0);
      const double c = u.y(i, j);
      const double w = (i > 0) ? u.y(i - 1, j) : 0.0;
      const double e = (i + 1 < nx) ? u.y(i + 1, j) : 0.0;
      const double ub =
          0.25 * (u.x(i, j - 1) + u.x(i + 1, j - 1) + u.x(i, j) + u.x(i + 1, j));
      out.y(i, j) = ub * tang(w, c, e, ring, g.dx) +
                    c * (u.y(i, j + 1) - u.y(i, j - 1)) / (2.0 * g.dy);
    }
  return out;
}

VectorField2 stress_force(const Grid& g, const VectorField3& d,
                          const double* trace) {
  const int nx = g.nx(), ny = g.ny();
  auto hv = [&](int k, int c) { return trace ? trace[3 * k + c] : 0.0; };

  // diagonal entries at cells
  ScalarField s11(nx, ny), s22(nx, ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double xx = 0.0, yy = 0.0;
      for (int c = 0; c < 3; ++c) {
        double gx, gy;
        ref_cell_grad(g, d, trace, i, j, c, gx, gy);
        xx += gx * gx;
        yy += gy * gy;
      }
      s11(i, j) = xx;
      s22(i, j) = yy;
    }

  // cross entry at nodes
  std::vector<double> s12(size_t(nx + 1) * (ny + 1), 0.0);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const bool xe = (i == 0 || i == nx), ye = (j == 0 || j == ny);
      if (xe && ye) continue;
      double dot = 0.0;
      for (int c = 0; c < 3; ++c) {
        double gx, gy;
        if (!xe && !ye) {
          gx = (d(i, j, c) + d(i, j - 1, c) - d(i - 1, j, c) - d(i - 1, j - 1, c)) / (2.0 * g.dx);
          gy = (d(i, j, c) + d(i - 1, j, c) - d(i, j - 1, c) - d(i - 1, j - 1, c)) / (2.0 * g.dy);
        } else if (j == 0) {
          const double ha = hv(g.sample_bottom(i - 1), c), hb = hv(g.sample_bottom(i), c);
          gx = (hb - ha) / g.dx;
          const double f0 = 0.5 * (ha + hb);
          const double f1 = 0.5 * (d(i - 1, 0, c) + d(i, 0, c));
          const double f2 = 0.5 * (d(i - 1, 1, c) + d(i, 1, c));
          gy = (-8.0 * f0 + 9.0 * f1 - f2) / (3.0 * g.dy);
        } else if (j == ny) {
          const double ha = hv(g.sample_top(i - 1), c), hb = hv(g.sample_top(i), c);
          gx = (hb - ha) / g.dx;
          const double f0 = 0.5 * (ha + hb);
          const double f1 = 0.5 * (d(i - 1, ny - 1, c) + d(i, ny - 1, c));
          const double f2 = 0.5 * (d(i - 1, ny - 2, c) + d(i, ny - 2, c));
          gy = (8.0 * f0 - 9.0 * f1 + f2) / (3.0 * g.dy);
        } else if (i == 0) {
          const double ha = hv(g.sample_left(j - 1), c), hb = hv(g.sample_left(j), c);
          gy = (hb - ha) / g.dy;
          const double f0 = 0.5 * (ha + hb);
          const double f1 = 0.5 * (d(0, j - 1, c) + d(0, j, c));
          const double f2 = 0.5 * (d(1, j - 1, c) + d(1, j, c));
          gx = (-8.0 * f0 + 9.0 * f1 - f2) / (3.0 * g.dx);
        } else {
          const double ha = hv(g.sample_right(j - 1), c), hb = hv(g.sample_right(j), c);
          gy = (hb - ha) / g.dy;
          const double f0 = 0.5 * (ha + hb);
          const double f1 = 0.5 * (d(nx - 1, j - 1, c) + d(nx - 1, j, c));
          const double f2 = 0.5 * (d(nx - 2, j - 1, c) + d(nx - 2, j, c));
          gx = (8.0 * f0 - 9.0 * f1 + f2) / (3.0 * g.dx);
        }
        dot += gx * gy;
      }
      s12[size_t(j) * (nx + 1) + i] = dot;
    }

  VectorField2 out(nx, ny);
  auto node = [&](int i, int j) { return s12[size_t(j) * (nx + 1) + i]; };
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i)
      out.x(i, j) = (s11(i, j) - s11(i - 1, j)) / g.dx + (node(i, j + 1) - node(i, j)) / g.dy;
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      out.y(i, j) = (s22(i, j) - s22(i, j - 1)) / g.dy + (node(i + 1, j) - node(i, j)) / g.dx;
  return out;
}

double sum_cells(const ScalarField& f, double w) {
  double s = 0.0;
  for (double v : f.data) s += v;
  return s * w;
}

}  // namespace lcf::ref
