#include "lcf/state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lcf/errors.hpp"
#include "lcf/solver.hpp"

namespace lcf {

namespace {

inline double dot3(const double* a, const double* b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace

void validate_bc(const Grid& g, const DirectorBC& bc,
                 const std::vector<double>* d0_trace) {
  if (bc.m != g.m)
    throw InvalidParameter("bc: sample count " + std::to_string(bc.m) +
                           " does not match grid boundary " + std::to_string(g.m));
  for (int n = 0; n < bc.nlevels; ++n)
    for (int j = 0; j < bc.m; ++j) {
      const double* h = bc.at(j, n);
      const double norm = std::sqrt(dot3(h, h));
      if (std::abs(norm - 1.0) > 1e-12)
        throw InvalidParameter("bc: non-unit value at sample " + std::to_string(j) +
                               " level " + std::to_string(n));
      if (h[2] < 0.0)
        throw InvalidParameter("bc: value below the equator at sample " +
                               std::to_string(j) + " level " + std::to_string(n));
    }
  if (d0_trace) {
    for (int j = 0; j < bc.m; ++j)
      for (int c = 0; c < 3; ++c)
        if (std::abs(bc.at(j, 0)[c] - (*d0_trace)[3 * j + c]) > 1e-12)
          throw InvalidParameter("bc: row 0 incompatible with the initial trace at sample " +
                                 std::to_string(j));
  }
}

EnergyReport energy(const Grid& g, const FlowState& state, const DirectorBC& bc) {
  const int nx = g.nx(), ny = g.ny();
  const double vol = g.cell_volume();
  const int n = std::clamp(int(std::lround(state.t / g.spec.dt)), 0, bc.nlevels - 1);
  const double* trace = bc.row(n);

  EnergyReport rep;

  // kinetic: midpoint at centers with face-averaged velocity
  {
    std::vector<double> row(ny, 0.0);
#pragma omp parallel for
    for (int j = 0; j < ny; ++j) {
      double s = 0.0;
      for (int i = 0; i < nx; ++i) {
        const double ax = 0.5 * (state.u.x(i, j) + state.u.x(i + 1, j));
        const double ay = 0.5 * (state.u.y(i, j) + state.u.y(i, j + 1));
        s += ax * ax + ay * ay;
      }
      row[j] = s;
    }
    double s = 0.0;
    for (double v : row) s += v;
    rep.kinetic = 0.5 * s * vol;
  }

  // elastic: face-difference Dirichlet quadrature (gradient = 5-point stencil)
  {
    const double ix2 = 1.0 / (g.dx * g.dx), iy2 = 1.0 / (g.dy * g.dy);
    std::vector<double> row(ny, 0.0);
#pragma omp parallel for
    for (int j = 0; j < ny; ++j) {
      double s = 0.0;
      for (int i = 0; i + 1 < nx; ++i)
        for (int c = 0; c < 3; ++c) {
          const double diff = state.d(i + 1, j, c) - state.d(i, j, c);
          s += diff * diff * ix2;
        }
      const double* hl = trace + 3 * g.sample_left(j);
      const double* hr = trace + 3 * g.sample_right(j);
      for (int c = 0; c < 3; ++c) {
        const double dl = state.d(0, j, c) - hl[c];
        const double dr = state.d(nx - 1, j, c) - hr[c];
        s += 2.0 * (dl * dl + dr * dr) * ix2;
      }
      row[j] = s;
    }
    double s = 0.0;
    for (double v : row) s += v;
    std::vector<double> col(nx, 0.0);
#pragma omp parallel for
    for (int i = 0; i < nx; ++i) {
      double t = 0.0;
      for (int j = 0; j + 1 < ny; ++j)
        for (int c = 0; c < 3; ++c) {
          const double diff = state.d(i, j + 1, c) - state.d(i, j, c);
          t += diff * diff * iy2;
        }
      const double* hb = trace + 3 * g.sample_bottom(i);
      const double* ht = trace + 3 * g.sample_top(i);
      for (int c = 0; c < 3; ++c) {
        const double db = state.d(i, 0, c) - hb[c];
        const double dt_ = state.d(i, ny - 1, c) - ht[c];
        t += 2.0 * (db * db + dt_ * dt_) * iy2;
      }
      col[i] = t;
    }
    for (double v : col) s += v;
    rep.elastic = 0.5 * s * vol;
  }

  rep.total = rep.kinetic + rep.elastic;

  // dissipation: |grad u|^2 at centers (centered diffs of face-averaged u with
  // no-slip wall values) plus |lap d + |grad d|^2 d|^2 with the step stencils
  {
    ScalarField ucx(nx, ny), ucy(nx, ny);
    faces_to_centers(g, state.u, ucx, ucy);
    VectorField3 lap(nx, ny);
    laplacian_cells(g, state.d, trace, lap);
    ScalarField gsq_(nx, ny);
    gradsq(g, state.d, trace, gsq_);

    std::vector<double> row(ny, 0.0);
#pragma omp parallel for
    for (int j = 0; j < ny; ++j) {
      double s = 0.0;
      for (int i = 0; i < nx; ++i) {
        auto dcds = [&](const ScalarField& f) {
          const double c = f(i, j);
          const double e = (i + 1 < nx) ? f(i + 1, j) : -c;
          const double w = (i > 0) ? f(i - 1, j) : -c;
          const double nn = (j + 1 < ny) ? f(i, j + 1) : -c;
          const double ss = (j > 0) ? f(i, j - 1) : -c;
          const double gx = (e - w) * 0.5 / g.dx;
          const double gy = (nn - ss) * 0.5 / g.dy;
          return gx * gx + gy * gy;
        };
        s += dcds(ucx) + dcds(ucy);
        for (int c = 0; c < 3; ++c) {
          const double tens = lap(i, j, c) + gsq_(i, j) * state.d(i, j, c);
          s += tens * tens;
        }
      }
      row[j] = s;
    }
    double s = 0.0;
    for (double v : row) s += v;
    rep.dissipation = s * vol;
  }

  // boundary flux: <dd/dnu, dh/dt> with centered dh/dt inside the time grid
  {
    double s = 0.0;
    const double dt = g.spec.dt;
    for (int k = 0; k < g.m; ++k) {
      double dn[3];
      normal_derivative_d(g, state.d, trace, k, dn);
      double ht[3];
      const int nl = bc.nlevels;
      for (int c = 0; c < 3; ++c) {
        if (nl == 1) { ht[c] = 0.0; continue; }
        if (n == 0) ht[c] = (bc.at(k, 1)[c] - bc.at(k, 0)[c]) / dt;
        else if (n == nl - 1) ht[c] = (bc.at(k, n)[c] - bc.at(k, n - 1)[c]) / dt;
        else ht[c] = (bc.at(k, n + 1)[c] - bc.at(k, n - 1)[c]) / (2.0 * dt);
      }
      s += g.boundary[k].ds * (dn[0] * ht[0] + dn[1] * ht[1] + dn[2] * ht[2]);
    }
    rep.boundary_flux = s;
  }
  return rep;
}

double elastic_midpoint(const Grid& g, const VectorField3& d, const double* trace) {
  ScalarField gs(g.nx(), g.ny());
  gradsq(g, d, trace, gs);
  return 0.5 * blocked_sum(gs.data.data(), gs.size()) * g.cell_volume();
}

void normal_derivative_d(const Grid& g, const VectorField3& d,
                         const double* trace, int k, double out[3]) {
  const auto& b = g.boundary[k];
  const double* h = trace + 3 * k;
  const double* f1;
  const double* f2;
  double delta;
  switch (b.side) {
    case Side::Bottom: f1 = d.at(b.ci, 0); f2 = d.at(b.ci, 1); delta = g.dy; break;
    case Side::Top:    f1 = d.at(b.ci, g.ny() - 1); f2 = d.at(b.ci, g.ny() - 2); delta = g.dy; break;
    case Side::Left:   f1 = d.at(0, b.cj); f2 = d.at(1, b.cj); delta = g.dx; break;
    default:           f1 = d.at(g.nx() - 1, b.cj); f2 = d.at(g.nx() - 2, b.cj); delta = g.dx; break;
  }
  // inward derivative from samples at 0, delta/2, 3*delta/2; flip for outward
  for (int c = 0; c < 3; ++c)
    out[c] = -(-8.0 * h[c] + 9.0 * f1[c] - f2[c]) / (3.0 * delta);
}

double local_energy_max(const Grid& g, const FlowState& state,
                        const double* trace, double r) {
  const int nx = g.nx(), ny = g.ny();
  if (!(r > 0.0))
    throw InvalidParameter("local_energy_max: radius must be positive");

  ScalarField dens(nx, ny);
  {
    ScalarField gs(nx, ny);
    gradsq(g, state.d, trace, gs);
#pragma omp parallel for
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double ax = 0.5 * (state.u.x(i, j) + state.u.x(i + 1, j));
        const double ay = 0.5 * (state.u.y(i, j) + state.u.y(i, j + 1));
        dens(i, j) = (ax * ax + ay * ay + gs(i, j)) * g.cell_volume();
      }
  }

  // offsets of cell centers within the ball
  std::vector<std::pair<int, int>> offs;
  const int ri = int(r / g.dx) + 1, rj = int(r / g.dy) + 1;
  for (int oj = -rj; oj <= rj; ++oj)
    for (int oi = -ri; oi <= ri; ++oi) {
      const double ddx = oi * g.dx, ddy = oj * g.dy;
      if (ddx * ddx + ddy * ddy <= r * r) offs.emplace_back(oi, oj);
    }

  double best = 0.0;
#pragma omp parallel for reduction(max : best)
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double s = 0.0;
      for (const auto& [oi, oj] : offs) {
        const int ii = i + oi, jj = j + oj;
        if (ii >= 0 && ii < nx && jj >= 0 && jj < ny) s += dens(ii, jj);
      }
      if (s > best) best = s;
    }
  return best;
}

double hemisphere_min(const VectorField3& d) {
  double best = 1.0;
  for (size_t q = 0; q < d.cells(); ++q) best = std::min(best, d.data[3 * q + 2]);
  return best;
}

double unit_norm_error(const VectorField3& d) {
  double worst = 0.0;
  for (size_t q = 0; q < d.cells(); ++q) {
    const double* v = &d.data[3 * q];
    worst = std::max(worst, std::abs(std::sqrt(dot3(v, v)) - 1.0));
  }
  return worst;
}

double max_divergence(const Grid& g, const VectorField2& u) {
  ScalarField div(g.nx(), g.ny());
  divergence(g, u, div);
  double worst = 0.0;
  for (double v : div.data) worst = std::max(worst, std::abs(v));
  return worst;
}

double mean_pressure(const ScalarField& p) {
  return blocked_sum(p.data.data(), p.size()) / double(p.size());
}

}  // namespace lcf
