#include <cmath>

#include "lcf/verify.hpp"

// Manufactured space-time solution exercising every term of the coupled
// system. The velocity comes from a polynomial stream function with double
// zeros on the walls (no-slip and exactly divergence free), the pressure is a
// Neumann-compatible cosine product, and the director is the chart image of a
// trigonometric disk field, so it is unit length by construction. Sources are
// obtained by substituting the exact fields into the equations with all
// derivatives written out analytically.

namespace lcf::verify {

namespace {

constexpr double kStreamAmp = 8.0;
constexpr double kPressAmp = 0.05;
constexpr double kChartAmp = 0.25;
constexpr double kOmega = 40.0;

// quartic bump and derivatives
inline double P0(double s) { const double t = s * (1.0 - s); return t * t; }
inline double P1(double s) { return 2.0 * s - 6.0 * s * s + 4.0 * s * s * s; }
inline double P2(double s) { return 2.0 - 12.0 * s + 12.0 * s * s; }
inline double P3(double s) { return -12.0 + 24.0 * s; }

inline double tau(double t) { return 1.0 + 0.5 * std::sin(kOmega * t); }
inline double tau_t(double t) { return 0.5 * kOmega * std::cos(kOmega * t); }
inline double sig(double t) { return 1.0 + 0.3 * std::cos(kOmega * t); }

struct Vel {
  double u1, u2;        // components
  double u1t, u2t;      // time derivatives
  double u1x, u1y, u2x, u2y;
  double lap1, lap2;
};

Vel velocity_at(double x, double y, double t) {
  const double T = tau(t), Tt = tau_t(t);
  Vel v;
  v.u1 = kStreamAmp * P0(x) * P1(y) * T;
  v.u2 = -kStreamAmp * P1(x) * P0(y) * T;
  v.u1t = kStreamAmp * P0(x) * P1(y) * Tt;
  v.u2t = -kStreamAmp * P1(x) * P0(y) * Tt;
  v.u1x = kStreamAmp * P1(x) * P1(y) * T;
  v.u1y = kStreamAmp * P0(x) * P2(y) * T;
  v.u2x = -kStreamAmp * P2(x) * P0(y) * T;
  v.u2y = -kStreamAmp * P1(x) * P1(y) * T;
  v.lap1 = kStreamAmp * (P2(x) * P1(y) + P0(x) * P3(y)) * T;
  v.lap2 = -kStreamAmp * (P3(x) * P0(y) + P1(x) * P2(y)) * T;
  return v;
}

struct Chart {
  double z[2], zt[2], zx[2], zy[2], zxx[2], zyy[2], zxy[2];
};

Chart chart_at(double x, double y, double t) {
  const double sx = std::sin(M_PI * x), cx = std::cos(M_PI * x);
  const double sy = std::sin(M_PI * y), cy = std::cos(M_PI * y);
  const double g1 = 1.0 + 0.4 * std::sin(kOmega * t);
  const double g2 = 0.6 * (1.0 + 0.4 * std::cos(kOmega * t));
  const double g1t = 0.4 * kOmega * std::cos(kOmega * t);
  const double g2t = -0.24 * kOmega * std::sin(kOmega * t);
  const double base = kChartAmp * sx * sy;
  Chart c;
  c.z[0] = base * g1;
  c.z[1] = base * g2;
  c.zt[0] = base * g1t;
  c.zt[1] = base * g2t;
  const double bx = kChartAmp * M_PI * cx * sy;
  const double by = kChartAmp * M_PI * sx * cy;
  const double bxx = -M_PI * M_PI * base;
  const double bxy = kChartAmp * M_PI * M_PI * cx * cy;
  for (int k = 0; k < 2; ++k) {
    const double gk = (k == 0) ? g1 : g2;
    c.zx[k] = bx * gk;
    c.zy[k] = by * gk;
    c.zxx[k] = bxx * gk;
    c.zyy[k] = bxx * gk;
    c.zxy[k] = bxy * gk;
  }
  return c;
}

// Jacobian and Hessian of the inverse chart at z.
void inverse_chart_derivatives(const double z[2], double h[3], double J[3][2],
                               double H[3][2][2]) {
  const double s = z[0] * z[0] + z[1] * z[1];
  const double D = 1.0 + s;
  h[0] = 2.0 * z[0] / D;
  h[1] = 2.0 * z[1] / D;
  h[2] = (1.0 - s) / D;
  for (int i = 0; i < 2; ++i)
    for (int b = 0; b < 2; ++b)
      J[i][b] = (2.0 / D) * ((i == b ? 1.0 : 0.0) - 2.0 * z[i] * z[b] / D);
  J[2][0] = -4.0 * z[0] / (D * D);
  J[2][1] = -4.0 * z[1] / (D * D);
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const double dia = (i == a) ? 1.0 : 0.0;
        const double dib = (i == b) ? 1.0 : 0.0;
        const double dab = (a == b) ? 1.0 : 0.0;
        H[i][a][b] = -4.0 * (dia * z[b] + dib * z[a] + dab * z[i]) / (D * D) +
                     16.0 * z[i] * z[a] * z[b] / (D * D * D);
      }
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      H[2][a][b] = -4.0 * ((a == b) ? 1.0 : 0.0) / (D * D) +
                   16.0 * z[a] * z[b] / (D * D * D);
}

struct Dir {
  double d[3], dt[3], dx[3], dy[3], dxx[3], dyy[3], dxy[3];
  double lap[3], gsq;
};

Dir director_at(double x, double y, double t) {
  const Chart c = chart_at(x, y, t);
  double J[3][2], H[3][2][2];
  Dir out;
  inverse_chart_derivatives(c.z, out.d, J, H);

  auto push = [&](const double v[2], double res[3]) {
    for (int r = 0; r < 3; ++r) res[r] = J[r][0] * v[0] + J[r][1] * v[1];
  };
  push(c.zt, out.dt);
  push(c.zx, out.dx);
  push(c.zy, out.dy);

  auto second = [&](const double a[2], const double b[2], const double lin[2],
                    double res[3]) {
    for (int r = 0; r < 3; ++r) {
      double acc = J[r][0] * lin[0] + J[r][1] * lin[1];
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) acc += H[r][p][q] * a[p] * b[q];
      res[r] = acc;
    }
  };
  second(c.zx, c.zx, c.zxx, out.dxx);
  second(c.zy, c.zy, c.zyy, out.dyy);
  second(c.zx, c.zy, c.zxy, out.dxy);
  for (int r = 0; r < 3; ++r) out.lap[r] = out.dxx[r] + out.dyy[r];
  out.gsq = 0.0;
  for (int r = 0; r < 3; ++r)
    out.gsq += out.dx[r] * out.dx[r] + out.dy[r] * out.dy[r];
  return out;
}

double press_x(double x, double y, double t) {
  return -kPressAmp * M_PI * std::sin(M_PI * x) * std::cos(M_PI * y) * sig(t);
}
double press_y(double x, double y, double t) {
  return -kPressAmp * M_PI * std::cos(M_PI * x) * std::sin(M_PI * y) * sig(t);
}

double momentum_source(double x, double y, double t, int comp, const GridSpec& spec) {
  const Vel v = velocity_at(x, y, t);
  const Dir d = director_at(x, y, t);

  // div(grad d (x) grad d) = <lap d, grad_j d> + 0.5 d/dj |grad d|^2
  double lap_dot_dx = 0.0, lap_dot_dy = 0.0;
  double gsq_x = 0.0, gsq_y = 0.0;
  for (int r = 0; r < 3; ++r) {
    lap_dot_dx += d.lap[r] * d.dx[r];
    lap_dot_dy += d.lap[r] * d.dy[r];
    gsq_x += 2.0 * (d.dx[r] * d.dxx[r] + d.dy[r] * d.dxy[r]);
    gsq_y += 2.0 * (d.dx[r] * d.dxy[r] + d.dy[r] * d.dyy[r]);
  }
  if (comp == 0)
    return v.u1t + v.u1 * v.u1x + v.u2 * v.u1y - spec.nu * v.lap1 +
           press_x(x, y, t) + spec.lambda * (lap_dot_dx + 0.5 * gsq_x);
  return v.u2t + v.u1 * v.u2x + v.u2 * v.u2y - spec.nu * v.lap2 +
         press_y(x, y, t) + spec.lambda * (lap_dot_dy + 0.5 * gsq_y);
}

void director_source(double x, double y, double t, const GridSpec& spec,
                     double out[3]) {
  const Vel v = velocity_at(x, y, t);
  const Dir d = director_at(x, y, t);
  for (int r = 0; r < 3; ++r)
    out[r] = d.dt[r] + v.u1 * d.dx[r] + v.u2 * d.dy[r] -
             spec.mu * (d.lap[r] + d.gsq * d.d[r]);
}

}  // namespace

void manufactured_exact(const Grid& g, double t, VectorField2& u,
                        VectorField3& d) {
  const int nx = g.nx(), ny = g.ny();
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i <= nx; ++i)
      u.x(i, j) = velocity_at(i * g.dx, g.cy(j), t).u1;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i)
      u.y(i, j) = velocity_at(g.cx(i), j * g.dy, t).u2;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Dir dd = director_at(g.cx(i), g.cy(j), t);
      for (int c = 0; c < 3; ++c) d(i, j, c) = dd.d[c];
    }
}

DirectorBC manufactured_bc(const Grid& g, int nsteps) {
  DirectorBC bc(g.m, nsteps + 1);
  for (int n = 0; n <= nsteps; ++n)
    for (int k = 0; k < g.m; ++k) {
      const Dir dd = director_at(g.boundary[k].px, g.boundary[k].py,
                                 n * g.spec.dt);
      for (int c = 0; c < 3; ++c) bc.at(k, n)[c] = dd.d[c];
    }
  return bc;
}

ControlProblem manufactured_problem(int n, double t_end) {
  ControlProblem prob;
  prob.spec.nx = prob.spec.ny = n;
  const double dx = 1.0 / n;
  const double dt_cap = 0.5 * prob.spec.cfl * dx * dx;
  const int nsteps = std::max(1, int(std::ceil(t_end / dt_cap)));
  prob.spec.nsteps = nsteps;
  prob.spec.dt = t_end / nsteps;

  Grid g = build_grid(prob.spec);
  prob.u0 = VectorField2(n, n);
  prob.d0 = VectorField3(n, n);

  // initial velocity from the stream function differenced at grid nodes, so
  // the discrete divergence vanishes exactly
  std::vector<double> psi(size_t(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      psi[size_t(j) * (n + 1) + i] =
          kStreamAmp * P0(i * g.dx) * P0(j * g.dy) * tau(0.0);
  for (int j = 0; j < n; ++j)
    for (int i = 1; i < n; ++i)
      prob.u0.x(i, j) =
          (psi[size_t(j + 1) * (n + 1) + i] - psi[size_t(j) * (n + 1) + i]) / g.dy;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < n; ++i)
      prob.u0.y(i, j) =
          -(psi[size_t(j) * (n + 1) + i + 1] - psi[size_t(j) * (n + 1) + i]) / g.dx;

  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Dir dd = director_at(g.cx(i), g.cy(j), 0.0);
      for (int c = 0; c < 3; ++c) prob.d0(i, j, c) = dd.d[c];
    }
  prob.d0_trace.assign(size_t(g.m) * 3, 0.0);
  for (int k = 0; k < g.m; ++k) {
    const Dir dd = director_at(g.boundary[k].px, g.boundary[k].py, 0.0);
    for (int c = 0; c < 3; ++c) prob.d0_trace[3 * k + c] = dd.d[c];
  }

  const GridSpec spec = prob.spec;
  prob.forcing.f_u = [spec](const Grid& gg, double t) {
    VectorField2 f(gg.nx(), gg.ny());
    for (int j = 0; j < gg.ny(); ++j)
      for (int i = 1; i < gg.nx(); ++i)
        f.x(i, j) = momentum_source(i * gg.dx, gg.cy(j), t, 0, spec);
    for (int j = 1; j < gg.ny(); ++j)
      for (int i = 0; i < gg.nx(); ++i)
        f.y(i, j) = momentum_source(gg.cx(i), j * gg.dy, t, 1, spec);
    return f;
  };
  prob.forcing.f_d = [spec](const Grid& gg, double t) {
    VectorField3 f(gg.nx(), gg.ny());
    for (int j = 0; j < gg.ny(); ++j)
      for (int i = 0; i < gg.nx(); ++i) {
        double src[3];
        director_source(gg.cx(i), gg.cy(j), t, spec, src);
        for (int c = 0; c < 3; ++c) f(i, j, c) = src[c];
      }
    return f;
  };

  // targets are irrelevant for the convergence study; keep them trivial
  prob.targets.u_qt.assign(1, VectorField2(n, n));
  VectorField3 pole(n, n);
  for (size_t q = 0; q < pole.cells(); ++q) pole.data[3 * q + 2] = 1.0;
  prob.targets.d_qt.assign(1, pole);
  prob.targets.u_omega = VectorField2(n, n);
  prob.targets.d_omega = pole;
  prob.weights.beta2 = 1.0;
  return prob;
}

ManufacturedReport manufactured_suite(const std::vector<int>& levels,
                                      double t_end) {
  ManufacturedReport rep;
  for (int n : levels) {
    ControlProblem prob = manufactured_problem(n, t_end);
    Grid g = build_grid(prob.spec);
    DirectorBC bc = manufactured_bc(g, prob.spec.nsteps);
    Trajectory traj = simulate(g, prob.u0, prob.d0, bc, prob.forcing, prob.opts,
                               &prob.d0_trace);

    double eu2 = 0.0, ed2 = 0.0;
    VectorField2 uex(n, n);
    VectorField3 dex(n, n);
    for (int lvl = 0; lvl <= prob.spec.nsteps; ++lvl) {
      manufactured_exact(g, lvl * prob.spec.dt, uex, dex);
      const double wt = time_weight(lvl, prob.spec.nsteps) * prob.spec.dt;
      double su = 0.0;
      for (int j = 0; j < n; ++j)
        for (int i = 1; i < n; ++i) {
          const double v = traj.states[lvl].u.x(i, j) - uex.x(i, j);
          su += v * v;
        }
      for (int j = 1; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const double v = traj.states[lvl].u.y(i, j) - uex.y(i, j);
          su += v * v;
        }
      double sd = 0.0;
      for (size_t q = 0; q < dex.data.size(); ++q) {
        const double v = traj.states[lvl].d.data[q] - dex.data[q];
        sd += v * v;
      }
      eu2 += wt * su * g.cell_volume();
      ed2 += wt * sd * g.cell_volume();
    }
    rep.u.params.push_back(prob.spec.dt);
    rep.u.errors.push_back(std::sqrt(eu2));
    rep.d.params.push_back(prob.spec.dt);
    rep.d.errors.push_back(std::sqrt(ed2));
  }
  rep.u.slope = fitted_slope(rep.u.params, rep.u.errors);
  rep.d.slope = fitted_slope(rep.d.params, rep.d.errors);
  return rep;
}

}  // namespace lcf::verify