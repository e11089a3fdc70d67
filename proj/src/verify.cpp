#include "lcf/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "lcf/errors.hpp"
#include "lcf/ops.hpp"

namespace lcf::verify {

double fitted_slope(const std::vector<double>& params,
                    const std::vector<double>& errors) {
  const size_t n = params.size();
  if (n < 3 || errors.size() != n)
    throw InvalidParameter("slope fit needs at least three points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double x = std::log(params[i]);
    const double y = std::log(std::max(errors[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

TangentBoundarySection random_section(const Grid& g, const DirectorBC& h,
                                      uint64_t seed, double amp) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const int N = h.nlevels - 1;
  const double L = 2.0 * (g.spec.lx + g.spec.ly);

  // a few smooth Fourier modes along the boundary and in time
  struct Mode { double a[3]; int ks; int kt; double phase; };
  std::vector<Mode> modes(4);
  for (auto& m : modes) {
    for (double& v : m.a) v = uni(rng);
    m.ks = 1 + int(std::abs(uni(rng)) * 3);
    m.kt = 1 + int(std::abs(uni(rng)) * 2);
    m.phase = uni(rng) * M_PI;
  }

  TangentBoundarySection xi(h.m, h.nlevels);
  for (int n = 1; n <= N; ++n)
    for (int j = 0; j < h.m; ++j) {
      const double s = g.boundary[j].s;
      double v[3] = {0.0, 0.0, 0.0};
      for (const auto& m : modes) {
        const double f = std::sin(2.0 * M_PI * m.ks * s / L + m.phase) *
                         std::sin(M_PI * m.kt * double(n) / double(N));
        for (int c = 0; c < 3; ++c) v[c] += m.a[c] * f;
      }
      const double* hv = h.at(j, n);
      const double proj = v[0] * hv[0] + v[1] * hv[1] + v[2] * hv[2];
      for (int c = 0; c < 3; ++c) xi.at(j, n)[c] = amp * (v[c] - proj * hv[c]);
    }
  return xi;
}

DirectorBC perturb_exp(const DirectorBC& h, const TangentBoundarySection& xi,
                       double eps) {
  DirectorBC out(h.m, h.nlevels);
  for (int n = 0; n < h.nlevels; ++n)
    for (int j = 0; j < h.m; ++j) {
      double scaled[3];
      for (int c = 0; c < 3; ++c) scaled[c] = eps * xi.at(j, n)[c];
      sphere_exp(h.at(j, n), scaled, out.at(j, n));
    }
  return out;
}

double eval_cost(const ControlProblem& prob, const DirectorBC& h) {
  Trajectory traj = solve_forward(prob, h);
  return cost(traj, h, prob.targets, prob.weights).total;
}

double fd_directional_derivative(const ControlProblem& prob, const DirectorBC& h,
                                 const TangentBoundarySection& xi, double eps) {
  const double cp = eval_cost(prob, perturb_exp(h, xi, eps));
  const double cm = eval_cost(prob, perturb_exp(h, xi, -eps));
  return (cp - cm) / (2.0 * eps);
}

std::vector<LinearizedState> trajectory_difference(const Trajectory& a,
                                                   const Trajectory& b,
                                                   double eps) {
  std::vector<LinearizedState> out;
  out.reserve(a.states.size());
  for (size_t n = 0; n < a.states.size(); ++n) {
    LinearizedState s(a.grid.nx(), a.grid.ny());
    for (size_t q = 0; q < s.omega.ux.size(); ++q)
      s.omega.ux[q] = (a.states[n].u.ux[q] - b.states[n].u.ux[q]) / eps;
    for (size_t q = 0; q < s.omega.uy.size(); ++q)
      s.omega.uy[q] = (a.states[n].u.uy[q] - b.states[n].u.uy[q]) / eps;
    for (size_t q = 0; q < s.phi.data.size(); ++q)
      s.phi.data[q] = (a.states[n].d.data[q] - b.states[n].d.data[q]) / eps;
    for (size_t q = 0; q < s.lin_p.data.size(); ++q)
      s.lin_p.data[q] = (a.states[n].p.data[q] - b.states[n].p.data[q]) / eps;
    out.push_back(std::move(s));
  }
  return out;
}

ConvergenceReport linearization_convergence(const ControlProblem& prob,
                                            const DirectorBC& h,
                                            const TangentBoundarySection& xi,
                                            const std::vector<double>& eps_list) {
  Trajectory base = solve_forward(prob, h);
  std::vector<LinearizedState> lin = solve_linearized(base, xi);

  ConvergenceReport rep;
  for (double eps : eps_list) {
    Trajectory pert = solve_forward(prob, perturb_exp(h, xi, eps));
    std::vector<LinearizedState> diff = trajectory_difference(pert, base, eps);
    for (size_t n = 0; n < diff.size(); ++n) {
      for (size_t q = 0; q < diff[n].omega.ux.size(); ++q)
        diff[n].omega.ux[q] -= lin[n].omega.ux[q];
      for (size_t q = 0; q < diff[n].omega.uy.size(); ++q)
        diff[n].omega.uy[q] -= lin[n].omega.uy[q];
      for (size_t q = 0; q < diff[n].phi.data.size(); ++q)
        diff[n].phi.data[q] -= lin[n].phi.data[q];
    }
    rep.params.push_back(eps);
    rep.errors.push_back(w_norm(base, diff));
  }
  rep.slope = fitted_slope(rep.params, rep.errors);
  return rep;
}

double duality_check(const ControlProblem& prob, const DirectorBC& h,
                     int n_directions, uint64_t seed, LinMode mode) {
  Trajectory traj = solve_forward(prob, h);
  AdjointState adj = solve_adjoint(traj, prob.targets, prob.weights, mode);
  double worst = 0.0;
  for (int k = 0; k < n_directions; ++k) {
    TangentBoundarySection xi = random_section(traj.grid, h, seed + k, 0.5);
    std::vector<LinearizedState> lin = solve_linearized(traj, xi, mode);
    const double lhs =
        cost_derivative_via_tangent(lin, traj, prob.targets, prob.weights, xi);
    const double rhs = gradient_pairing(h, xi, adj, traj, prob.weights);
    const double gap = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
    worst = std::max(worst, gap);
  }
  return worst;
}

std::string InvariantReport::summary() const {
  std::ostringstream os;
  os << "unit-norm        " << (unit_ok ? "pass" : "FAIL")
     << "  max | |d|-1 | = " << max_unit_error << "\n";
  os << "divergence       " << (div_ok ? "pass" : "FAIL")
     << "  max |div u|   = " << max_divergence << "\n";
  if (hemisphere_applicable)
    os << "hemisphere       " << (hemisphere_ok ? "pass" : "FAIL")
       << "  min d3        = " << min_d3 << "\n";
  else
    os << "hemisphere       n/a (data leaves the upper hemisphere)\n";
  os << "balance residual max |r| = " << max_balance_residual
     << ", max positive part = " << max_positive_residual << "\n";
  return os.str();
}

InvariantReport invariant_suite(const Trajectory& traj) {
  InvariantReport rep;
  rep.min_d3 = 1.0;
  for (const FlowState& s : traj.states) {
    rep.max_unit_error = std::max(rep.max_unit_error, unit_norm_error(s.d));
    rep.max_divergence = std::max(rep.max_divergence, max_divergence(traj.grid, s.u));
    rep.min_d3 = std::min(rep.min_d3, hemisphere_min(s.d));
  }
  double bc_min = 1.0;
  for (int n = 0; n < traj.bc.nlevels; ++n)
    for (int j = 0; j < traj.bc.m; ++j)
      bc_min = std::min(bc_min, traj.bc.at(j, n)[2]);
  rep.hemisphere_applicable =
      hemisphere_min(traj.states.front().d) >= 0.0 && bc_min >= 0.0;

  for (double r : energy_balance_series(traj)) {
    rep.max_balance_residual = std::max(rep.max_balance_residual, std::abs(r));
    rep.max_positive_residual = std::max(rep.max_positive_residual, r);
  }
  rep.unit_ok = rep.max_unit_error <= 1e-12;
  rep.div_ok = rep.max_divergence <= 1e-10;
  rep.hemisphere_ok = !rep.hemisphere_applicable || rep.min_d3 >= -1e-8;
  return rep;
}

WindowReport ladyzhenskaya_report(const Grid& g, const VectorField3& f,
                                  const double* trace, double r) {
  WindowReport rep;
  const double vol = g.cell_volume();
  const int nx = g.nx(), ny = g.ny();

  ScalarField f2(nx, ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double* v = f.at(i, j);
      f2(i, j) = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    }
  for (double v : f2.data) rep.lhs += v * v * vol;

  ScalarField gs(nx, ny);
  gradsq(g, f, trace, gs);
  double grad2 = 0.0, mass2 = 0.0;
  for (double v : gs.data) grad2 += v * vol;
  for (double v : f2.data) mass2 += v * vol;
  rep.rhs = grad2 + mass2 / (r * r);

  // windowed sup of the |f|^2 mass
  std::vector<std::pair<int, int>> offs;
  const int ri = int(r / g.dx) + 1, rj = int(r / g.dy) + 1;
  for (int oj = -rj; oj <= rj; ++oj)
    for (int oi = -ri; oi <= ri; ++oi)
      if (oi * g.dx * oi * g.dx + oj * g.dy * oj * g.dy <= r * r)
        offs.emplace_back(oi, oj);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double s = 0.0;
      for (auto [oi, oj] : offs) {
        const int ii = i + oi, jj = j + oj;
        if (ii >= 0 && ii < nx && jj >= 0 && jj < ny) s += f2(ii, jj) * vol;
      }
      rep.sup_window = std::max(rep.sup_window, s);
    }
  const double denom = rep.sup_window * rep.rhs;
  rep.ratio = (denom > 0.0) ? rep.lhs / denom : 0.0;
  return rep;
}

std::vector<PressureReportRow> pressure_estimate_report(const Trajectory& traj) {
  const Grid& g = traj.grid;
  const int nx = g.nx(), ny = g.ny();
  const double vol = g.cell_volume();
  std::vector<PressureReportRow> rows;

  for (int n = 1; n <= traj.nsteps(); ++n) {
    const FlowState& s = traj.states[n];
    PressureReportRow row;
    row.t = s.t;

    VectorField2 gp(nx, ny);
    gradient_faces(g, s.p, gp);
    double acc = 0.0;
    for (double v : gp.ux) acc += std::pow(std::abs(v), 4.0 / 3.0) * vol;
    for (double v : gp.uy) acc += std::pow(std::abs(v), 4.0 / 3.0) * vol;
    row.lhs = std::pow(acc, 0.75);

    ScalarField ucx(nx, ny), ucy(nx, ny);
    faces_to_centers(g, s.u, ucx, ucy);
    double u4 = 0.0, gu2 = 0.0;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double m2 = ucx(i, j) * ucx(i, j) + ucy(i, j) * ucy(i, j);
        u4 += m2 * m2 * vol;
        auto dsq = [&](const ScalarField& f) {
          const double c = f(i, j);
          const double e = (i + 1 < nx) ? f(i + 1, j) : -c;
          const double w = (i > 0) ? f(i - 1, j) : -c;
          const double nn = (j + 1 < ny) ? f(i, j + 1) : -c;
          const double ss = (j > 0) ? f(i, j - 1) : -c;
          const double gx = (e - w) * 0.5 / g.dx;
          const double gy = (nn - ss) * 0.5 / g.dy;
          return gx * gx + gy * gy;
        };
        gu2 += (dsq(ucx) + dsq(ucy)) * vol;
      }

    const double* trace = traj.bc.row(n);
    ScalarField gs(nx, ny);
    gradsq(g, s.d, trace, gs);
    VectorField3 lap(nx, ny);
    laplacian_cells(g, s.d, trace, lap);
    double gd4 = 0.0, dd2 = 0.0;
    for (double v : gs.data) gd4 += v * v * vol;
    for (double v : lap.data) dd2 += v * v * vol;

    row.rhs = std::sqrt(std::sqrt(u4)) * std::sqrt(gu2) +
              std::sqrt(std::sqrt(gd4)) * std::sqrt(dd2);
    row.ratio = (row.rhs > 0.0) ? row.lhs / row.rhs : 0.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lcf::verify
