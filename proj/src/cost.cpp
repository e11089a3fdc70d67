#include "lcf/cost.hpp"

#include <cmath>
#include <string>

#include "lcf/errors.hpp"

namespace lcf {

void validate_weights(const CostWeights& w) {
  const double b[5] = {w.beta1, w.beta2, w.beta3, w.beta4, w.beta5};
  double sum = 0.0;
  for (double v : b) {
    if (v < 0.0) throw InvalidParameter("weights: betas must be nonnegative");
    sum += v;
  }
  if (sum == 0.0) throw InvalidParameter("weights: betas must not all vanish");
}

void validate_targets(const Grid& g, const TargetSet& t, int nsteps) {
  auto check_u = [&](const VectorField2& u, const char* name) {
    if (u.nx != g.nx() || u.ny != g.ny())
      throw InvalidParameter(std::string("targets: ") + name + " has wrong shape");
    if (max_divergence(g, u) > 1e-10)
      throw InvalidParameter(std::string("targets: ") + name + " is not divergence free");
  };
  auto check_d = [&](const VectorField3& d, const char* name) {
    if (d.nx != g.nx() || d.ny != g.ny())
      throw InvalidParameter(std::string("targets: ") + name + " has wrong shape");
    if (unit_norm_error(d) > 1e-12)
      throw InvalidParameter(std::string("targets: ") + name + " is not unit length");
  };
  if (!(t.u_qt.size() == 1 || int(t.u_qt.size()) == nsteps + 1))
    throw InvalidParameter("targets: u series must have 1 or nsteps+1 entries");
  if (!(t.d_qt.size() == 1 || int(t.d_qt.size()) == nsteps + 1))
    throw InvalidParameter("targets: d series must have 1 or nsteps+1 entries");
  for (const auto& u : t.u_qt) check_u(u, "u_qt");
  for (const auto& d : t.d_qt) check_d(d, "d_qt");
  check_u(t.u_omega, "u_omega");
  check_d(t.d_omega, "d_omega");
}

double face_inner(const Grid& g, const VectorField2& a, const VectorField2& b) {
  const int nx = g.nx(), ny = g.ny();
  double s = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) s += a.x(i, j) * b.x(i, j);
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i) s += a.y(i, j) * b.y(i, j);
  return s * g.cell_volume();
}

double cell_inner3(const Grid& g, const VectorField3& a, const VectorField3& b) {
  double s = 0.0;
  for (size_t q = 0; q < a.data.size(); ++q) s += a.data[q] * b.data[q];
  return s * g.cell_volume();
}

namespace {

double face_sq_diff(const Grid& g, const VectorField2& a, const VectorField2& b) {
  const int nx = g.nx(), ny = g.ny();
  double s = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) {
      const double v = a.x(i, j) - b.x(i, j);
      s += v * v;
    }
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double v = a.y(i, j) - b.y(i, j);
      s += v * v;
    }
  return s * g.cell_volume();
}

double cell_sq_diff(const Grid& g, const VectorField3& a, const VectorField3& b) {
  double s = 0.0;
  for (size_t q = 0; q < a.data.size(); ++q) {
    const double v = a.data[q] - b.data[q];
    s += v * v;
  }
  return s * g.cell_volume();
}

}  // namespace

CostBreakdown cost(const Trajectory& traj, const DirectorBC& h,
                   const TargetSet& targets, const CostWeights& w) {
  const Grid& g = traj.grid;
  const int N = traj.nsteps();
  const double dt = g.spec.dt;
  CostBreakdown out;

  for (int n = 0; n <= N; ++n) {
    const double wt = time_weight(n, N) * dt;
    if (w.beta1 > 0.0)
      out.term[0] += 0.5 * w.beta1 * wt * face_sq_diff(g, traj.states[n].u, targets.uqt(n));
    if (w.beta2 > 0.0)
      out.term[1] += 0.5 * w.beta2 * wt * cell_sq_diff(g, traj.states[n].d, targets.dqt(n));
  }
  if (w.beta3 > 0.0)
    out.term[2] = 0.5 * w.beta3 * face_sq_diff(g, traj.states[N].u, targets.u_omega);
  if (w.beta4 > 0.0)
    out.term[3] = 0.5 * w.beta4 * cell_sq_diff(g, traj.states[N].d, targets.d_omega);
  if (w.beta5 > 0.0) {
    double s = 0.0;
    for (int n = 0; n <= N; ++n) {
      const double wt = time_weight(n, N) * dt;
      double row = 0.0;
      for (int j = 0; j < g.m; ++j) {
        const double* hv = h.at(j, n);
        const double dx0 = hv[0], dx1 = hv[1], dx2 = hv[2] - 1.0;
        row += g.boundary[j].ds * (dx0 * dx0 + dx1 * dx1 + dx2 * dx2);
      }
      s += wt * row;
    }
    out.term[4] = 0.5 * w.beta5 * s;
  }
  out.total = out.term[0] + out.term[1] + out.term[2] + out.term[3] + out.term[4];
  return out;
}

}  // namespace lcf
