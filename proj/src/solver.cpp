#include "lcf/solver.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "lcf/errors.hpp"
#include "lcf/ops.hpp"

namespace lcf {

// Fixed-size blocks with a serial final pass keep the summation order
// independent of the OpenMP schedule, so solver iterates are reproducible.
double blocked_sum(const double* x, size_t n) {
  constexpr size_t B = 1024;
  const size_t nb = (n + B - 1) / B;
  std::vector<double> partial(nb, 0.0);
#pragma omp parallel for
  for (size_t b = 0; b < nb; ++b) {
    double s = 0.0;
    const size_t hi = std::min(n, (b + 1) * B);
    for (size_t q = b * B; q < hi; ++q) s += x[q];
    partial[b] = s;
  }
  double s = 0.0;
  for (size_t b = 0; b < nb; ++b) s += partial[b];
  return s;
}

double blocked_dot(const double* a, const double* b, size_t n) {
  constexpr size_t B = 1024;
  const size_t nb = (n + B - 1) / B;
  std::vector<double> partial(nb, 0.0);
#pragma omp parallel for
  for (size_t blk = 0; blk < nb; ++blk) {
    double s = 0.0;
    const size_t hi = std::min(n, (blk + 1) * B);
    for (size_t q = blk * B; q < hi; ++q) s += a[q] * b[q];
    partial[blk] = s;
  }
  double s = 0.0;
  for (size_t blk = 0; blk < nb; ++blk) s += partial[blk];
  return s;
}

namespace {

void subtract_mean(std::vector<double>& v) {
  const double mean = blocked_sum(v.data(), v.size()) / double(v.size());
#pragma omp parallel for
  for (size_t q = 0; q < v.size(); ++q) v[q] -= mean;
}

}  // namespace

ScalarField poisson_solve_meanzero(const Grid& g, const ScalarField& rhs,
                                   const CgOptions& opt) {
  const size_t n = rhs.size();
  ScalarField x(g.nx(), g.ny());
  std::vector<double> r = rhs.data;
  // solve -L x = -rhs on the mean-zero subspace (SPD there)
  for (auto& v : r) v = -v;
  subtract_mean(r);

  const double bnorm = std::sqrt(blocked_dot(r.data(), r.data(), n));
  const double target = std::max(opt.rtol * bnorm, opt.atol);
  if (bnorm <= opt.atol) return x;

  ScalarField p(g.nx(), g.ny()), Ap(g.nx(), g.ny());
  p.data = r;
  double rr = blocked_dot(r.data(), r.data(), n);
  const int maxit = opt.max_iters > 0 ? opt.max_iters : int(20 * std::sqrt(double(n)) + 200);
  double resid = bnorm;
  for (int it = 0; it < maxit; ++it) {
    poisson_apply(g, p, Ap);
#pragma omp parallel for
    for (size_t q = 0; q < n; ++q) Ap.data[q] = -Ap.data[q];
    const double pAp = blocked_dot(p.data.data(), Ap.data.data(), n);
    const double alpha = rr / pAp;
#pragma omp parallel for
    for (size_t q = 0; q < n; ++q) {
      x.data[q] += alpha * p.data[q];
      r[q] -= alpha * Ap.data[q];
    }
    if ((it + 1) % 64 == 0) subtract_mean(r);  // drift control on the gauge
    const double rr_new = blocked_dot(r.data(), r.data(), n);
    resid = std::sqrt(rr_new);
    if (resid <= target) {
      subtract_mean(x.data);
      return x;
    }
    const double beta = rr_new / rr;
    rr = rr_new;
#pragma omp parallel for
    for (size_t q = 0; q < n; ++q) p.data[q] = r[q] + beta * p.data[q];
  }
  throw SolverError("poisson: CG failed to reach tolerance, residual=" +
                        std::to_string(resid),
                    resid);
}

namespace {

// Flatten the interior faces of a VectorField2 into one residual vector for
// the Helmholtz CG; boundary-normal faces are excluded unknowns (value 0).
struct FacePack {
  const Grid* g;
  size_t nxf, nyf;  // counts of interior x- and y-face unknowns
  size_t size() const { return nxf + nyf; }

  explicit FacePack(const Grid& grid) : g(&grid) {
    nxf = size_t(grid.nx() - 1) * grid.ny();
    nyf = size_t(grid.nx()) * (grid.ny() - 1);
  }
  void gather(const VectorField2& u, std::vector<double>& v) const {
    const int nx = g->nx(), ny = g->ny();
    size_t q = 0;
    for (int j = 0; j < ny; ++j)
      for (int i = 1; i < nx; ++i) v[q++] = u.x(i, j);
    for (int j = 1; j < ny; ++j)
      for (int i = 0; i < nx; ++i) v[q++] = u.y(i, j);
  }
  void scatter(const std::vector<double>& v, VectorField2& u) const {
    const int nx = g->nx(), ny = g->ny();
    size_t q = 0;
    for (int j = 0; j < ny; ++j)
      for (int i = 1; i < nx; ++i) u.x(i, j) = v[q++];
    for (int j = 1; j < ny; ++j)
      for (int i = 0; i < nx; ++i) u.y(i, j) = v[q++];
  }
};

}  // namespace

VectorField2 helmholtz_solve(const Grid& g, double alpha, const VectorField2& b,
                             const CgOptions& opt) {
  const FacePack pack(g);
  const size_t n = pack.size();
  std::vector<double> rv(n), xv(n, 0.0), pv(n), apv(n);
  pack.gather(b, rv);

  const double bnorm = std::sqrt(blocked_dot(rv.data(), rv.data(), n));
  VectorField2 x(g.nx(), g.ny());
  const double target = std::max(opt.rtol * bnorm, opt.atol);
  if (bnorm <= opt.atol) return x;

  pv = rv;
  double rr = blocked_dot(rv.data(), rv.data(), n);
  VectorField2 pfield(g.nx(), g.ny()), ap(g.nx(), g.ny());
  const int maxit = opt.max_iters > 0 ? opt.max_iters : int(10 * std::sqrt(double(n)) + 200);
  double resid = bnorm;
  for (int it = 0; it < maxit; ++it) {
    pack.scatter(pv, pfield);
    helmholtz_apply(g, alpha, pfield, ap);
    pack.gather(ap, apv);
    const double pAp = blocked_dot(pv.data(), apv.data(), n);
    const double step = rr / pAp;
#pragma omp parallel for
    for (size_t q = 0; q < n; ++q) {
      xv[q] += step * pv[q];
      rv[q] -= step * apv[q];
    }
    const double rr_new = blocked_dot(rv.data(), rv.data(), n);
    resid = std::sqrt(rr_new);
    if (resid <= target) {
      pack.scatter(xv, x);
      return x;
    }
    const double beta = rr_new / rr;
    rr = rr_new;
#pragma omp parallel for
    for (size_t q = 0; q < n; ++q) pv[q] = rv[q] + beta * pv[q];
  }
  throw SolverError("helmholtz: CG failed to reach tolerance, residual=" +
                        std::to_string(resid),
                    resid);
}

ProjectionResult pressure_projection(const Grid& g, const VectorField2& ustar,
                                     double dt, const CgOptions& opt) {
  ScalarField div(g.nx(), g.ny());
  divergence(g, ustar, div);
#pragma omp parallel for
  for (size_t q = 0; q < div.size(); ++q) div.data[q] /= dt;

  ProjectionResult res{VectorField2(g.nx(), g.ny()), poisson_solve_meanzero(g, div, opt)};
  VectorField2 gp(g.nx(), g.ny());
  gradient_faces(g, res.p, gp);
  res.u = ustar;
#pragma omp parallel for
  for (size_t q = 0; q < res.u.ux.size(); ++q) res.u.ux[q] -= dt * gp.ux[q];
#pragma omp parallel for
  for (size_t q = 0; q < res.u.uy.size(); ++q) res.u.uy[q] -= dt * gp.uy[q];
  return res;
}

}  // namespace lcf
