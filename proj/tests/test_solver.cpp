#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "lcf/ops.hpp"
#include "lcf/solver.hpp"

using namespace lcf;

namespace {

Grid make_grid(int n) {
  GridSpec s;
  s.nx = s.ny = n;
  s.dt = 0.5 * s.cfl / (n * n);
  return build_grid(s);
}

std::mt19937_64 rng(77);

VectorField2 random_interior_faces(const Grid& g) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VectorField2 w(g.nx(), g.ny());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i) w.x(i, j) = u(rng);
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) w.y(i, j) = u(rng);
  return w;
}

}  // namespace

TEST_CASE("poisson solve reproduces a manufactured mean-zero field") {
  Grid g = make_grid(24);
  ScalarField p_exact(g.nx(), g.ny());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      p_exact(i, j) = std::cos(M_PI * g.cx(i)) * std::cos(2.0 * M_PI * g.cy(j));
  const double mean = blocked_sum(p_exact.data.data(), p_exact.size()) / p_exact.size();
  for (auto& v : p_exact.data) v -= mean;

  ScalarField rhs(g.nx(), g.ny());
  poisson_apply(g, p_exact, rhs);
  ScalarField p = poisson_solve_meanzero(g, rhs);
  for (size_t q = 0; q < p.size(); ++q)
    CHECK(p.data[q] == doctest::Approx(p_exact.data[q]).epsilon(1e-9));
}

TEST_CASE("helmholtz solve matches a manufactured field") {
  Grid g = make_grid(16);
  const double alpha = 3e-4;
  VectorField2 u_exact = random_interior_faces(g);
  VectorField2 b(g.nx(), g.ny());
  helmholtz_apply(g, alpha, u_exact, b);
  VectorField2 u = helmholtz_solve(g, alpha, b);
  for (size_t q = 0; q < u.ux.size(); ++q)
    CHECK(u.ux[q] == doctest::Approx(u_exact.ux[q]).epsilon(1e-10));
  for (size_t q = 0; q < u.uy.size(); ++q)
    CHECK(u.uy[q] == doctest::Approx(u_exact.uy[q]).epsilon(1e-10));
}

TEST_CASE("projection fixes divergence-free fields") {
  Grid g = make_grid(16);
  // stream-function velocity: discretely divergence free on the staggered grid
  const int nx = g.nx(), ny = g.ny();
  std::vector<double> psi(size_t(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      psi[size_t(j) * (nx + 1) + i] =
          std::sin(M_PI * i * g.dx) * std::sin(M_PI * j * g.dy);
  VectorField2 u(nx, ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i)
      u.x(i, j) = (psi[size_t(j + 1) * (nx + 1) + i] - psi[size_t(j) * (nx + 1) + i]) / g.dy;
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      u.y(i, j) = -(psi[size_t(j) * (nx + 1) + i + 1] - psi[size_t(j) * (nx + 1) + i]) / g.dx;

  ScalarField div(nx, ny);
  divergence(g, u, div);
  for (double v : div.data) CHECK(std::abs(v) < 1e-12);

  const double dt = g.spec.dt;
  ProjectionResult res = pressure_projection(g, u, dt);
  for (size_t q = 0; q < u.ux.size(); ++q)
    CHECK(res.u.ux[q] == doctest::Approx(u.ux[q]).epsilon(1e-10));
  for (double v : res.p.data) CHECK(std::abs(v) < 1e-8);
}

TEST_CASE("projection of a pure gradient returns zero velocity") {
  Grid g = make_grid(16);
  ScalarField phi(g.nx(), g.ny());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      phi(i, j) = std::cos(M_PI * g.cx(i)) * std::cos(M_PI * g.cy(j));
  const double mean = blocked_sum(phi.data.data(), phi.size()) / phi.size();
  for (auto& v : phi.data) v -= mean;

  VectorField2 grad(g.nx(), g.ny());
  gradient_faces(g, phi, grad);
  const double dt = g.spec.dt;
  ProjectionResult res = pressure_projection(g, grad, dt);
  for (double v : res.u.ux) CHECK(std::abs(v) < 1e-10);
  for (double v : res.u.uy) CHECK(std::abs(v) < 1e-10);
  for (size_t q = 0; q < phi.size(); ++q)
    CHECK(res.p.data[q] * dt == doctest::Approx(phi.data[q]).epsilon(1e-8));
}

TEST_CASE("projection is idempotent") {
  Grid g = make_grid(12);
  VectorField2 u = random_interior_faces(g);
  const double dt = g.spec.dt;
  ProjectionResult once = pressure_projection(g, u, dt);
  ProjectionResult twice = pressure_projection(g, once.u, dt);
  double drift = 0.0;
  for (size_t q = 0; q < u.ux.size(); ++q)
    drift = std::max(drift, std::abs(twice.u.ux[q] - once.u.ux[q]));
  for (size_t q = 0; q < u.uy.size(); ++q)
    drift = std::max(drift, std::abs(twice.u.uy[q] - once.u.uy[q]));
  CHECK(drift < 1e-10);
}

TEST_CASE("projection is self-adjoint on the face inner product") {
  Grid g = make_grid(10);
  VectorField2 a = random_interior_faces(g), b = random_interior_faces(g);
  const double dt = g.spec.dt;
  VectorField2 Pa = pressure_projection(g, a, dt).u;
  VectorField2 Pb = pressure_projection(g, b, dt).u;
  double lhs = 0.0, rhs = 0.0;
  for (size_t q = 0; q < a.ux.size(); ++q) {
    lhs += Pa.ux[q] * b.ux[q];
    rhs += a.ux[q] * Pb.ux[q];
  }
  for (size_t q = 0; q < a.uy.size(); ++q) {
    lhs += Pa.uy[q] * b.uy[q];
    rhs += a.uy[q] * Pb.uy[q];
  }
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("blocked reductions are reproducible") {
  std::vector<double> x(100001);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& v : x) v = u(rng);
  const double s1 = blocked_sum(x.data(), x.size());
  const double s2 = blocked_sum(x.data(), x.size());
  CHECK(s1 == s2);
}
