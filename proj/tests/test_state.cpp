#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "lcf/errors.hpp"
#include "lcf/presets.hpp"
#include "lcf/ref.hpp"
#include "lcf/state.hpp"

using namespace lcf;

namespace {

Grid make_grid(int n) {
  GridSpec s;
  s.nx = s.ny = n;
  s.dt = 0.5 * s.cfl / (n * n);
  return build_grid(s);
}

std::mt19937_64 rng(314159);

}  // namespace

TEST_CASE("renormalize scales and guards") {
  Grid g = make_grid(6);
  VectorField3 d(g.nx(), g.ny()), out(g.nx(), g.ny());

  SUBCASE("(0,0,2) maps to the pole") {
    for (size_t q = 0; q < d.cells(); ++q) d.data[3 * q + 2] = 2.0;
    renormalize_director(d, out);
    for (size_t q = 0; q < d.cells(); ++q) {
      CHECK(out.data[3 * q + 2] == 1.0);
      CHECK(out.data[3 * q] == 0.0);
    }
  }
  SUBCASE("idempotent on unit fields") {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (size_t q = 0; q < d.cells(); ++q) {
      double v[3] = {u(rng), u(rng), 1.0 + std::abs(u(rng))};
      const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
      for (int c = 0; c < 3; ++c) d.data[3 * q + c] = v[c] / n;
    }
    renormalize_director(d, out);
    VectorField3 out2(g.nx(), g.ny());
    renormalize_director(out, out2);
    for (size_t q = 0; q < d.data.size(); ++q) {
      CHECK(std::abs(out.data[q] - d.data[q]) < 1e-15);
      CHECK(std::abs(out2.data[q] - out.data[q]) < 1e-15);
    }
    CHECK(unit_norm_error(out) < 1e-15);
  }
  SUBCASE("degenerate cell throws") {
    for (size_t q = 0; q < d.cells(); ++q) d.data[3 * q + 2] = 1.0;
    d.data[2] = 0.1;  // first cell shrinks to norm 0.1
    CHECK_THROWS_AS(renormalize_director(d, out), DegenerateDirector);
  }
}

TEST_CASE("elastic stress closed forms") {
  Grid g = make_grid(24);

  SUBCASE("constant director gives zero stress") {
    VectorField3 d(g.nx(), g.ny());
    std::vector<double> trace(3 * g.m);
    for (size_t q = 0; q < d.cells(); ++q) d.data[3 * q + 1] = 1.0;
    for (int k = 0; k < g.m; ++k) trace[3 * k + 1] = 1.0;
    StressTensor t = elastic_stress(g, d, trace.data());
    for (double v : t.s11.data) CHECK(std::abs(v) < 1e-13);
    for (double v : t.s12.data) CHECK(std::abs(v) < 1e-13);
    for (double v : t.s22.data) CHECK(std::abs(v) < 1e-13);
  }

  SUBCASE("in-plane rotation d=(sin x, cos x, 0)") {
    // centered differencing of a unit-frequency rotation: s11 is exactly
    // (sin dx / dx)^2 at interior cells
    VectorField3 d(g.nx(), g.ny());
    std::vector<double> trace(3 * g.m);
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        d(i, j, 0) = std::sin(g.cx(i));
        d(i, j, 1) = std::cos(g.cx(i));
      }
    for (int k = 0; k < g.m; ++k) {
      trace[3 * k] = std::sin(g.boundary[k].px);
      trace[3 * k + 1] = std::cos(g.boundary[k].px);
    }
    StressTensor t = elastic_stress(g, d, trace.data());
    const double expected = std::pow(std::sin(g.dx) / g.dx, 2);
    for (int j = 1; j + 1 < g.ny(); ++j)
      for (int i = 1; i + 1 < g.nx(); ++i) {
        CHECK(t.s11(i, j) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(std::abs(t.s12(i, j)) < 1e-13);
        CHECK(std::abs(t.s22(i, j)) < 1e-13);
      }
  }

  SUBCASE("off-diagonal entries are identical on random data") {
    VectorField3 d(g.nx(), g.ny());
    std::vector<double> trace(3 * g.m);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& v : d.data) v = u(rng);
    for (auto& v : trace) v = u(rng);
    StressTensor t = elastic_stress(g, d, trace.data());
    for (size_t q = 0; q < t.s12.size(); ++q) CHECK(t.s12.data[q] == t.s21.data[q]);
  }
}

TEST_CASE("energy report") {
  const int n = 12;
  Problem prob = make_stationary(n, cfl_dt(GridSpec{.nx = n, .ny = n}, 0.5), 4);
  Grid g = build_grid(prob.spec);

  SUBCASE("zero velocity and constant director carry no energy") {
    FlowState s(n, n);
    s.u = prob.u0;
    s.d = prob.d0;
    EnergyReport rep = energy(g, s, prob.bc);
    CHECK(rep.kinetic == 0.0);
    CHECK(std::abs(rep.elastic) < 1e-26);
    CHECK(rep.total == rep.kinetic + rep.elastic);
    CHECK(std::abs(rep.dissipation) < 1e-22);
    CHECK(std::abs(rep.boundary_flux) < 1e-22);
  }

  SUBCASE("elastic quadratures agree with an independent midpoint oracle") {
    Problem rel = make_relaxation(16, cfl_dt(GridSpec{.nx = 16, .ny = 16}, 0.5), 4, 0.2);
    Grid gg = build_grid(rel.spec);
    FlowState s(16, 16);
    s.d = rel.d0;
    EnergyReport rep = energy(gg, s, rel.bc);

    // midpoint-gradient oracle built on the independent padded stencil path
    ScalarField gs = ref::gradsq(gg, rel.d0, rel.bc.row(0));
    const double oracle = 0.5 * ref::sum_cells(gs, gg.cell_volume());
    CHECK(elastic_midpoint(gg, rel.d0, rel.bc.row(0)) ==
          doctest::Approx(oracle).epsilon(1e-12));
    // the face-difference quadrature agrees with it at discretization order
    CHECK(rep.elastic == doctest::Approx(oracle).epsilon(0.05));
  }

  SUBCASE("static trace gives zero flux") {
    Problem rel = make_relaxation(n, cfl_dt(GridSpec{.nx = n, .ny = n}, 0.5), 4, 0.2);
    Grid gg = build_grid(rel.spec);
    FlowState s(n, n);
    s.d = rel.d0;
    EnergyReport rep = energy(gg, s, rel.bc);
    CHECK(rep.boundary_flux == 0.0);
  }
}

TEST_CASE("windowed local energy") {
  const int n = 16;
  Problem rel = make_relaxation(n, cfl_dt(GridSpec{.nx = n, .ny = n}, 0.5), 4, 0.3);
  Grid g = build_grid(rel.spec);
  FlowState s(n, n);
  s.d = rel.d0;

  SUBCASE("zero state vanishes") {
    FlowState z(n, n);
    for (size_t q = 0; q < z.d.cells(); ++q) z.d.data[3 * q + 2] = 1.0;
    std::vector<double> pole(3 * g.m, 0.0);
    for (int k = 0; k < g.m; ++k) pole[3 * k + 2] = 1.0;
    CHECK(local_energy_max(g, z, pole.data(), 0.2) == 0.0);
  }
  SUBCASE("giant radius reaches twice the total energy") {
    const double full = local_energy_max(g, s, rel.bc.row(0), 10.0);
    EnergyReport rep = energy(g, s, rel.bc);
    const double mid = elastic_midpoint(g, s.d, rel.bc.row(0));
    (void)rep;
    CHECK(full == doctest::Approx(2.0 * mid).epsilon(1e-12));
  }
  SUBCASE("monotone in the radius") {
    double prev = 0.0;
    for (double r : {0.1, 0.2, 0.3, 0.5, 0.8}) {
      const double v = local_energy_max(g, s, rel.bc.row(0), r);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("hemisphere minimum") {
  Grid g = make_grid(6);
  VectorField3 d(g.nx(), g.ny());
  for (size_t q = 0; q < d.cells(); ++q) d.data[3 * q + 2] = 1.0;
  CHECK(hemisphere_min(d) == 1.0);
  for (size_t q = 0; q < d.cells(); ++q) {
    d.data[3 * q] = 1.0;
    d.data[3 * q + 2] = 0.0;
  }
  CHECK(hemisphere_min(d) == 0.0);
  for (size_t q = 0; q < d.cells(); ++q) {
    d.data[3 * q] = 0.0;
    d.data[3 * q + 2] = -1.0;
  }
  CHECK(hemisphere_min(d) == -1.0);
}

TEST_CASE("bc validation") {
  const int n = 8;
  Problem p = make_stationary(n, cfl_dt(GridSpec{.nx = n, .ny = n}, 0.5), 2);
  Grid g = build_grid(p.spec);
  CHECK_NOTHROW(validate_bc(g, p.bc, &p.d0_trace));

  SUBCASE("non-unit entry") {
    DirectorBC bad = p.bc;
    bad.at(0, 1)[0] *= 1.5;
    CHECK_THROWS_AS(validate_bc(g, bad, nullptr), InvalidParameter);
  }
  SUBCASE("southern value") {
    DirectorBC bad = p.bc;
    double* v = bad.at(2, 1);
    v[0] = 0.0; v[1] = 0.0; v[2] = -1.0;
    CHECK_THROWS_AS(validate_bc(g, bad, nullptr), InvalidParameter);
  }
  SUBCASE("incompatible row 0") {
    DirectorBC bad = p.bc;
    double* v = bad.at(1, 0);
    v[0] = 1.0; v[1] = 0.0; v[2] = 0.0;
    CHECK_THROWS_AS(validate_bc(g, bad, &p.d0_trace), InvalidParameter);
  }
}
