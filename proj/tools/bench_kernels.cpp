// Kernel benchmark: times the OpenMP stencil kernels against the serial
// reference implementations on a large grid and prints the speedups.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

#include "lcf/ops.hpp"
#include "lcf/ref.hpp"
#include "lcf/state.hpp"

using namespace lcf;
using clock_type = std::chrono::steady_clock;

namespace {

double time_ms(int reps, const std::function<void()>& fn) {
  fn();  // warm up
  const auto t0 = clock_type::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto t1 = clock_type::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
  const int n = (argc > 1) ? std::atoi(argv[1]) : 256;
  const int reps = (argc > 2) ? std::atoi(argv[2]) : 20;

  GridSpec spec;
  spec.nx = spec.ny = n;
  spec.dt = 0.5 * spec.cfl / double(n) / double(n);
  Grid g = build_grid(spec);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  VectorField3 d(n, n);
  for (auto& v : d.data) v = uni(rng);
  std::vector<double> trace(3 * g.m);
  for (auto& v : trace) v = uni(rng);
  VectorField2 u(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 1; i < n; ++i) u.x(i, j) = uni(rng);
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < n; ++i) u.y(i, j) = uni(rng);

  VectorField3 out3(n, n);
  ScalarField outs(n, n);
  VectorField2 outf(n, n);

  std::printf("grid %dx%d, %d reps per kernel\n", n, n, reps);
  std::printf("%-16s %12s %12s %8s\n", "kernel", "parallel ms", "serial ms", "speedup");

  struct Row {
    const char* name;
    std::function<void()> par;
    std::function<void()> ser;
  };
  const Row rows[] = {
      {"laplacian",
       [&] { laplacian_cells(g, d, trace.data(), out3); },
       [&] { ref::laplacian_cells(g, d, trace.data()); }},
      {"divergence",
       [&] { divergence(g, u, outs); },
       [&] { ref::divergence(g, u); }},
      {"advect_cells",
       [&] { advect_cells(g, u, d, trace.data(), false, out3); },
       [&] { ref::advect_cells(g, u, d, trace.data()); }},
      {"gradsq",
       [&] { gradsq(g, d, trace.data(), outs); },
       [&] { ref::gradsq(g, d, trace.data()); }},
      {"stress_force",
       [&] { stress_force(g, d, trace.data(), outf); },
       [&] { ref::stress_force(g, d, trace.data()); }},
      {"advect_faces",
       [&] { advect_faces(g, u, false, outf); },
       [&] { ref::advect_faces(g, u); }},
  };
  for (const Row& row : rows) {
    const double tp = time_ms(reps, row.par);
    const double ts = time_ms(reps, row.ser);
    std::printf("%-16s %12.3f %12.3f %8.2f\n", row.name, tp, ts, ts / tp);
  }
  return 0;
}
