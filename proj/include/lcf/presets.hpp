#ifndef LCF_PRESETS_HPP_
#define LCF_PRESETS_HPP_

#include <string>

#include "lcf/chart.hpp"
#include "lcf/forward.hpp"

namespace lcf {

// A ready-to-run problem: grid parameters, initial data with its boundary
// trace, control rows, and solver options.
struct Problem {
  GridSpec spec;
  VectorField2 u0;
  VectorField3 d0;
  std::vector<double> d0_trace;  // m*3, sampled analytically
  DirectorBC bc;
  SimOptions opts;
  Forcing forcing;
};

// Largest stable step times a safety fraction.
double cfl_dt(const GridSpec& spec, double fraction = 1.0);

// Uniform unit constant data; the exact fixed point of the scheme.
Problem make_stationary(int n, double dt, int nsteps);

// Chart-bump director relaxing toward the pole under frozen velocity;
// the trace is the pole, constant in time.
Problem make_relaxation(int n, double dt, int nsteps, double amp = 0.02);

// Smooth interior director with a time-dependent boundary rotation driving
// the flow through the elastic stress; velocity starts at rest.
Problem make_driven(int n, double dt, int nsteps, double amp = 0.35,
                    double bc_amp = 0.25);

// Like driven but with chart radii pushed toward the equator.
Problem make_hemisphere(int n, double dt, int nsteps, double amp = 0.97);

Problem make_by_name(const std::string& name, int n, double dt, int nsteps);

// The control the self-tracking problem reconstructs: a traveling boundary
// wave switched on smoothly from the compatible row 0.
DirectorBC make_target_control(const Grid& g, int nsteps, double amp);

}  // namespace lcf

#endif
