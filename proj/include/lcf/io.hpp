#ifndef LCF_IO_HPP_
#define LCF_IO_HPP_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "lcf/adjoint.hpp"
#include "lcf/control.hpp"
#include "lcf/verify.hpp"

namespace lcf::io {

// ---- run configuration ----------------------------------------------------
// Line-based `key = value` format under [section] headers. Unknown keys,
// duplicate keys and malformed values are errors carrying line numbers.

struct RunConfig {
  GridSpec grid;
  SimOptions sim;

  std::string initial_preset = "driven";  // or "file"
  std::string d0_file, u0_file;
  double initial_amp = 0.35;

  std::string control_preset = "hold";  // hold | wave | target | file
  std::string control_file;
  double control_amp = 0.25;

  std::string target_preset = "pole";  // pole | self-tracking
  double target_amp = 0.3;

  CostWeights weights{1.0, 1.0, 0.0, 0.0, 0.0};
  OptimizeConfig optimize;

  double local_energy_radius = 0.25;
  unsigned long long seed = 2024;
  int snapshot_every = 0;  // 0: final state only
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Materialize the configured problem: grid, initial data, control rows,
// targets. The self-tracking target preset runs the reference solve.
struct AssembledRun {
  ControlProblem problem;
  DirectorBC h;
};
AssembledRun assemble(const RunConfig& cfg);

// ---- binary field snapshots -------------------------------------------------
// Record: magic "LCF1", u32 kind, u32 nx, u32 ny, u32 ncomp, f64 time, then
// nx*ny*ncomp doubles, row-major, little-endian. Staggered velocities store
// each component as its own record with that component's dimensions.

enum class FieldKind : uint32_t { Scalar = 0, Cell3 = 1, FaceX = 2, FaceY = 3 };

void write_scalar_snapshot(std::ostream& os, const ScalarField& f, double t);
void write_cell3_snapshot(std::ostream& os, const VectorField3& f, double t);
void write_velocity_snapshot(std::ostream& os, const VectorField2& u, double t);

struct SnapshotRecord {
  FieldKind kind;
  int nx = 0, ny = 0, ncomp = 0;
  double time = 0.0;
  std::vector<double> payload;
};
SnapshotRecord read_snapshot_record(std::istream& is);
std::vector<SnapshotRecord> read_snapshot_file(const std::string& path);

// ---- boundary control files -------------------------------------------------
// "LCB1", u32 m, u32 nlevels, then unit-norm triples, sample-major then time.

void write_control(const std::string& path, const DirectorBC& bc);
DirectorBC read_control(const std::string& path);

// ---- CSV reports ------------------------------------------------------------

extern const char* kEnergyCsvHeader;
extern const char* kGradcheckCsvHeader;
extern const char* kHistoryCsvHeader;
extern const char* kQBoundaryCsvHeader;

void write_energy_csv(const std::string& path, const Trajectory& traj,
                      double local_energy_radius);
void write_gradcheck_csv(const std::string& path,
                         const std::vector<double>& eps,
                         const std::vector<double>& fd_values,
                         double adjoint_value);
void write_history_csv(const std::string& path, const OptimizeHistory& history);
void write_q_boundary_csv(const std::string& path, const AdjointState& adj,
                          const Trajectory& traj);

}  // namespace lcf::io

#endif
