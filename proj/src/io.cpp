#include "lcf/io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "lcf/errors.hpp"
#include "lcf/presets.hpp"

namespace lcf::io {

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

namespace {

struct Entry {
  std::string value;
  int line;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct ParsedFile {
  std::map<std::string, Entry> entries;  // "section.key" -> value
};

ParsedFile tokenize(const std::string& text) {
  ParsedFile out;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": key outside any [section]");
    const std::string full = section + "." + key;
    if (out.entries.count(full))
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": duplicate key '" + full + "'");
    out.entries[full] = {value, lineno};
  }
  return out;
}

class Reader {
 public:
  explicit Reader(ParsedFile f) : file_(std::move(f)) {}

  bool has(const std::string& key) const { return file_.entries.count(key) > 0; }

  double number(const std::string& key, double fallback) {
    auto it = file_.entries.find(key);
    if (it == file_.entries.end()) return fallback;
    consumed_.insert(it->first);
    try {
      size_t pos = 0;
      const double v = std::stod(it->second.value, &pos);
      if (pos != it->second.value.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw ConfigError("config line " + std::to_string(it->second.line) +
                        ": '" + key + "' expects a number, got '" +
                        it->second.value + "'");
    }
  }

  long long integer(const std::string& key, long long fallback) {
    auto it = file_.entries.find(key);
    if (it == file_.entries.end()) return fallback;
    consumed_.insert(it->first);
    try {
      size_t pos = 0;
      const long long v = std::stoll(it->second.value, &pos);
      if (pos != it->second.value.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw ConfigError("config line " + std::to_string(it->second.line) +
                        ": '" + key + "' expects an integer, got '" +
                        it->second.value + "'");
    }
  }

  std::string text(const std::string& key, const std::string& fallback) {
    auto it = file_.entries.find(key);
    if (it == file_.entries.end()) return fallback;
    consumed_.insert(it->first);
    return it->second.value;
  }

  bool flag(const std::string& key, bool fallback) {
    auto it = file_.entries.find(key);
    if (it == file_.entries.end()) return fallback;
    consumed_.insert(it->first);
    if (it->second.value == "true" || it->second.value == "1") return true;
    if (it->second.value == "false" || it->second.value == "0") return false;
    throw ConfigError("config line " + std::to_string(it->second.line) + ": '" +
                      key + "' expects true/false");
  }

  void reject_unknown() const {
    for (const auto& [key, entry] : file_.entries)
      if (!consumed_.count(key))
        throw ConfigError("config line " + std::to_string(entry.line) +
                          ": unknown key '" + key + "'");
  }

 private:
  ParsedFile file_;
  std::set<std::string> consumed_;
};

}  // namespace

RunConfig parse_config(const std::string& text) {
  Reader r(tokenize(text));
  RunConfig cfg;

  cfg.grid.nx = int(r.integer("grid.nx", cfg.grid.nx));
  cfg.grid.ny = int(r.integer("grid.ny", cfg.grid.ny));
  cfg.grid.lx = r.number("grid.lx", cfg.grid.lx);
  cfg.grid.ly = r.number("grid.ly", cfg.grid.ly);
  cfg.grid.cfl = r.number("grid.cfl", cfg.grid.cfl);
  const double dt_frac = r.number("grid.dt_fraction", 0.5);
  cfg.grid.dt = r.number("grid.dt", dt_frac * cfg.grid.cfl *
                                        std::pow(std::min(cfg.grid.lx / cfg.grid.nx,
                                                          cfg.grid.ly / cfg.grid.ny),
                                                 2));
  cfg.grid.nsteps = int(r.integer("grid.nsteps", cfg.grid.nsteps));

  cfg.grid.nu = r.number("physics.nu", 1.0);
  cfg.grid.mu = r.number("physics.mu", 1.0);
  cfg.grid.lambda = r.number("physics.lambda", 1.0);
  const std::string adv = r.text("physics.advection", "centered");
  if (adv == "upwind") cfg.sim.upwind = true;
  else if (adv != "centered")
    throw ConfigError("physics.advection must be centered or upwind");
  cfg.sim.freeze_velocity = r.flag("physics.freeze_velocity", false);

  cfg.initial_preset = r.text("initial.preset", cfg.initial_preset);
  cfg.initial_amp = r.number("initial.amp", cfg.initial_amp);
  cfg.d0_file = r.text("initial.d0_file", "");
  cfg.u0_file = r.text("initial.u0_file", "");

  cfg.control_preset = r.text("control.preset", cfg.control_preset);
  cfg.control_amp = r.number("control.amp", cfg.control_amp);
  cfg.control_file = r.text("control.file", "");

  cfg.target_preset = r.text("targets.preset", cfg.target_preset);
  cfg.target_amp = r.number("targets.amp", cfg.target_amp);

  cfg.weights.beta1 = r.number("weights.beta1", cfg.weights.beta1);
  cfg.weights.beta2 = r.number("weights.beta2", cfg.weights.beta2);
  cfg.weights.beta3 = r.number("weights.beta3", cfg.weights.beta3);
  cfg.weights.beta4 = r.number("weights.beta4", cfg.weights.beta4);
  cfg.weights.beta5 = r.number("weights.beta5", cfg.weights.beta5);
  validate_weights(cfg.weights);

  cfg.optimize.M = r.number("optimize.M", cfg.optimize.M);
  cfg.optimize.step0 = r.number("optimize.step0", cfg.optimize.step0);
  cfg.optimize.armijo_c = r.number("optimize.armijo_c", cfg.optimize.armijo_c);
  cfg.optimize.armijo_shrink =
      r.number("optimize.armijo_shrink", cfg.optimize.armijo_shrink);
  cfg.optimize.max_iters = int(r.integer("optimize.max_iters", cfg.optimize.max_iters));
  cfg.optimize.grad_tol = r.number("optimize.grad_tol", cfg.optimize.grad_tol);
  cfg.optimize.max_backtracks =
      int(r.integer("optimize.max_backtracks", cfg.optimize.max_backtracks));
  validate_optimize_config(cfg.optimize);

  cfg.local_energy_radius = r.number("output.local_energy_radius", cfg.local_energy_radius);
  cfg.seed = (unsigned long long)r.integer("output.seed", (long long)cfg.seed);
  cfg.snapshot_every = int(r.integer("output.snapshot_every", cfg.snapshot_every));

  r.reject_unknown();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << is.rdbuf();
  return parse_config(buf.str());
}

namespace {

VectorField3 cell3_from_snapshot(const std::string& path, int nx, int ny) {
  auto records = read_snapshot_file(path);
  for (const auto& rec : records)
    if (rec.kind == FieldKind::Cell3 && rec.nx == nx && rec.ny == ny) {
      VectorField3 f(nx, ny);
      f.data = rec.payload;
      return f;
    }
  throw IoError("snapshot '" + path + "' holds no matching director record");
}

VectorField2 velocity_from_snapshot(const std::string& path, int nx, int ny) {
  auto records = read_snapshot_file(path);
  VectorField2 u(nx, ny);
  bool have_x = false, have_y = false;
  for (const auto& rec : records) {
    if (rec.kind == FieldKind::FaceX && rec.nx == nx + 1 && rec.ny == ny) {
      u.ux = rec.payload;
      have_x = true;
    }
    if (rec.kind == FieldKind::FaceY && rec.nx == nx && rec.ny == ny + 1) {
      u.uy = rec.payload;
      have_y = true;
    }
  }
  if (!have_x || !have_y)
    throw IoError("snapshot '" + path + "' holds no matching velocity records");
  return u;
}

}  // namespace

AssembledRun assemble(const RunConfig& cfg) {
  AssembledRun run;
  run.problem.spec = cfg.grid;
  run.problem.opts = cfg.sim;
  run.problem.weights = cfg.weights;
  Grid g = build_grid(cfg.grid);

  // initial data
  if (cfg.initial_preset == "file") {
    if (cfg.d0_file.empty())
      throw ConfigError("initial.preset = file requires initial.d0_file");
    run.problem.d0 = cell3_from_snapshot(cfg.d0_file, g.nx(), g.ny());
    run.problem.u0 = cfg.u0_file.empty()
                         ? VectorField2(g.nx(), g.ny())
                         : velocity_from_snapshot(cfg.u0_file, g.nx(), g.ny());
    run.problem.d0_trace.clear();  // the control row 0 defines the trace
  } else if (cfg.initial_preset == "manufactured") {
    ControlProblem manu = verify::manufactured_problem(
        cfg.grid.nx, cfg.grid.dt * cfg.grid.nsteps);
    run.problem = std::move(manu);
    run.problem.weights = cfg.weights;
    run.h = verify::manufactured_bc(build_grid(run.problem.spec),
                                    run.problem.spec.nsteps);
    return run;
  } else {
    Problem p = make_by_name(cfg.initial_preset, cfg.grid.nx, cfg.grid.dt,
                             cfg.grid.nsteps);
    run.problem.u0 = std::move(p.u0);
    run.problem.d0 = std::move(p.d0);
    run.problem.d0_trace = std::move(p.d0_trace);
    if (cfg.initial_preset == "relaxation") run.problem.opts.freeze_velocity = true;
    run.h = std::move(p.bc);  // preset control; may be overridden below
  }

  // control rows
  if (cfg.control_preset == "file" || !cfg.control_file.empty()) {
    run.h = read_control(cfg.control_file);
  } else if (cfg.control_preset == "target") {
    DirectorBC h = make_target_control(g, cfg.grid.nsteps, cfg.control_amp);
    if (!run.problem.d0_trace.empty())
      for (int k = 0; k < g.m; ++k)
        for (int c = 0; c < 3; ++c)
          h.at(k, 0)[c] = run.problem.d0_trace[3 * k + c];
    run.h = std::move(h);
  } else if (cfg.control_preset == "hold") {
    // constant-in-time extension of the initial trace
    DirectorBC h(g.m, cfg.grid.nsteps + 1);
    for (int n = 0; n <= cfg.grid.nsteps; ++n)
      for (int k = 0; k < g.m; ++k)
        for (int c = 0; c < 3; ++c)
          h.at(k, n)[c] = run.problem.d0_trace.empty()
                              ? (c == 2 ? 1.0 : 0.0)
                              : run.problem.d0_trace[3 * k + c];
    run.h = std::move(h);
  } else if (cfg.control_preset != "wave") {
    throw ConfigError("unknown control.preset '" + cfg.control_preset + "'");
  }
  if (run.h.m == 0)
    throw ConfigError("no control rows; set control.preset or control.file");

  // targets
  const int n = g.nx();
  if (cfg.target_preset == "pole") {
    VectorField3 pole(n, n);
    for (size_t q = 0; q < pole.cells(); ++q) pole.data[3 * q + 2] = 1.0;
    run.problem.targets.u_qt.assign(1, VectorField2(n, n));
    run.problem.targets.d_qt.assign(1, pole);
    run.problem.targets.u_omega = VectorField2(n, n);
    run.problem.targets.d_omega = pole;
  } else if (cfg.target_preset == "self-tracking") {
    DirectorBC hstar = make_target_control(g, cfg.grid.nsteps, cfg.target_amp);
    if (!run.problem.d0_trace.empty())
      for (int k = 0; k < g.m; ++k)
        for (int c = 0; c < 3; ++c)
          hstar.at(k, 0)[c] = run.problem.d0_trace[3 * k + c];
    Trajectory ref = simulate(g, run.problem.u0, run.problem.d0, hstar,
                              run.problem.forcing, run.problem.opts,
                              run.problem.d0_trace.empty() ? nullptr
                                                           : &run.problem.d0_trace);
    run.problem.targets.u_qt.clear();
    run.problem.targets.d_qt.clear();
    for (int lvl = 0; lvl <= cfg.grid.nsteps; ++lvl) {
      run.problem.targets.u_qt.push_back(ref.states[lvl].u);
      run.problem.targets.d_qt.push_back(ref.states[lvl].d);
    }
    run.problem.targets.u_omega = ref.states.back().u;
    run.problem.targets.d_omega = ref.states.back().d;
  } else {
    throw ConfigError("unknown targets.preset '" + cfg.target_preset + "'");
  }
  return run;
}

// ---------------------------------------------------------------------------
// binary snapshots
// ---------------------------------------------------------------------------

namespace {

constexpr char kSnapshotMagic[4] = {'L', 'C', 'F', '1'};
constexpr char kControlMagic[4] = {'L', 'C', 'B', '1'};

void put_u32(std::ostream& os, uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void put_f64(std::ostream& os, double v) { os.write(reinterpret_cast<const char*>(&v), 8); }

uint32_t get_u32(std::istream& is, const char* what) {
  uint32_t v = 0;
  if (!is.read(reinterpret_cast<char*>(&v), 4))
    throw IoError(std::string("snapshot truncated reading ") + what +
                  " at byte " + std::to_string(is.tellg() == -1 ? -1 : long(is.tellg())));
  return v;
}

void write_record(std::ostream& os, FieldKind kind, int nx, int ny, int ncomp,
                  double t, const std::vector<double>& payload) {
  os.write(kSnapshotMagic, 4);
  put_u32(os, uint32_t(kind));
  put_u32(os, uint32_t(nx));
  put_u32(os, uint32_t(ny));
  put_u32(os, uint32_t(ncomp));
  put_f64(os, t);
  os.write(reinterpret_cast<const char*>(payload.data()),
           std::streamsize(payload.size() * 8));
}

}  // namespace

void write_scalar_snapshot(std::ostream& os, const ScalarField& f, double t) {
  write_record(os, FieldKind::Scalar, f.nx, f.ny, 1, t, f.data);
}
void write_cell3_snapshot(std::ostream& os, const VectorField3& f, double t) {
  write_record(os, FieldKind::Cell3, f.nx, f.ny, 3, t, f.data);
}
void write_velocity_snapshot(std::ostream& os, const VectorField2& u, double t) {
  write_record(os, FieldKind::FaceX, u.nx + 1, u.ny, 1, t, u.ux);
  write_record(os, FieldKind::FaceY, u.nx, u.ny + 1, 1, t, u.uy);
}

SnapshotRecord read_snapshot_record(std::istream& is) {
  char magic[4];
  const auto start = is.tellg();
  if (!is.read(magic, 4))
    throw IoError("snapshot truncated reading magic at byte " +
                  std::to_string(long(start)));
  if (std::memcmp(magic, kSnapshotMagic, 4) != 0)
    throw IoError("snapshot magic mismatch at byte " + std::to_string(long(start)));
  SnapshotRecord rec;
  rec.kind = FieldKind(get_u32(is, "kind"));
  rec.nx = int(get_u32(is, "nx"));
  rec.ny = int(get_u32(is, "ny"));
  rec.ncomp = int(get_u32(is, "ncomp"));
  if (!is.read(reinterpret_cast<char*>(&rec.time), 8))
    throw IoError("snapshot truncated reading time");
  const size_t count = size_t(rec.nx) * rec.ny * rec.ncomp;
  rec.payload.resize(count);
  if (!is.read(reinterpret_cast<char*>(rec.payload.data()), std::streamsize(count * 8)))
    throw IoError("snapshot truncated reading payload at byte " +
                  std::to_string(long(is.tellg())));
  return rec;
}

std::vector<SnapshotRecord> read_snapshot_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open snapshot '" + path + "'");
  std::vector<SnapshotRecord> out;
  while (is.peek() != EOF) out.push_back(read_snapshot_record(is));
  return out;
}

// ---------------------------------------------------------------------------
// boundary control files
// ---------------------------------------------------------------------------

void write_control(const std::string& path, const DirectorBC& bc) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os.write(kControlMagic, 4);
  put_u32(os, uint32_t(bc.m));
  put_u32(os, uint32_t(bc.nlevels));
  for (int j = 0; j < bc.m; ++j)
    for (int n = 0; n < bc.nlevels; ++n)
      os.write(reinterpret_cast<const char*>(bc.at(j, n)), 24);
}

DirectorBC read_control(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open control file '" + path + "'");
  char magic[4];
  if (!is.read(magic, 4)) throw IoError("control file truncated at byte 0");
  if (std::memcmp(magic, kControlMagic, 4) != 0)
    throw IoError("control file magic mismatch");
  const int m = int(get_u32(is, "sample count"));
  const int nlevels = int(get_u32(is, "level count"));
  DirectorBC bc(m, nlevels);
  for (int j = 0; j < m; ++j)
    for (int n = 0; n < nlevels; ++n) {
      double v[3];
      if (!is.read(reinterpret_cast<char*>(v), 24))
        throw IoError("control file truncated at byte " +
                      std::to_string(long(is.tellg())));
      const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
      if (std::abs(norm - 1.0) > 1e-9)
        throw IoError("control file norm violation at sample " +
                      std::to_string(j) + " level " + std::to_string(n));
      double* dst = bc.at(j, n);
      dst[0] = v[0];
      dst[1] = v[1];
      dst[2] = v[2];
    }
  return bc;
}

// ---------------------------------------------------------------------------
// CSV reports
// ---------------------------------------------------------------------------

const char* kEnergyCsvHeader =
    "step,t,kinetic,elastic,dissipation,boundary_flux,balance_residual,"
    "min_d3,max_div,local_energy_max";
const char* kGradcheckCsvHeader = "eps,fd_value,adjoint_value,rel_gap";
const char* kHistoryCsvHeader =
    "iter,cost,term_u,term_d,term_u_final,term_d_final,term_control,"
    "grad_norm,step,feasibility_norm";
const char* kQBoundaryCsvHeader = "level,t,sample,s,q1_x,q1_y,q2_x,q2_y,q2_z";

namespace {

std::ofstream open_csv(const std::string& path, const char* header) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << header << "\n";
  return os;
}

void put_num(std::ostream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

}  // namespace

void write_energy_csv(const std::string& path, const Trajectory& traj,
                      double radius) {
  std::ofstream os = open_csv(path, kEnergyCsvHeader);
  const std::vector<double> residuals = energy_balance_series(traj);
  for (int n = 0; n <= traj.nsteps(); ++n) {
    const FlowState& s = traj.states[n];
    const EnergyReport rep = energy(traj.grid, s, traj.bc);
    os << n << ",";
    put_num(os, s.t);
    for (double v : {rep.kinetic, rep.elastic, rep.dissipation, rep.boundary_flux,
                     n < traj.nsteps() ? residuals[n] : 0.0,
                     hemisphere_min(s.d), max_divergence(traj.grid, s.u),
                     local_energy_max(traj.grid, s, traj.bc.row(n), radius)}) {
      os << ",";
      put_num(os, v);
    }
    os << "\n";
  }
}

void write_gradcheck_csv(const std::string& path, const std::vector<double>& eps,
                         const std::vector<double>& fd_values,
                         double adjoint_value) {
  std::ofstream os = open_csv(path, kGradcheckCsvHeader);
  for (size_t k = 0; k < eps.size(); ++k) {
    put_num(os, eps[k]);
    os << ",";
    put_num(os, fd_values[k]);
    os << ",";
    put_num(os, adjoint_value);
    os << ",";
    put_num(os, std::abs(fd_values[k] - adjoint_value) /
                    std::max(1.0, std::abs(fd_values[k])));
    os << "\n";
  }
}

void write_history_csv(const std::string& path, const OptimizeHistory& history) {
  std::ofstream os = open_csv(path, kHistoryCsvHeader);
  for (const IterRecord& it : history.iters) {
    os << it.iter;
    for (double v : {it.cost, it.term[0], it.term[1], it.term[2], it.term[3],
                     it.term[4], it.grad_norm, it.step, it.feasibility_norm}) {
      os << ",";
      put_num(os, v);
    }
    os << "\n";
  }
}

void write_q_boundary_csv(const std::string& path, const AdjointState& adj,
                          const Trajectory& traj) {
  std::ofstream os = open_csv(path, kQBoundaryCsvHeader);
  const Grid& g = traj.grid;
  for (int n = 0; n <= traj.nsteps(); ++n)
    for (int k = 0; k < g.m; ++k) {
      os << n << ",";
      put_num(os, n * g.spec.dt);
      os << "," << k << ",";
      put_num(os, g.boundary[k].s);
      const double* q1 = adj.q1_at(k, n, g.m);
      const double* q2 = adj.q2_at(k, n, g.m);
      for (double v : {q1[0], q1[1], q2[0], q2[1], q2[2]}) {
        os << ",";
        put_num(os, v);
      }
      os << "\n";
    }
}

}  // namespace lcf::io
