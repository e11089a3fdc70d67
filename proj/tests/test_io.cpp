#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "lcf/io.hpp"
#include "lcf/presets.hpp"

using namespace lcf;
namespace fs = std::filesystem;

namespace {

std::string tmp_path(const char* name) {
  return (fs::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("minimal config fills the documented defaults") {
    io::RunConfig cfg = io::parse_config(
        "[grid]\nnx = 8\nny = 8\nnsteps = 4\n"
        "[initial]\npreset = stationary\n[control]\npreset = hold\n");
    CHECK(cfg.grid.nx == 8);
    CHECK(cfg.grid.nu == 1.0);
    CHECK(cfg.grid.mu == 1.0);
    CHECK(cfg.grid.lambda == 1.0);
    CHECK(cfg.grid.cfl == 0.2);
    CHECK(cfg.sim.upwind == false);
  }
  SUBCASE("negative weight is rejected") {
    CHECK_THROWS_AS(io::parse_config("[weights]\nbeta1 = -1\n"), Error);
  }
  SUBCASE("duplicate key is rejected with its line") {
    try {
      io::parse_config("[grid]\nnx = 8\nnx = 9\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
      CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
    }
  }
  SUBCASE("unknown key is rejected") {
    try {
      io::parse_config("[grid]\nnx = 8\nbogus = 1\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("unknown key") != std::string::npos);
    }
  }
  SUBCASE("type errors carry line numbers") {
    try {
      io::parse_config("[grid]\nnx = eight\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
}

TEST_CASE("control file round trip") {
  const int n = 8;
  Problem p = make_driven(n, cfl_dt(GridSpec{.nx = n, .ny = n}, 1.0), 6);
  const std::string path = tmp_path("roundtrip.lcb");

  io::write_control(path, p.bc);
  DirectorBC back = io::read_control(path);
  REQUIRE(back.m == p.bc.m);
  REQUIRE(back.nlevels == p.bc.nlevels);
  for (size_t q = 0; q < p.bc.values.size(); ++q)
    CHECK(back.values[q] == p.bc.values[q]);  // bit exact

  SUBCASE("truncated file reports the offset") {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string bytes = buf.str();
    bytes.resize(bytes.size() - 13);
    std::ofstream out(path, std::ios::binary);
    out << bytes;
    out.close();
    try {
      io::read_control(path);
      FAIL("expected IoError");
    } catch (const IoError& e) {
      CHECK(std::string(e.what()).find("truncated") != std::string::npos);
      CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
  }

  SUBCASE("magic mismatch is detected") {
    std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(0);
    f.write("XXXX", 4);
    f.close();
    CHECK_THROWS_AS(io::read_control(path), IoError);
  }

  SUBCASE("non-unit triples are rejected") {
    DirectorBC bad = p.bc;
    bad.at(2, 3)[0] += 1e-6;
    io::write_control(path, bad);
    try {
      io::read_control(path);
      FAIL("expected IoError");
    } catch (const IoError& e) {
      CHECK(std::string(e.what()).find("norm violation") != std::string::npos);
    }
  }
}

TEST_CASE("snapshot records round trip") {
  const int n = 6;
  Problem p = make_relaxation(n, cfl_dt(GridSpec{.nx = n, .ny = n}, 1.0), 2, 0.2);
  VectorField2 u(n, n);
  for (size_t q = 0; q < u.ux.size(); ++q) u.ux[q] = double(q) * 0.1;
  ScalarField s(n, n);
  for (size_t q = 0; q < s.size(); ++q) s.data[q] = -double(q);

  const std::string path = tmp_path("state.lcf");
  {
    std::ofstream os(path, std::ios::binary);
    io::write_velocity_snapshot(os, u, 0.25);
    io::write_scalar_snapshot(os, s, 0.25);
    io::write_cell3_snapshot(os, p.d0, 0.25);
  }
  auto records = io::read_snapshot_file(path);
  REQUIRE(records.size() == 4);  // face-x, face-y, scalar, cell3
  CHECK(records[0].kind == io::FieldKind::FaceX);
  CHECK(records[0].nx == n + 1);
  for (size_t q = 0; q < u.ux.size(); ++q)
    CHECK(records[0].payload[q] == u.ux[q]);
  CHECK(records[2].kind == io::FieldKind::Scalar);
  CHECK(records[3].kind == io::FieldKind::Cell3);
  for (size_t q = 0; q < p.d0.data.size(); ++q)
    CHECK(records[3].payload[q] == p.d0.data[q]);
  CHECK(records[3].time == 0.25);
}

TEST_CASE("csv headers are pinned") {
  CHECK(std::string(io::kEnergyCsvHeader) ==
        "step,t,kinetic,elastic,dissipation,boundary_flux,balance_residual,"
        "min_d3,max_div,local_energy_max");
  CHECK(std::string(io::kGradcheckCsvHeader) == "eps,fd_value,adjoint_value,rel_gap");
  CHECK(std::string(io::kHistoryCsvHeader) ==
        "iter,cost,term_u,term_d,term_u_final,term_d_final,term_control,"
        "grad_norm,step,feasibility_norm");
  CHECK(std::string(io::kQBoundaryCsvHeader) ==
        "level,t,sample,s,q1_x,q1_y,q2_x,q2_y,q2_z");
}

TEST_CASE("energy csv is reproducible byte for byte") {
  io::RunConfig cfg = io::parse_config(
      "[grid]\nnx = 8\nny = 8\nnsteps = 6\n"
      "[initial]\npreset = driven\n[control]\npreset = wave\n");
  io::AssembledRun run = io::assemble(cfg);
  Trajectory traj = solve_forward(run.problem, run.h);

  const std::string p1 = tmp_path("energy_a.csv");
  const std::string p2 = tmp_path("energy_b.csv");
  io::write_energy_csv(p1, traj, cfg.local_energy_radius);
  Trajectory traj2 = solve_forward(run.problem, run.h);
  io::write_energy_csv(p2, traj2, cfg.local_energy_radius);

  std::ifstream a(p1), b(p2);
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().substr(0, std::string(io::kEnergyCsvHeader).size()) ==
        io::kEnergyCsvHeader);
}

TEST_CASE("assembled presets satisfy the solver preconditions") {
  for (const char* preset : {"stationary", "relaxation", "driven", "hemisphere"}) {
    io::RunConfig cfg = io::parse_config(
        std::string("[grid]\nnx = 8\nny = 8\nnsteps = 4\n[initial]\npreset = ") +
        preset + "\n[control]\npreset = wave\n");
    if (std::string(preset) == "stationary") {
      cfg.control_preset = "hold";  // wave rows would clash with a nonzero trace
    }
    io::AssembledRun run = io::assemble(cfg);
    CHECK_NOTHROW(solve_forward(run.problem, run.h));
  }
}
