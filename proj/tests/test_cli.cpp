#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ivp/grid.hpp"
#include "ivp/io.hpp"
#include "ivp/pbsolver.hpp"

namespace fsys = std::filesystem;
using namespace ivp;

namespace {

/* Scratch area for one whole test-binary run; pid-scoped so parallel ctest
 * invocations cannot collide. */
fsys::path scratch(const char* case_name) {
  static const fsys::path root = [] {
    const auto p = fsys::temp_directory_path() / ("ivp-cli-" + std::to_string(::getpid()));
    fsys::create_directories(p);
    return p;
  }();
  const auto dir = root / case_name;
  fsys::create_directories(dir);
  return dir;
}

std::string slurp(const fsys::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

/* Spawns the real executable through the shell, capturing exit status and
 * both streams. Arguments are caller-controlled literals, never user data. */
CliResult run_cli(const std::string& args, const fsys::path& dir) {
  const auto out_file = dir / "stdout.txt";
  const auto err_file = dir / "stderr.txt";
  const std::string cmd = std::string(IVP_CLI_PATH) + " " + args + " > '" + out_file.string() +
                          "' 2> '" + err_file.string() + "'";
  const int raw = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

void write_text(const fsys::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  REQUIRE(static_cast<bool>(out));
}

/* Parses "t,kinetic,potential,entropy,total" rows into vectors of totals. */
std::vector<double> csv_totals(const fsys::path& p) {
  std::ifstream in(p);
  REQUIRE(static_cast<bool>(in));
  std::string line;
  REQUIRE(std::getline(in, line));
  REQUIRE(line == "t,kinetic,potential,entropy,total");
  std::vector<double> totals;
  while (std::getline(in, line)) {
    const auto last = line.rfind(',');
    REQUIRE(last != std::string::npos);
    totals.push_back(std::stod(line.substr(last + 1)));
  }
  return totals;
}

}  // namespace

TEST_CASE("thresholds subcommand prints the integrability table") {
  const auto dir = scratch("thresholds");
  const auto table = run_cli("thresholds", dir);
  CHECK(table.code == 0);
  CHECK(table.out.find("dim  q_threshold") != std::string::npos);
  CHECK(table.out.find("2    1.3903882") != std::string::npos);
  CHECK(table.out.find("3    1.7007458") != std::string::npos);
  CHECK(table.out.find("4+   2.0000000") != std::string::npos);

  SUBCASE("single dimensions match the closed forms to 7 digits") {
    const auto d2 = run_cli("thresholds --dim 2", dir);
    CHECK(d2.code == 0);
    CHECK(std::fabs(std::stod(d2.out) - (7.0 + std::sqrt(17.0)) / 8.0) < 5e-8);
    const auto d3 = run_cli("thresholds --dim 3", dir);
    CHECK(d3.code == 0);
    CHECK(std::fabs(std::stod(d3.out) - (12.0 + 3.0 * std::sqrt(5.0)) / 11.0) < 5e-8);
    const auto d7 = run_cli("thresholds --dim 7", dir);
    CHECK(d7.code == 0);
    CHECK(std::stod(d7.out) == 2.0);
  }

  SUBCASE("dimension 1 is a usage error") {
    const auto d1 = run_cli("thresholds --dim 1", dir);
    CHECK(d1.code == 1);
    CHECK(!d1.err.empty());
  }
}

TEST_CASE("missing subcommand or required flags exit with usage status 1") {
  const auto dir = scratch("usage");
  CHECK(run_cli("", dir).code == 1);
  CHECK(run_cli("pb-solve --init constant:2", dir).code == 1);  // no --out
  CHECK(run_cli("pb-solve --out " + (dir / "o").string(), dir).code == 1);  // no --init
  CHECK(run_cli("no-such-command", dir).code == 1);
}

TEST_CASE("pb-solve on a constant density reproduces the closed-form solution") {
  const auto dir = scratch("pb_constant");
  const auto out = (dir / "fields").string();
  const auto r = run_cli("pb-solve --init constant:2 --dim 1 --nx 64 --out " + out, dir);
  CHECK(r.code == 0);
  CHECK(r.out.find("iters=") != std::string::npos);
  CHECK(r.out.find("residual=") != std::string::npos);

  const auto phi = io::read_field(fsys::path(out) / "phi.ivpf");
  const auto ed = io::read_field(fsys::path(out) / "electron_density.ivpf");
  const auto ef = io::read_field(fsys::path(out) / "e_field_0.ivpf");
  const double logm = std::log(2.0);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    CHECK(std::fabs(phi[i] - logm) < 1e-9);
    CHECK(std::fabs(ed[i] - 2.0) < 1e-8);
    CHECK(std::fabs(ef[i]) < 1e-9);
  }

  SUBCASE("field dumps rewrite bit-identically") {
    const auto copy = dir / "phi_copy.ivpf";
    io::write_field(copy, phi);
    CHECK(slurp(copy) == slurp(fsys::path(out) / "phi.ivpf"));
  }
}

TEST_CASE("pb-solve accepts a density from an IVPF file and matches the library") {
  const auto dir = scratch("pb_file");
  const auto g = TorusGrid::make(1, 48);
  ScalarField rho(g);
  for (std::size_t i = 0; i < rho.size(); ++i)
    rho[i] = 1.5 + 0.4 * std::cos(2.0 * std::numbers::pi * g.coords(i)[0]);
  const auto rho_path = dir / "rho.ivpf";
  io::write_field(rho_path, rho);

  const auto out = (dir / "fields").string();
  const auto r =
      run_cli("pb-solve --init file:" + rho_path.string() + " --nx 48 --out " + out, dir);
  CHECK(r.code == 0);

  const auto phi_cli = io::read_field(fsys::path(out) / "phi.ivpf");
  const auto sol = pb::solve_pb(rho);
  REQUIRE(phi_cli.size() == sol.phi.size());
  for (std::size_t i = 0; i < phi_cli.size(); ++i)
    CHECK(std::fabs(phi_cli[i] - sol.phi[i]) < 1e-13);
}

TEST_CASE("pb-solve rejects malformed generators with a usage error") {
  const auto dir = scratch("pb_bad");
  const auto out = " --out " + (dir / "o").string();
  auto r = run_cli("pb-solve --init gaussian:1" + out, dir);
  CHECK(r.code == 1);
  CHECK(r.err.find("unknown init") != std::string::npos);
  r = run_cli("pb-solve --init constant:-1" + out, dir);
  CHECK(r.code == 1);
  r = run_cli("pb-solve --init single_mode:1:2:1" + out, dir);
  CHECK(r.code == 1);  // amplitude >= level
}

TEST_CASE("vp-run on a uniform Maxwellian holds total energy at one half") {
  const auto dir = scratch("vp_uniform");
  const auto cfg = dir / "run.cfg";
  write_text(cfg,
             "# equilibrium smoke run\n"
             "dim = 1\nnx = 16\nnv = 128\nv_extent = 8\n"
             "dt = 2e-3\nt_end = 0.02\nn_reg = 2\nsample_every = 5\n"
             "init = maxwellian\n");
  const auto out = dir / "out";
  const auto r = run_cli("vp-run --config " + cfg.string() + " --out " + out.string(), dir);
  CHECK(r.code == 0);
  CHECK(r.out.find("energy_ok=true") != std::string::npos);

  const auto totals = csv_totals(out / "energy.csv");
  REQUIRE(totals.size() == 3);  // t = 0, 0.01, 0.02
  for (double t : totals) CHECK(std::fabs(t - 0.5) < 1e-6);

  SUBCASE("snapshots bracket the run and round-trip with their time index") {
    CHECK(fsys::exists(out / "snapshot_000000.ivpf"));
    std::uint64_t step = 0;
    const auto last = io::read_phase_space(out / "snapshot_000010.ivpf", 8.0, &step);
    CHECK(step == 10);
    CHECK(last.xgrid().size() == 16);
    CHECK(last.nv() == 128);
  }
}

TEST_CASE("vp-run guards bad configurations before and during the run") {
  const auto dir = scratch("vp_bad");
  const auto out = " --out " + (dir / "o").string();

  const auto unknown = dir / "unknown.cfg";
  write_text(unknown, "nx = 32\nzspq = 3\n");
  auto r = run_cli("vp-run --config " + unknown.string() + out, dir);
  CHECK(r.code == 1);
  CHECK(r.err.find("zspq") != std::string::npos);

  const auto garbled = dir / "garbled.cfg";
  write_text(garbled, "this line is not an assignment\n");
  r = run_cli("vp-run --config " + garbled.string() + out, dir);
  CHECK(r.code == 1);

  const auto cfl = dir / "cfl.cfg";
  write_text(cfl,
             "dim = 1\nnx = 32\nnv = 32\nv_extent = 6\n"
             "dt = 0.02\nt_end = 0.04\ninit = maxwellian\n");
  r = run_cli("vp-run --config " + cfl.string() + out, dir);
  CHECK(r.code == 2);
  CHECK(r.err.find("CFL") != std::string::npos);

  r = run_cli("vp-run" + out, dir);  // --config is required
  CHECK(r.code == 1);
}

TEST_CASE("verify subcommand filters checks and mirrors suite status in its exit code") {
  const auto dir = scratch("verify");
  const auto cfg = dir / "suite.cfg";
  write_text(cfg, "seed = 11\ncount = 3\nn = 32\n");

  SUBCASE("a passing single check exits 0 and writes the report") {
    const auto out = dir / "rep";
    const auto r = run_cli("verify --config " + cfg.string() + " --only neutrality --out " +
                               out.string(),
                           dir);
    CHECK(r.code == 0);
    CHECK(r.out.find("[PASS] neutrality") != std::string::npos);
    const auto csv = slurp(out / "report.csv");
    CHECK(csv.rfind("check,instances,worst_margin,passed\n", 0) == 0);
    CHECK(csv.find("neutrality") != std::string::npos);
  }

  SUBCASE("a failing check drives a nonzero exit") {
    const auto broken = dir / "broken.cfg";
    write_text(broken, "seed = 11\ncount = 2\nn = 32\nmax_newton_iters = 1\n");
    const auto r = run_cli("verify --config " + broken.string() + " --only neutrality", dir);
    CHECK(r.code == 2);
    CHECK(r.out.find("[FAIL] neutrality") != std::string::npos);
  }

  SUBCASE("the energy check reports its refinement clause honestly") {
    // The drift itself is orders below tolerance, but halving dt cannot cut an
    // interpolation-dominated drift threefold, so the check must fail and the
    // exit code must say so.
    const auto energy = dir / "energy.cfg";
    write_text(energy,
               "run_energy = 1\nenergy_nx = 32\nenergy_nv = 64\nenergy_v_extent = 6\n"
               "energy_dt = 2e-3\nenergy_t_end = 0.1\nenergy_n_reg = 4\n"
               "energy_sample_every = 5\nenergy_init = perturbed_maxwellian:0.05:1\n");
    const auto r = run_cli("verify --config " + energy.string() + " --only energy-inequality",
                           dir);
    CHECK(r.code == 2);
    CHECK(r.out.find("[FAIL] energy-inequality") != std::string::npos);
    CHECK(r.out.find("ratio") != std::string::npos);
  }

  SUBCASE("unknown check names are usage errors") {
    const auto r = run_cli("verify --config " + cfg.string() + " --only bogus", dir);
    CHECK(r.code == 1);
    CHECK(r.err.find("unknown check 'bogus'") != std::string::npos);
  }

  SUBCASE("reports are deterministic for a seed and the --seed flag overrides the file") {
    const auto a = dir / "rep_a";
    const auto b = dir / "rep_b";
    const auto c = dir / "rep_c";
    const std::string base = "verify --config " + cfg.string() + " --only flat-mass-lower-bound";
    CHECK(run_cli(base + " --seed 5 --out " + a.string(), dir).code == 0);
    CHECK(run_cli(base + " --seed 5 --out " + b.string(), dir).code == 0);
    CHECK(run_cli(base + " --out " + c.string(), dir).code == 0);  // file seed 11
    const auto rep_a = slurp(a / "report.csv");
    CHECK(rep_a == slurp(b / "report.csv"));
    CHECK(rep_a != slurp(c / "report.csv"));
  }
}
