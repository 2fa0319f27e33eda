#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ivp/config.hpp"
#include "ivp/functionals.hpp"
#include "ivp/grid.hpp"
#include "ivp/io.hpp"
#include "ivp/parallel.hpp"
#include "ivp/pbsolver.hpp"
#include "ivp/verify.hpp"
#include "ivp/vlasov.hpp"

namespace {

namespace fsys = std::filesystem;

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse " + what + " from '" + text + "'");
  }
  if (used != text.size())
    throw std::invalid_argument("trailing characters in " + what + ": '" + text + "'");
  return v;
}

ivp::ScalarField build_density(const std::string& init, int dim, int nx) {
  using ivp::ScalarField;
  using ivp::TorusGrid;
  if (init.rfind("constant:", 0) == 0) {
    const double m = parse_number(init.substr(9), "constant level");
    if (!(m > 0.0)) throw std::invalid_argument("constant density level must be positive");
    return ScalarField(TorusGrid::make(dim, nx), m);
  }
  if (init.rfind("single_mode:", 0) == 0) {
    const auto rest = init.substr(12);
    const auto c1 = rest.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos : rest.find(':', c1 + 1);
    if (c2 == std::string::npos)
      throw std::invalid_argument("expected single_mode:<level>:<amplitude>:<mode>");
    const double b = parse_number(rest.substr(0, c1), "level");
    const double a = parse_number(rest.substr(c1 + 1, c2 - c1 - 1), "amplitude");
    const double kd = parse_number(rest.substr(c2 + 1), "mode");
    const int k = static_cast<int>(kd);
    if (!(b > 0.0) || a < 0.0 || a >= b)
      throw std::invalid_argument("single_mode needs 0 <= amplitude < level");
    if (kd != k || k < 1) throw std::invalid_argument("single_mode mode must be a positive integer");
    const auto g = TorusGrid::make(dim, nx);
    ScalarField f(g);
    for (std::size_t i = 0; i < f.size(); ++i)
      f[i] = b + a * std::cos(2.0 * std::numbers::pi * k * g.coords(i)[0]);
    return f;
  }
  if (init.rfind("file:", 0) == 0) return ivp::io::read_field(init.substr(5));
  throw std::invalid_argument("unknown init '" + init +
                              "' (expected constant:<m>, single_mode:<b>:<a>:<k>, or file:<path>)");
}

void require_out(const std::string& out) {
  if (out.empty()) throw std::invalid_argument("--out is required for this command");
  fsys::create_directories(out);
}

int cmd_pb_solve(const std::string& init, int dim, int nx, const std::string& out) {
  require_out(out);
  const auto rho = build_density(init, dim, nx);
  const auto sol = ivp::pb::solve_pb(rho);
  const fsys::path dir(out);
  ivp::io::write_field(dir / "phi.ivpf", sol.phi);
  ivp::io::write_field(dir / "electron_density.ivpf", sol.electron_density);
  for (std::size_t a = 0; a < sol.e_field.comp.size(); ++a)
    ivp::io::write_field(dir / ("e_field_" + std::to_string(a) + ".ivpf"), sol.e_field.comp[a]);
  std::printf("iters=%d residual=%.17g J=%.17g\n", sol.iterations, sol.residual, sol.j_value);
  return 0;
}

ivp::vp::VlasovConfig vlasov_config_from(ivp::ConfigView& view) {
  ivp::vp::VlasovConfig vc;
  vc.dim = view.get_int("dim", vc.dim);
  vc.nx = view.get_int("nx", vc.nx);
  vc.nv = view.get_int("nv", vc.nv);
  vc.v_extent = view.get_double("v_extent", vc.v_extent);
  vc.dt = view.get_double("dt", vc.dt);
  vc.t_end = view.get_double("t_end", vc.t_end);
  vc.n_reg = view.get_int("n_reg", vc.n_reg);
  vc.sample_every = view.get_int("sample_every", vc.sample_every);
  vc.cfl_safety = view.get_double("cfl_safety", vc.cfl_safety);
  vc.init = view.get_string("init", vc.init);
  vc.pb.newton_tol = view.get_double("newton_tol", vc.pb.newton_tol);
  vc.pb.max_newton_iters = view.get_int("max_newton_iters", vc.pb.max_newton_iters);
  return vc;
}

int cmd_vp_run(const std::string& config_path, const std::string& out) {
  require_out(out);
  if (config_path.empty()) throw std::invalid_argument("--config is required for vp-run");
  auto values = ivp::parse_config_file(config_path);
  ivp::ConfigView view(values);
  const auto vc = vlasov_config_from(view);
  const double energy_tol = view.get_double("energy_tol", 1e-2);
  view.finish();

  const auto result = ivp::vp::run(vc, energy_tol);
  const fsys::path dir(out);
  ivp::vp::write_energy_csv(dir / "energy.csv", result.trace);
  for (const auto& [step, state] : result.snapshots) {
    char name[48];
    std::snprintf(name, sizeof name, "snapshot_%06llu.ivpf",
                  static_cast<unsigned long long>(step));
    ivp::io::write_phase_space(dir / name, state, step);
  }
  std::printf("steps=%llu mass_initial=%.17g mass_final=%.17g outflow=%.3g clipped=%.3g "
              "max_drift=%.6g energy_ok=%s\n",
              static_cast<unsigned long long>(result.snapshots.back().first),
              result.mass_initial, result.mass_final, result.outflow_total, result.clipped_total,
              result.max_drift, result.energy_ok ? "true" : "false");
  return result.energy_ok ? 0 : 2;
}

int cmd_verify(const std::string& config_path, const std::vector<std::string>& only,
               const std::string& out, std::optional<std::uint64_t> seed) {
  ivp::verify::SuiteConfig cfg = ivp::verify::SuiteConfig::make_default();
  if (!config_path.empty()) {
    auto values = ivp::parse_config_file(config_path);
    ivp::ConfigView view(values);
    cfg = ivp::verify::suite_config_from(view);
    view.finish();
  }
  if (seed) cfg.seed = *seed;
  const auto reports = ivp::verify::run_suite(cfg, only);
  if (!out.empty()) {
    fsys::create_directories(out);
    std::ofstream file(fsys::path(out) / "report.csv", std::ios::binary);
    file << ivp::verify::report_csv(reports);
    if (!file) throw std::runtime_error("cannot write report.csv");
  }
  std::fputs(ivp::verify::report_text(reports).c_str(), stdout);
  return ivp::verify::all_passed(reports) ? 0 : 2;
}

int cmd_thresholds(std::optional<int> dim) {
  if (dim) {
    std::printf("%.7f\n", ivp::weak_solution_threshold(*dim));
    return 0;
  }
  std::printf("dim  q_threshold\n");
  std::printf("2    %.7f\n", ivp::weak_solution_threshold(2));
  std::printf("3    %.7f\n", ivp::weak_solution_threshold(3));
  std::printf("4+   %.7f\n", ivp::weak_solution_threshold(4));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisson-Boltzmann solver and regularized ionic Vlasov-Poisson toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  int threads = 1;
  std::string out;
  std::string config_path;
  std::uint64_t seed_value = 0;
  app.add_option("--threads", threads, "worker thread count")->check(CLI::PositiveNumber);
  app.add_option("--out", out, "output directory");
  app.add_option("--config", config_path, "flat key = value configuration file");
  auto* seed_opt = app.add_option("--seed", seed_value, "seed override for generated families");

  auto* pb = app.add_subcommand("pb-solve", "solve -Laplace(phi) + e^phi = rho and dump fields");
  std::string init;
  int dim = 1;
  int nx = 64;
  pb->add_option("--init", init, "constant:<m> | single_mode:<b>:<a>:<k> | file:<path>")
      ->required();
  pb->add_option("--dim", dim, "spatial dimension (1, 2, 3)");
  pb->add_option("--nx", nx, "nodes per axis");

  auto* vp = app.add_subcommand("vp-run", "run the regularized Vlasov-Poisson simulation");
  auto* vf = app.add_subcommand("verify", "run the property-check suite");
  std::vector<std::string> only;
  vf->add_option("--only", only, "comma-separated check names")->delimiter(',');

  auto* th = app.add_subcommand("thresholds", "print weak-solution integrability thresholds");
  std::optional<int> th_dim;
  th->add_option("--dim", th_dim, "dimension (>= 2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    ivp::par::set_threads(threads);
    std::optional<std::uint64_t> seed;
    if (seed_opt->count() > 0) seed = seed_value;
    if (*pb) return cmd_pb_solve(init, dim, nx, out);
    if (*vp) return cmd_vp_run(config_path, out);
    if (*vf) return cmd_verify(config_path, only, out, seed);
    if (*th) return cmd_thresholds(th_dim);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const ivp::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "failure: %s\n", e.what());
    return 2;
  }
  return 1;
}
