#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <omp.h>

#include "ivp/grid.hpp"
#include "ivp/parallel.hpp"
#include "ivp/pbsolver.hpp"
#include "ivp/vlasov.hpp"

namespace {

double time_best_of(int reps, const std::function<void()>& body) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

volatile double g_sink = 0.0;

void report(const char* name, double serial, double parallel) {
  std::printf("%-28s %10.4f ms %12.4f ms %8.2fx\n", name, serial * 1e3, parallel * 1e3,
              serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  int threads = omp_get_max_threads();
  if (argc > 1) threads = std::max(1, std::atoi(argv[1]));
  std::printf("comparing 1 thread vs %d threads (best of 3)\n\n", threads);
  std::printf("%-28s %13s %15s %9s\n", "kernel", "serial", "parallel", "speedup");

  using namespace ivp;

  // plain reductions on a large vector
  {
    const std::size_t n = std::size_t{1} << 24;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(0.001 * static_cast<double>(i));
    par::set_threads(1);
    const double ts = time_best_of(3, [&] { g_sink = par::sum(x.data(), n); });
    par::set_threads(threads);
    const double tp = time_best_of(3, [&] { g_sink = par::sum(x.data(), n); });
    report("sum reduction (16M)", ts, tp);

    par::set_threads(1);
    const double ds = time_best_of(3, [&] { g_sink = par::dot(x.data(), x.data(), n); });
    par::set_threads(threads);
    const double dp = time_best_of(3, [&] { g_sink = par::dot(x.data(), x.data(), n); });
    report("dot product (16M)", ds, dp);
  }

  // pointwise exponential on a 3-d field
  {
    const auto g = TorusGrid::make(3, 64);
    ScalarField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = 0.3 * std::sin(0.01 * (double)i);
    par::set_threads(1);
    const double ts = time_best_of(3, [&] { g_sink = exp_field(f)[0]; });
    par::set_threads(threads);
    const double tp = time_best_of(3, [&] { g_sink = exp_field(f)[0]; });
    report("exp field (64^3)", ts, tp);
  }

  // one Strang step of the kinetic solver
  {
    vp::VlasovConfig cfg;
    cfg.dim = 1;
    cfg.nx = 256;
    cfg.nv = 1024;
    cfg.init = "perturbed_maxwellian:0.05:1";
    const auto f0 = vp::initial_state(cfg);
    VectorField e;
    ScalarField ex(f0.xgrid());
    for (std::size_t i = 0; i < ex.size(); ++i)
      ex[i] = 0.05 * std::sin(2.0 * std::numbers::pi * f0.xgrid().coords(i)[0]);
    e.comp.push_back(ex);
    par::set_threads(1);
    const double ts = time_best_of(3, [&] { g_sink = vp::step(f0, e, 1e-3)[0]; });
    par::set_threads(threads);
    const double tp = time_best_of(3, [&] { g_sink = vp::step(f0, e, 1e-3)[0]; });
    report("advection step (256x1024)", ts, tp);
  }

  // full nonlinear solve on a 2-d grid
  {
    const auto g = TorusGrid::make(2, 128);
    ScalarField rho(g);
    for (std::size_t i = 0; i < rho.size(); ++i) {
      const auto x = g.coords(i);
      rho[i] = 1.0 + 0.6 * std::cos(2.0 * std::numbers::pi * x[0]) *
                         std::cos(2.0 * std::numbers::pi * x[1]);
    }
    par::set_threads(1);
    const double ts = time_best_of(3, [&] { g_sink = pb::solve_pb(rho).residual; });
    par::set_threads(threads);
    const double tp = time_best_of(3, [&] { g_sink = pb::solve_pb(rho).residual; });
    report("nonlinear solve (128^2)", ts, tp);
  }

  par::set_threads(1);
  return 0;
}
