#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "ivp/functionals.hpp"
#include "ivp/grid.hpp"
#include "ivp/pbsolver.hpp"

namespace ivp::vp {

/** Phase-space distribution f(x, v) on [0,1)^d x [-V, V]^d.  Space is the
 *  periodic grid; velocity nodes are cell-centered, v_j = -V + (j + 1/2) hv
 *  with hv = 2V/nv, and f is treated as zero outside the box.  Storage is
 *  row-major with the velocity index fastest. */
class PhaseSpaceField {
 public:
  PhaseSpaceField() = default;

  /** nv even >= 4, v_extent > 0. */
  static PhaseSpaceField make(TorusGrid xgrid, int nv, double v_extent, double fill = 0.0);

  const TorusGrid& xgrid() const { return xgrid_; }
  int nv() const { return nv_; }
  double v_extent() const { return v_extent_; }
  double hv() const { return 2.0 * v_extent_ / nv_; }
  double v_node(int j) const { return -v_extent_ + (j + 0.5) * hv(); }

  std::size_t vsize() const;  // nv^dim
  std::size_t size() const { return values_.size(); }
  double phase_cell_volume() const;

  std::size_t index(std::size_t xflat, std::size_t vflat) const {
    return xflat * vsize() + vflat;
  }
  std::array<int, 3> v_unflatten(std::size_t vflat) const;

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

 private:
  TorusGrid xgrid_{};
  int nv_ = 0;
  double v_extent_ = 0.0;
  std::vector<double> values_;
};

double mass(const PhaseSpaceField& f);

/** Velocity marginal rho(x) = int f dv (cell-centered rectangle rule). */
ScalarField density(const PhaseSpaceField& f);

/** 1/2 int int |v|^2 f dx dv. */
double kinetic_energy(const PhaseSpaceField& f);

/** L^q norm over phase space, q >= 1. */
double lq_norm(const PhaseSpaceField& f, double q);

/** Smooth bump mollifier chi_r(x) = r^d chi(r x) with chi supported in the
 *  ball |y| < 1/4, sampled on the grid and normalized to unit discrete mass.
 *  Requires g.n >= 8 * n_reg so the support spans at least two cells per
 *  radius. */
ScalarField mollifier_kernel(const TorusGrid& g, int n_reg);

struct RegularizedField {
  ScalarField rho_reg;  // chi * rho
  pb::PbSolution sol;   // potential of the mollified density
  VectorField e_n;      // chi * (-grad phi), the doubly mollified field
};

/** Mollify the density, solve the potential, mollify the field. */
RegularizedField regularized_field(const ScalarField& rho, int n_reg,
                                   const pb::PbConfig& cfg = {});

struct StepDiag {
  double mass_before = 0.0;
  double mass_after = 0.0;
  double outflow = 0.0;  // mass lost through the velocity-box boundary
  double clipped = 0.0;  // negative undershoot mass clipped to zero
};

/** One Strang-split step with the given (frozen) field: half x-advection,
 *  full v-advection by -e_n dt, half x-advection.  Interpolation is 4-point
 *  cubic, periodic in x, zero-extended in v; undershoots are clipped to
 *  zero and accounted in diag. */
PhaseSpaceField step(const PhaseSpaceField& f, const VectorField& e_n, double dt,
                     StepDiag* diag = nullptr);

struct VlasovConfig {
  int dim = 1;
  int nx = 64;
  int nv = 128;
  double v_extent = 6.0;
  double dt = 1e-3;
  double t_end = 1.0;
  int n_reg = 4;
  int sample_every = 10;
  double cfl_safety = 0.8;
  std::string init = "maxwellian";
  pb::PbConfig pb;

  void validate() const;  // throws std::invalid_argument
};

/** Build the initial state named by cfg.init: "maxwellian",
 *  "perturbed_maxwellian:<amplitude>:<mode>", or "file:<path>" (phase-space
 *  dump).  Built-in generators zero the outermost velocity layer so the
 *  initial support satisfies the containment requirement. */
PhaseSpaceField initial_state(const VlasovConfig& cfg);

struct TraceRow {
  double t = 0.0;
  EnergyBreakdown energy;
};

struct RunResult {
  std::vector<TraceRow> trace;
  std::vector<std::pair<std::uint64_t, PhaseSpaceField>> snapshots;  // (step index, state)
  double max_drift = 0.0;  // max over samples of |total - total_0| / |total_0|
  bool energy_ok = true;   // total(t) <= total(0) * (1 + energy_tol) throughout
  double mass_initial = 0.0;
  double mass_final = 0.0;
  double outflow_total = 0.0;
  double clipped_total = 0.0;
};

/** Advance f0 to t_end with self-consistent field refresh once per step,
 *  recording the energy trace every sample_every steps plus the final time,
 *  and snapshots at the first and last step.  Throws NumericalError on a
 *  CFL violation or when cumulative outflow exceeds 1e-6 of the initial
 *  mass ("velocity box too small"). */
RunResult run(const VlasovConfig& cfg, const PhaseSpaceField& f0, double energy_tol = 1e-2);

/** Same, building the initial state from cfg.init. */
RunResult run(const VlasovConfig& cfg, double energy_tol = 1e-2);

/** Energy trace as CSV: header t,kinetic,potential,entropy,total with 17
 *  significant digits per value. */
void write_energy_csv(const std::filesystem::path& path, const std::vector<TraceRow>& trace);

}  // namespace ivp::vp
