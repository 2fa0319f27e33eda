#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ivp/config.hpp"
#include "ivp/grid.hpp"
#include "ivp/pbsolver.hpp"
#include "ivp/vlasov.hpp"

namespace ivp::verify {

enum class FamilyKind {
  constant,           // rho = m, log-uniform level
  single_mode,        // rho = b + a cos(2 pi k x + phase), a < b
  random_bandlimited, // random trig polynomial shifted positive
  mollified_sequence, // fixed base density convolved with shrinking bumps
  indicator_smoothed, // box indicator convolved with a bump, plus a floor
};

/** Seeded deterministic generator of valid densities; instance(i) depends
 *  only on (kind, dim, n, seed, i). */
struct DensityFamily {
  FamilyKind kind = FamilyKind::random_bandlimited;
  int dim = 1;
  int n = 64;
  std::uint64_t seed = 1;
  double level_min = 0.2;
  double level_max = 3.0;
  int max_mode = 3;

  ScalarField instance(int i) const;
  std::string describe() const;
};

/** One row of the verification report.  worst_margin is the minimum over
 *  instances of (asserted-larger side) - (asserted-smaller side); the check
 *  passes when worst_margin >= -tolerance, with the tolerance folded into
 *  the margin for equality-style checks (statement says which). */
struct CheckReport {
  std::string check;
  std::string statement;
  int instances = 0;
  double worst_margin = 0.0;
  bool passed = false;
  std::vector<std::string> notes;
};

/** Knobs for every check.  The *_scale / *_tol entries exist both to pin
 *  tolerances and to let a deliberately broken configuration demonstrate
 *  that each check can fail (negative controls). */
struct SuiteConfig {
  std::uint64_t seed = 12345;
  int count = 20;
  int dim = 1;
  int n = 64;
  pb::PbConfig pb;

  double neutrality_tol = 1e-8;
  double lr_slack = 1e-6;
  double lr_scale = 1.0;
  double comparison_tol = 1e-7;
  double bound_scale = 1.0;
  double floor_p = 2.0;
  double slope_margin = 0.05;
  double ratio_bound = 10.0;
  double gautschi_scale = 1.0;
  std::vector<double> stability_p = {1.5, 2.0, 3.0};

  bool run_energy = true;
  vp::VlasovConfig energy_run;  // shrunk defaults; see make_default()
  double energy_tol = 1e-2;
  double energy_ratio_min = 3.0;

  static SuiteConfig make_default();
};

/** Populate a SuiteConfig from flat key = value text (unknown keys are
 *  rejected by view.finish() at the call site). */
SuiteConfig suite_config_from(ConfigView& view);

CheckReport check_neutrality(const DensityFamily& family, int count, const SuiteConfig& cfg);
CheckReport check_lr_bounds(const DensityFamily& family, int count, const std::vector<double>& rs,
                            double p, const SuiteConfig& cfg);
CheckReport check_comparison(const DensityFamily& family, int count, const SuiteConfig& cfg);
CheckReport check_flat_mass_bound(const DensityFamily& family, int count, double p,
                                  const SuiteConfig& cfg);

/** Calibrates the smallest sufficient decay constant on `train`, then
 *  asserts the floor on the disjoint `test` family. */
CheckReport check_electron_floor(const DensityFamily& train, const DensityFamily& test, int count,
                                 double p, const SuiteConfig& cfg);

CheckReport check_stability_exponent(double p, const SuiteConfig& cfg);
CheckReport check_energy_inequality(const SuiteConfig& cfg);
CheckReport check_gautschi(const SuiteConfig& cfg);

/** All checks in a fixed order; `only` (if nonempty) filters by check name. */
std::vector<CheckReport> run_suite(const SuiteConfig& cfg,
                                   const std::vector<std::string>& only = {});

std::string report_csv(const std::vector<CheckReport>& reports);
std::string report_text(const std::vector<CheckReport>& reports);
bool all_passed(const std::vector<CheckReport>& reports);

}  // namespace ivp::verify
