#pragma once

#include "ivp/pbsolver.hpp"

namespace ivp::vp {
class PhaseSpaceField;
}

namespace ivp {

/** Field energy 1/2 int |grad phi|^2 dx of a solved potential. */
double potential_energy(const pb::PbSolution& sol);

/** Thermal term int exp(phi) (phi - 1) + 1 dx; the integrand is pointwise
 *  nonnegative, so the result is >= 0 up to roundoff. */
double entropy(const pb::PbSolution& sol);

struct EnergyBreakdown {
  double kinetic = 0.0;
  double potential = 0.0;
  double entropy = 0.0;
  double total = 0.0;  // always the exact sum of the three parts
};

/** Kinetic part 1/2 int int |v|^2 f dx dv plus the field terms of sol. */
EnergyBreakdown total_energy(const vp::PhaseSpaceField& f, const pb::PbSolution& sol);

struct StabilityPair {
  double grad_diff_l2 = 0.0;  // || grad(phi_1 - phi_2) ||_2
  double phi_diff_lq = 0.0;   // || phi_1 - phi_2 ||_q
  double rho_diff_lp = 0.0;   // || rho_1 - rho_2 ||_p
};

/** Distances entering the strong-stability estimate: solve both densities
 *  and measure the potential and density gaps in the indicated norms. */
StabilityPair stability_pair(const ScalarField& rho1, const ScalarField& rho2, double p, double q,
                             const pb::PbConfig& cfg = {});

struct GautschiPair {
  double lhs = 0.0;  // (exp(s) - 1) s
  double rhs = 0.0;  // s^q / Gamma(q)
};

/** Both sides of the convexity inequality (e^s - 1) s >= s^q / Gamma(q),
 *  valid for s >= 0, q >= 2 (preconditions checked). */
GautschiPair gautschi_check(double s, double q);

/** Exponent p(d, q) = (d(q-1) + 2q) / (d(q-1) + 2) from the interpolation
 *  step; q > 1 required.  Decreases to 1 as q -> 1+. */
double interpolation_exponent(int d, double q);

/** Integrability threshold above which weak solutions exist: 2 for d >= 4,
 *  (12 + 3 sqrt 5)/11 for d = 3, (7 + sqrt 17)/8 for d = 2.  d >= 2
 *  required. */
double weak_solution_threshold(int d);

}  // namespace ivp
