#pragma once

#include <vector>

#include "ivp/grid.hpp"

namespace ivp::pb {

/** Decomposition of a density at the half-mass threshold.
 *  rho_flat = min(rho, ||rho||_1 / 2), rho_sharp = rho - rho_flat,
 *  m_flat = integrate(rho_flat).  The flat part is bounded, the sharp part
 *  carries the concentrated mass, and rho_flat + rho_sharp reassembles rho
 *  exactly. */
struct FlatSharpSplit {
  ScalarField rho_flat;
  ScalarField rho_sharp;
  double threshold = 0.0;
  double m_flat = 0.0;
};

FlatSharpSplit flat_sharp_split(const ScalarField& rho);

/** Lower bound ||rho||_1/2 * (||rho||_1 / (2 ||rho||_p))^(p/(p-1)) on the
 *  flat mass, valid for any density with finite L^p norm, p > 1.  Both sides
 *  are plain quadratures, so the inequality holds with zero tolerance. */
double m_flat_lower_bound(const ScalarField& rho, double p);

struct PbConfig {
  double newton_tol = 1e-10;   // on ||residual||_2 relative to max(1, ||rho||_2)
  int max_newton_iters = 60;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  ShiftedSolveOptions inner;   // inner linearized solve
};

struct PbSolution {
  ScalarField phi;               // full potential
  VectorField e_field;           // -grad(phi)
  ScalarField electron_density;  // exp(phi), pointwise positive
  double residual = 0.0;         // ||-lap(phi) + exp(phi) - rho||_2
  int iterations = 0;
  double j_value = 0.0;          // objective at the accepted minimizer
  std::vector<double> j_history; // objective after each accepted step
};

/** Objective J[h] = int 1/2 |grad h|^2 + exp(phi_flat + h) - (m_flat +
 *  rho_sharp) h dx.  Strictly convex in h; its stationary point is the
 *  sharp-part potential.  Throws OverflowError when the exponential leaves
 *  the safe range. */
double energy_J(const ScalarField& h, const ScalarField& phi_flat, const ScalarField& rho_sharp,
                double m_flat);

/** Solve -lap(phi) + exp(phi) = rho by the split into a linear flat solve
 *  and a damped Newton iteration (Armijo backtracking on the objective) for
 *  the sharp part.  Guarantees on return: electron_density > 0 pointwise,
 *  residual <= newton_tol * max(1, ||rho||_2), and neutrality
 *  |int exp(phi) - int rho| <= 1e-8 * int rho. */
PbSolution solve_pb(const ScalarField& rho, const PbConfig& cfg = {});

/** Same, but start the Newton iteration from a caller-supplied sharp-part
 *  guess instead of the default log(mass) - phi_flat. */
PbSolution solve_pb(const ScalarField& rho, const PbConfig& cfg, const ScalarField& h0);

struct ComparisonResult {
  double min_gap = 0.0;  // min over nodes of exp(phi_2) - exp(phi_1)
  bool holds = false;    // min_gap >= -tol_comp
};

/** Ordered densities rho_1 <= rho_2 pointwise (checked) give pointwise
 *  ordered electron densities; returns the worst discrete gap. */
ComparisonResult comparison_check(const ScalarField& rho1, const ScalarField& rho2,
                                  double tol_comp = 1e-7, const PbConfig& cfg = {});

struct BoundPair {
  double bound = 0.0;
  double observed_min = 0.0;
};

/** Pointwise electron-density floor
 *  ||rho||_1/2 * (||rho||_1/(2||rho||_p))^(p/(p-1)) * exp(-n_d ||rho||_1)
 *  against the observed min of exp(phi); n_d is a caller-supplied constant
 *  (calibrated empirically by the verify module, never hardcoded). */
BoundPair electron_min_bound(const ScalarField& rho, double p, double n_d,
                             const PbConfig& cfg = {});

/** A-priori solution-size estimate
 *  n_d (||rho||_1 + ||rho||_1^2) + (4 exp(n_d ||rho||_1) Gamma(p' + 3))^{p'}
 *  with p' = p/(p-1).  Throws OverflowError when the power overflows. */
double c1_estimate(const ScalarField& rho, double p, double n_d);

}  // namespace ivp::pb
