#include "ivp/functionals.hpp"

#include <cmath>
#include <numbers>

#include "ivp/parallel.hpp"
#include "ivp/vlasov.hpp"

namespace ivp {

double potential_energy(const pb::PbSolution& sol) {
  const double cv = sol.phi.grid().cell_volume();
  double s = 0.0;
  for (const auto& c : sol.e_field.comp) s += cv * par::dot(c.data(), c.data(), c.size());
  return 0.5 * s;
}

double entropy(const pb::PbSolution& sol) {
  const auto& ed = sol.electron_density;
  const auto& phi = sol.phi;
  const double cv = phi.grid().cell_volume();
  const double value = cv * par::sum_transform(phi.size(), [&](std::size_t i) {
    return ed[i] * (phi[i] - 1.0) + 1.0;
  });
  if (value < -1e-12)
    throw NumericalError("entropy: negative value " + std::to_string(value) +
                         " from a pointwise nonnegative integrand");
  return value;
}

EnergyBreakdown total_energy(const vp::PhaseSpaceField& f, const pb::PbSolution& sol) {
  EnergyBreakdown e;
  e.kinetic = vp::kinetic_energy(f);
  e.potential = potential_energy(sol);
  e.entropy = entropy(sol);
  e.total = e.kinetic + e.potential + e.entropy;
  return e;
}

StabilityPair stability_pair(const ScalarField& rho1, const ScalarField& rho2, double p, double q,
                             const pb::PbConfig& cfg) {
  if (!(p >= 1.0)) throw std::invalid_argument("stability_pair: p must be >= 1");
  if (!(q >= 1.0)) throw std::invalid_argument("stability_pair: q must be >= 1");
  const auto s1 = solve_pb(rho1, cfg);
  const auto s2 = solve_pb(rho2, cfg);
  const auto dphi = s1.phi - s2.phi;
  const auto grad = gradient(dphi);
  const double cv = dphi.grid().cell_volume();
  double g2 = 0.0;
  for (const auto& c : grad.comp) g2 += cv * par::dot(c.data(), c.data(), c.size());
  StabilityPair out;
  out.grad_diff_l2 = std::sqrt(g2);
  out.phi_diff_lq = lp_norm(dphi, q);
  out.rho_diff_lp = lp_norm(rho1 - rho2, p);
  return out;
}

GautschiPair gautschi_check(double s, double q) {
  if (!(s >= 0.0)) throw std::invalid_argument("gautschi_check: s must be >= 0");
  if (!(q >= 2.0)) throw std::invalid_argument("gautschi_check: q must be >= 2");
  GautschiPair out;
  out.lhs = std::expm1(s) * s;
  out.rhs = std::pow(s, q) / std::tgamma(q);
  return out;
}

double interpolation_exponent(int d, double q) {
  if (d < 1) throw std::invalid_argument("interpolation_exponent: d must be >= 1");
  if (!(q > 1.0)) throw std::invalid_argument("interpolation_exponent: q must be > 1");
  const double dd = static_cast<double>(d);
  return (dd * (q - 1.0) + 2.0 * q) / (dd * (q - 1.0) + 2.0);
}

double weak_solution_threshold(int d) {
  if (d < 2) throw std::invalid_argument("weak_solution_threshold: d must be >= 2");
  if (d == 2) return (7.0 + std::sqrt(17.0)) / 8.0;
  if (d == 3) return (12.0 + 3.0 * std::sqrt(5.0)) / 11.0;
  return 2.0;
}

}  // namespace ivp
