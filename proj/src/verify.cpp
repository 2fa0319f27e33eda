#include "ivp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "ivp/functionals.hpp"

namespace ivp::verify {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/* Uniform in [0,1) built from raw engine output so that generated families
 * do not depend on the standard library's distribution internals. */
double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t index, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(salt)};
  return std::mt19937_64(seq);
}

/* Random trigonometric polynomial with modes |k_a| <= max_mode, mean zero. */
ScalarField trig_poly(const TorusGrid& g, std::mt19937_64& rng, int max_mode) {
  ScalarField f(g);
  const int width = 2 * max_mode + 1;
  std::size_t combos = 1;
  for (int a = 0; a < g.dim; ++a) combos *= static_cast<std::size_t>(width);
  for (std::size_t c = 0; c < combos; ++c) {
    std::array<int, 3> k{0, 0, 0};
    std::size_t rest = c;
    for (int a = g.dim - 1; a >= 0; --a) {
      k[a] = static_cast<int>(rest % width) - max_mode;
      rest /= width;
    }
    int first = 0;
    for (int a = 0; a < g.dim; ++a)
      if (k[a] != 0) {
        first = k[a];
        break;
      }
    if (first <= 0) continue;  // one representative per conjugate pair
    double ksq = 0.0;
    for (int a = 0; a < g.dim; ++a) ksq += static_cast<double>(k[a]) * k[a];
    const double amp = u01(rng) / (1.0 + ksq);
    const double phase = kTwoPi * u01(rng);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto x = g.coords(i);
      double arg = phase;
      for (int a = 0; a < g.dim; ++a) arg += kTwoPi * k[a] * x[a];
      f[i] += amp * std::cos(arg);
    }
  }
  return f;
}

/* Smoothed box indicator with values in [0,1]: a random axis-aligned box
 * convolved with the bump kernel, undershoots clamped. */
ScalarField smoothed_box(const TorusGrid& g, std::mt19937_64& rng) {
  std::array<double, 3> center{0, 0, 0};
  std::array<double, 3> half{0, 0, 0};
  for (int a = 0; a < g.dim; ++a) {
    center[a] = u01(rng);
    half[a] = 0.05 + 0.15 * u01(rng);
  }
  ScalarField box(g);
  for (std::size_t i = 0; i < box.size(); ++i) {
    const auto x = g.coords(i);
    bool inside = true;
    for (int a = 0; a < g.dim; ++a) {
      double d = std::fabs(x[a] - center[a]);
      d = std::min(d, 1.0 - d);
      if (d > half[a]) inside = false;
    }
    box[i] = inside ? 1.0 : 0.0;
  }
  // guarantee a nonempty box on coarse grids
  std::array<int, 3> nearest{0, 0, 0};
  for (int a = 0; a < g.dim; ++a)
    nearest[a] = static_cast<int>(std::llround(center[a] * g.n)) % g.n;
  box[box.grid().flatten(nearest)] = 1.0;

  const int n_reg = std::max(1, g.n / 16);
  auto smooth = convolve(vp::mollifier_kernel(g, n_reg), box);
  for (std::size_t i = 0; i < smooth.size(); ++i)
    smooth[i] = std::clamp(smooth[i], 0.0, 1.0);
  return smooth;
}

void clamp_nonnegative(ScalarField& f) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] < 0.0) f[i] = 0.0;
}

}  // namespace

ScalarField DensityFamily::instance(int i) const {
  const auto g = TorusGrid::make(dim, n);
  switch (kind) {
    case FamilyKind::constant: {
      auto rng = instance_rng(seed, static_cast<std::uint64_t>(i), 1);
      const double m =
          std::exp(std::log(level_min) + u01(rng) * (std::log(level_max) - std::log(level_min)));
      return ScalarField(g, m);
    }
    case FamilyKind::single_mode: {
      auto rng = instance_rng(seed, static_cast<std::uint64_t>(i), 2);
      const double b = 0.5 + 1.5 * u01(rng);
      const double a = 0.9 * b * u01(rng);
      const int k = 1 + static_cast<int>(u01(rng) * max_mode) % std::max(1, max_mode);
      const double phase = kTwoPi * u01(rng);
      ScalarField f(g);
      for (std::size_t j = 0; j < f.size(); ++j)
        f[j] = b + a * std::cos(kTwoPi * k * g.coords(j)[0] + phase);
      return f;
    }
    case FamilyKind::random_bandlimited: {
      auto rng = instance_rng(seed, static_cast<std::uint64_t>(i), 3);
      auto f = trig_poly(g, rng, max_mode);
      const double mn = *std::min_element(f.values().begin(), f.values().end());
      const double floor = level_min + u01(rng) * (1.0 - level_min);
      for (std::size_t j = 0; j < f.size(); ++j) f[j] += floor - mn;
      return f;
    }
    case FamilyKind::mollified_sequence: {
      auto rng = instance_rng(seed, 0, 4);  // base independent of i
      auto base = trig_poly(g, rng, max_mode);
      const double mn = *std::min_element(base.values().begin(), base.values().end());
      for (std::size_t j = 0; j < base.size(); ++j) base[j] += 0.5 - mn;
      const int n_reg = 1 << i;
      if (i < 0 || 8 * n_reg > n)
        throw std::invalid_argument(
            "mollified_sequence: instance " + std::to_string(i) +
            " needs n >= " + std::to_string(8 * n_reg));
      auto f = convolve(vp::mollifier_kernel(g, n_reg), base);
      clamp_nonnegative(f);
      return f;
    }
    case FamilyKind::indicator_smoothed: {
      auto rng = instance_rng(seed, static_cast<std::uint64_t>(i), 5);
      const double floor = 0.2 + 0.3 * u01(rng);
      const double amp = 0.5 + u01(rng);
      auto f = smoothed_box(g, rng);
      for (std::size_t j = 0; j < f.size(); ++j) f[j] = floor + amp * f[j];
      return f;
    }
  }
  throw std::invalid_argument("DensityFamily: unknown kind");
}

std::string DensityFamily::describe() const {
  const char* name = "?";
  switch (kind) {
    case FamilyKind::constant: name = "constant"; break;
    case FamilyKind::single_mode: name = "single_mode"; break;
    case FamilyKind::random_bandlimited: name = "random_bandlimited"; break;
    case FamilyKind::mollified_sequence: name = "mollified_sequence"; break;
    case FamilyKind::indicator_smoothed: name = "indicator_smoothed"; break;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s(dim=%d, n=%d, seed=%llu)", name, dim, n,
                static_cast<unsigned long long>(seed));
  return buf;
}

/* ---------------- checks ---------------- */

namespace {

void fold_in(CheckReport& r, double margin) {
  r.worst_margin = r.instances == 0 ? margin : std::min(r.worst_margin, margin);
  ++r.instances;
}

void record_failure(CheckReport& r, int instance, const std::exception& e) {
  fold_in(r, -1.0);
  r.notes.push_back("instance " + std::to_string(instance) + ": " + e.what());
}

void finish(CheckReport& r, double tolerance) {
  r.passed = r.instances > 0 && r.worst_margin >= -tolerance;
}

}  // namespace

CheckReport check_neutrality(const DensityFamily& family, int count, const SuiteConfig& cfg) {
  CheckReport r;
  r.check = "neutrality";
  char stmt[128];
  std::snprintf(stmt, sizeof stmt,
                "relative gap |int e^phi - int rho| / int rho <= %.3g (folded into margin)",
                cfg.neutrality_tol);
  r.statement = stmt;
  for (int i = 0; i < count; ++i) {
    try {
      const auto rho = family.instance(i);
      const auto sol = pb::solve_pb(rho, cfg.pb);
      const double m = integrate(rho);
      const double gap = std::fabs(integrate(sol.electron_density) - m) / m;
      fold_in(r, cfg.neutrality_tol - gap);
    } catch (const NumericalError& e) {
      record_failure(r, i, e);
    }
  }
  finish(r, 0.0);
  return r;
}

CheckReport check_lr_bounds(const DensityFamily& family, int count, const std::vector<double>& rs,
                            double p, const SuiteConfig& cfg) {
  if (rs.empty()) throw std::invalid_argument("check_lr_bounds: empty exponent list");
  for (double rr : rs)
    if (!(rr >= 1.0 && rr <= p))
      throw std::invalid_argument("check_lr_bounds: exponents must lie in [1, p]");
  CheckReport r;
  r.check = "electron-lr-bound";
  std::ostringstream st;
  st << "||e^phi||_r <= ||rho||_r * (1 + " << cfg.lr_slack << ") for r in {";
  for (std::size_t j = 0; j < rs.size(); ++j) st << (j ? ", " : "") << rs[j];
  st << "}";
  r.statement = st.str();
  for (int i = 0; i < count; ++i) {
    try {
      const auto rho = family.instance(i);
      const auto sol = pb::solve_pb(rho, cfg.pb);
      for (double rr : rs) {
        const double lhs = lp_norm(sol.electron_density, rr);
        const double rhs = lp_norm(rho, rr) * (1.0 + cfg.lr_slack) * cfg.lr_scale;
        fold_in(r, rhs - lhs);
      }
    } catch (const NumericalError& e) {
      record_failure(r, i, e);
    }
  }
  finish(r, 0.0);
  return r;
}

CheckReport check_comparison(const DensityFamily& family, int count, const SuiteConfig& cfg) {
  CheckReport r;
  r.check = "comparison-principle";
  char stmt[128];
  std::snprintf(stmt, sizeof stmt,
                "rho1 <= rho2 pointwise implies min(e^phi2 - e^phi1) >= -%.3g", cfg.comparison_tol);
  r.statement = stmt;
  for (int i = 0; i < count; ++i) {
    try {
      const auto rho1 = family.instance(i);
      auto rng = instance_rng(family.seed, static_cast<std::uint64_t>(i), 6);
      auto bump = smoothed_box(rho1.grid(), rng);
      auto rho2 = rho1;
      for (std::size_t j = 0; j < rho2.size(); ++j) rho2[j] += 0.2 * bump[j];
      const auto res = pb::comparison_check(rho1, rho2, cfg.comparison_tol, cfg.pb);
      fold_in(r, res.min_gap);
    } catch (const NumericalError& e) {
      record_failure(r, i, e);
    }
  }
  finish(r, cfg.comparison_tol);
  return r;
}

CheckReport check_flat_mass_bound(const DensityFamily& family, int count, double p,
                                  const SuiteConfig& cfg) {
  CheckReport r;
  r.check = "flat-mass-lower-bound";
  char stmt[160];
  std::snprintf(stmt, sizeof stmt,
                "flat mass >= (m/2) * (m / (2 ||rho||_p))^(p/(p-1)) with p = %.3g, zero tolerance",
                p);
  r.statement = stmt;
  for (int i = 0; i < count; ++i) {
    try {
      const auto rho = family.instance(i);
      const auto split = pb::flat_sharp_split(rho);
      const double bound = pb::m_flat_lower_bound(rho, p) * cfg.bound_scale;
      fold_in(r, split.m_flat - bound);
    } catch (const NumericalError& e) {
      record_failure(r, i, e);
    }
  }
  finish(r, 0.0);
  return r;
}

CheckReport check_electron_floor(const DensityFamily& train, const DensityFamily& test, int count,
                                 double p, const SuiteConfig& cfg) {
  CheckReport r;
  r.check = "electron-min-bound";
  // Calibrate the decay constant on the training set: smallest n_d whose
  // floor holds per instance, then a fixed safety factor so the held-out
  // assertion is not a coin flip on the family's tail.
  double required = 0.0;
  for (int i = 0; i < count; ++i) {
    const auto rho = train.instance(i);
    const auto sol = pb::solve_pb(rho, cfg.pb);
    const double flb = pb::m_flat_lower_bound(rho, p);
    const double me = *std::min_element(sol.electron_density.values().begin(),
                                        sol.electron_density.values().end());
    const double m1 = integrate(rho);
    if (flb > me) required = std::max(required, std::log(flb / me) / m1);
  }
  const double n_d = required * 1.25 + 0.1;
  char stmt[160];
  std::snprintf(stmt, sizeof stmt,
                "min e^phi >= flat-mass bound * exp(-n_d ||rho||_1), n_d = %.6g calibrated on a "
                "disjoint training set",
                n_d);
  r.statement = stmt;
  for (int i = 0; i < count; ++i) {
    try {
      const auto rho = test.instance(i);
      const auto pair = pb::electron_min_bound(rho, p, n_d, cfg.pb);
      fold_in(r, pair.observed_min - pair.bound * cfg.bound_scale);
    } catch (const NumericalError& e) {
      record_failure(r, i, e);
    }
  }
  finish(r, 0.0);
  return r;
}

CheckReport check_stability_exponent(double p, const SuiteConfig& cfg) {
  CheckReport r;
  r.check = "stability-exponent";
  const double target = p / std::max(p, 2.0) - cfg.slope_margin;
  char stmt[192];
  std::snprintf(stmt, sizeof stmt,
                "log-log slope of ||grad(phi1-phi2)||_2 vs ||rho1-rho2||_p >= %.4g (p = %.3g) and "
                "the matched-exponent ratio stays <= %.3g",
                target, p, cfg.ratio_bound);
  r.statement = stmt;

  const std::vector<double> eps = {1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
  const auto g = TorusGrid::make(cfg.dim, cfg.n);
  const ScalarField one(g, 1.0);
  std::vector<double> lx, ly;
  double ratio_max = 0.0;
  const double q = 2.0;
  try {
    for (double e : eps) {
      ScalarField rho2(g);
      for (std::size_t j = 0; j < rho2.size(); ++j)
        rho2[j] = 1.0 + e * std::cos(kTwoPi * g.coords(j)[0]);
      const auto pair = stability_pair(one, rho2, p, q, cfg.pb);
      lx.push_back(std::log(pair.rho_diff_lp));
      ly.push_back(std::log(pair.grad_diff_l2));
      const double ratio = std::pow(pair.phi_diff_lq, 2.0 * q / std::min(q, 2.0)) /
                           std::pow(pair.rho_diff_lp, 2.0 * p / std::max(p, 2.0));
      ratio_max = std::max(ratio_max, ratio);
      ++r.instances;
    }
  } catch (const NumericalError& e) {
    record_failure(r, r.instances, e);
    finish(r, 0.0);
    return r;
  }
  if (lx.size() < 4) throw std::invalid_argument("stability check needs at least 4 epsilons");
  // least-squares slope
  const auto n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  char note[96];
  std::snprintf(note, sizeof note, "slope = %.6g, worst ratio = %.6g", slope, ratio_max);
  r.notes.push_back(note);
  r.worst_margin = std::min(slope - target, cfg.ratio_bound - ratio_max);
  r.passed = r.worst_margin >= 0.0;
  return r;
}

CheckReport check_gautschi(const SuiteConfig& cfg) {
  CheckReport r;
  r.check = "gautschi";
  r.statement =
      "(e^s - 1) s >= s^q / Gamma(q) on a 20 x 10 grid of (s, q) in [0, 20] x [2, 8], lhs "
      "rounded up by 1e-12 relative";
  for (int j = 0; j < 20; ++j) {
    const double s = 20.0 * j / 19.0;
    for (int k = 0; k < 10; ++k) {
      const double q = 2.0 + 6.0 * k / 9.0;
      const auto pair = gautschi_check(s, q);
      fold_in(r, pair.lhs * (1.0 + 1e-12) - pair.rhs * cfg.gautschi_scale);
    }
  }
  finish(r, 0.0);
  return r;
}

CheckReport check_energy_inequality(const SuiteConfig& cfg) {
  CheckReport r;
  r.check = "energy-inequality";
  char stmt[192];
  std::snprintf(stmt, sizeof stmt,
                "total(t) <= total(0) * (1 + %.3g) along the run, and halving dt shrinks the "
                "drift by >= %.3g",
                cfg.energy_tol, cfg.energy_ratio_min);
  r.statement = stmt;
  try {
    const auto coarse = vp::run(cfg.energy_run, cfg.energy_tol);
    auto half = cfg.energy_run;
    half.dt *= 0.5;
    half.sample_every *= 2;
    const auto fine = vp::run(half, cfg.energy_tol);

    const double total0 = coarse.trace.front().energy.total;
    double margin_e = 0.0;
    bool first = true;
    for (const auto& row : coarse.trace) {
      const double m = (total0 * (1.0 + cfg.energy_tol) - row.energy.total) / std::fabs(total0);
      margin_e = first ? m : std::min(margin_e, m);
      first = false;
    }
    const double ratio = fine.max_drift > 0.0
                             ? coarse.max_drift / fine.max_drift
                             : cfg.energy_ratio_min + 1.0;
    char note[128];
    std::snprintf(note, sizeof note, "drift %.6g at dt, %.6g at dt/2, ratio %.4g",
                  coarse.max_drift, fine.max_drift, ratio);
    r.notes.push_back(note);
    r.instances = static_cast<int>(coarse.trace.size() + fine.trace.size());
    r.worst_margin = std::min(margin_e, ratio - cfg.energy_ratio_min);
    r.passed = r.worst_margin >= 0.0;
  } catch (const NumericalError& e) {
    record_failure(r, 0, e);
    finish(r, 0.0);
  }
  return r;
}

/* ---------------- suite ---------------- */

SuiteConfig SuiteConfig::make_default() {
  SuiteConfig cfg;
  cfg.energy_run.dim = 1;
  cfg.energy_run.nx = 32;
  cfg.energy_run.nv = 64;
  cfg.energy_run.v_extent = 6.0;
  cfg.energy_run.dt = 2e-3;
  cfg.energy_run.t_end = 0.2;
  cfg.energy_run.n_reg = 4;
  cfg.energy_run.sample_every = 10;
  cfg.energy_run.init = "perturbed_maxwellian:0.05:1";
  return cfg;
}

SuiteConfig suite_config_from(ConfigView& view) {
  SuiteConfig cfg = SuiteConfig::make_default();
  cfg.seed = view.get_u64("seed", cfg.seed);
  cfg.count = view.get_int("count", cfg.count);
  cfg.dim = view.get_int("dim", cfg.dim);
  cfg.n = view.get_int("n", cfg.n);
  cfg.pb.newton_tol = view.get_double("newton_tol", cfg.pb.newton_tol);
  cfg.pb.max_newton_iters = view.get_int("max_newton_iters", cfg.pb.max_newton_iters);
  cfg.neutrality_tol = view.get_double("neutrality_tol", cfg.neutrality_tol);
  cfg.lr_slack = view.get_double("lr_slack", cfg.lr_slack);
  cfg.lr_scale = view.get_double("lr_scale", cfg.lr_scale);
  cfg.comparison_tol = view.get_double("comparison_tol", cfg.comparison_tol);
  cfg.bound_scale = view.get_double("bound_scale", cfg.bound_scale);
  cfg.floor_p = view.get_double("floor_p", cfg.floor_p);
  cfg.slope_margin = view.get_double("slope_margin", cfg.slope_margin);
  cfg.ratio_bound = view.get_double("ratio_bound", cfg.ratio_bound);
  cfg.gautschi_scale = view.get_double("gautschi_scale", cfg.gautschi_scale);
  cfg.run_energy = view.get_int("run_energy", cfg.run_energy ? 1 : 0) != 0;
  cfg.energy_tol = view.get_double("energy_tol", cfg.energy_tol);
  cfg.energy_ratio_min = view.get_double("energy_ratio_min", cfg.energy_ratio_min);
  cfg.energy_run.nx = view.get_int("energy_nx", cfg.energy_run.nx);
  cfg.energy_run.nv = view.get_int("energy_nv", cfg.energy_run.nv);
  cfg.energy_run.v_extent = view.get_double("energy_v_extent", cfg.energy_run.v_extent);
  cfg.energy_run.dt = view.get_double("energy_dt", cfg.energy_run.dt);
  cfg.energy_run.t_end = view.get_double("energy_t_end", cfg.energy_run.t_end);
  cfg.energy_run.n_reg = view.get_int("energy_n_reg", cfg.energy_run.n_reg);
  cfg.energy_run.sample_every = view.get_int("energy_sample_every", cfg.energy_run.sample_every);
  cfg.energy_run.init = view.get_string("energy_init", cfg.energy_run.init);
  return cfg;
}

std::vector<CheckReport> run_suite(const SuiteConfig& cfg, const std::vector<std::string>& only) {
  static const std::vector<std::string> known = {
      "neutrality",     "electron-lr-bound",     "comparison-principle",
      "flat-mass-lower-bound", "electron-min-bound", "stability-exponent",
      "gautschi",       "energy-inequality"};
  for (const auto& name : only)
    if (std::find(known.begin(), known.end(), name) == known.end())
      throw std::invalid_argument("unknown check '" + name + "'");
  const auto wanted = [&](const std::string& name) {
    return only.empty() || std::find(only.begin(), only.end(), name) != only.end();
  };

  DensityFamily base;
  base.kind = FamilyKind::random_bandlimited;
  base.dim = cfg.dim;
  base.n = cfg.n;

  std::vector<CheckReport> out;
  if (wanted("neutrality")) {
    auto fam = base;
    fam.seed = cfg.seed;
    out.push_back(check_neutrality(fam, cfg.count, cfg));
  }
  if (wanted("electron-lr-bound")) {
    auto fam = base;
    fam.seed = cfg.seed + 10;
    out.push_back(check_lr_bounds(fam, cfg.count, {1.25, 1.5, 2.0}, 2.0, cfg));
  }
  if (wanted("comparison-principle")) {
    auto fam = base;
    fam.seed = cfg.seed + 20;
    out.push_back(check_comparison(fam, cfg.count, cfg));
  }
  if (wanted("flat-mass-lower-bound")) {
    auto fam = base;
    fam.seed = cfg.seed + 30;
    out.push_back(check_flat_mass_bound(fam, cfg.count, cfg.floor_p, cfg));
  }
  if (wanted("electron-min-bound")) {
    auto train = base;
    train.seed = cfg.seed + 40;
    auto test = base;
    test.seed = cfg.seed + 41;
    out.push_back(check_electron_floor(train, test, cfg.count, cfg.floor_p, cfg));
  }
  if (wanted("stability-exponent")) {
    CheckReport merged;
    bool first = true;
    for (double p : cfg.stability_p) {
      auto r = check_stability_exponent(p, cfg);
      if (first) {
        merged = r;
        first = false;
      } else {
        merged.instances += r.instances;
        merged.worst_margin = std::min(merged.worst_margin, r.worst_margin);
        merged.passed = merged.passed && r.passed;
        merged.notes.insert(merged.notes.end(), r.notes.begin(), r.notes.end());
      }
    }
    out.push_back(merged);
  }
  if (wanted("gautschi")) out.push_back(check_gautschi(cfg));
  if (wanted("energy-inequality") && cfg.run_energy) out.push_back(check_energy_inequality(cfg));
  return out;
}

std::string report_csv(const std::vector<CheckReport>& reports) {
  std::string out = "check,instances,worst_margin,passed\n";
  char buf[160];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%s,%d,%.17g,%s\n", r.check.c_str(), r.instances,
                  r.worst_margin, r.passed ? "true" : "false");
    out += buf;
  }
  return out;
}

std::string report_text(const std::vector<CheckReport>& reports) {
  std::ostringstream out;
  for (const auto& r : reports) {
    char buf[192];
    std::snprintf(buf, sizeof buf, "[%s] %-24s instances=%-4d worst_margin=%.6g\n",
                  r.passed ? "PASS" : "FAIL", r.check.c_str(), r.instances, r.worst_margin);
    out << buf << "       " << r.statement << "\n";
    for (const auto& note : r.notes) out << "       note: " << note << "\n";
  }
  return out.str();
}

bool all_passed(const std::vector<CheckReport>& reports) {
  for (const auto& r : reports)
    if (!r.passed) return false;
  return !reports.empty();
}

}  // namespace ivp::verify
