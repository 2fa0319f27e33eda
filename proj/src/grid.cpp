#include "ivp/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>

#include "fft_internal.hpp"
#include "ivp/parallel.hpp"

namespace ivp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMaxExponent = 700.0;

void require_same_grid(const TorusGrid& a, const TorusGrid& b, const char* op) {
  if (!(a == b)) throw std::invalid_argument(std::string(op) + ": grid mismatch");
}

void require_finite(const ScalarField& f, const char* op) {
  const double s =
      par::sum_transform(f.size(), [&](std::size_t i) { return std::fabs(f[i]); });
  if (!std::isfinite(s))
    throw NumericalError(std::string(op) + ": produced non-finite values");
}

double l2_norm_vec(const std::vector<double>& v, double cell_volume) {
  return std::sqrt(cell_volume * par::dot(v.data(), v.data(), v.size()));
}

}  // namespace

TorusGrid TorusGrid::make(int dim, int n) {
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("TorusGrid: dim must be 1, 2, or 3, got " + std::to_string(dim));
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("TorusGrid: n must be even and >= 4, got " + std::to_string(n));
  return TorusGrid{dim, n};
}

double TorusGrid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= h();
  return v;
}

std::size_t TorusGrid::size() const {
  std::size_t s = 1;
  for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(n);
  return s;
}

std::size_t TorusGrid::flatten(const std::array<int, 3>& idx) const {
  std::size_t f = 0;
  for (int a = 0; a < dim; ++a) f = f * static_cast<std::size_t>(n) + static_cast<std::size_t>(idx[a]);
  return f;
}

std::array<int, 3> TorusGrid::unflatten(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dim - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % static_cast<std::size_t>(n));
    flat /= static_cast<std::size_t>(n);
  }
  return idx;
}

std::array<double, 3> TorusGrid::coords(std::size_t flat) const {
  const auto idx = unflatten(flat);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) x[a] = node(idx[a]);
  return x;
}

ScalarField::ScalarField(TorusGrid g, double fill) : grid_(g), values_(g.size(), fill) {}

ScalarField::ScalarField(TorusGrid g, std::vector<double> values)
    : grid_(g), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("ScalarField: value count does not match grid size");
}

ScalarField sample(const TorusGrid& g,
                   const std::function<double(const std::array<double, 3>&)>& fn) {
  ScalarField f(g);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = fn(g.coords(i));
  return f;
}

/* ---------------- spectral machinery ---------------- */

namespace detail {

std::size_t Spectrum::size() const {
  std::size_t s = last_extent();
  for (int a = 0; a < grid.dim - 1; ++a) s *= static_cast<std::size_t>(grid.n);
  return s;
}

namespace {

struct Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

std::mutex g_plan_mutex;
std::map<long long, Plans> g_plans;

Plans& plans_for(const TorusGrid& g) {
  const long long key = static_cast<long long>(g.dim) * 1000000LL + g.n;
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto it = g_plans.find(key);
  if (it != g_plans.end()) return it->second;

  int dims[3] = {g.n, g.n, g.n};
  Spectrum probe{g, {}};
  double* in = fftw_alloc_real(g.size());
  fftw_complex* out = fftw_alloc_complex(probe.size());
  Plans p;
  p.fwd = fftw_plan_dft_r2c(g.dim, dims, in, out, FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.bwd = fftw_plan_dft_c2r(g.dim, dims, out, in, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(out);
  fftw_free(in);
  if (p.fwd == nullptr || p.bwd == nullptr)
    throw NumericalError("fft planning failed");
  return g_plans.emplace(key, p).first->second;
}

}  // namespace

Spectrum forward(const ScalarField& f) {
  Plans& p = plans_for(f.grid());
  Spectrum s{f.grid(), {}};
  s.c.resize(s.size());
  std::vector<double> in(f.values());
  fftw_execute_dft_r2c(p.fwd, in.data(), reinterpret_cast<fftw_complex*>(s.c.data()));
  return s;
}

ScalarField backward(Spectrum s) {
  Plans& p = plans_for(s.grid);
  ScalarField out(s.grid);
  fftw_execute_dft_c2r(p.bwd, reinterpret_cast<fftw_complex*>(s.c.data()), out.data());
  const double scale = 1.0 / static_cast<double>(s.grid.size());
  par::for_each(out.size(), [&](std::size_t i) { out[i] *= scale; });
  return out;
}

std::array<int, 3> mode_of(const TorusGrid& g, std::size_t flat) {
  const int n = g.n;
  const std::size_t m = static_cast<std::size_t>(n / 2 + 1);
  std::array<int, 3> k{0, 0, 0};
  const int last = static_cast<int>(flat % m);
  std::size_t rest = flat / m;
  if (g.dim == 1) {
    k[0] = last;
    return k;
  }
  const auto fold = [n](int i) { return i <= n / 2 ? i : i - n; };
  if (g.dim == 2) {
    k[0] = fold(static_cast<int>(rest));
    k[1] = last;
    return k;
  }
  k[1] = fold(static_cast<int>(rest % static_cast<std::size_t>(n)));
  k[0] = fold(static_cast<int>(rest / static_cast<std::size_t>(n)));
  k[2] = last;
  return k;
}

double laplacian_symbol(const TorusGrid& g, const std::array<int, 3>& k) {
  double s = 0.0;
  for (int a = 0; a < g.dim; ++a) s += static_cast<double>(k[a]) * static_cast<double>(k[a]);
  return kTwoPi * kTwoPi * s;
}

}  // namespace detail

/* ---------------- reductions and norms ---------------- */

double integrate(const ScalarField& f) {
  return f.grid().cell_volume() * par::sum(f.data(), f.size());
}

double mean(const ScalarField& f) { return integrate(f); }

double lp_norm(const ScalarField& f, double p) {
  if (std::isinf(p) && p > 0) return par::max_abs(f.data(), f.size());
  if (!(p >= 1.0) || !std::isfinite(p))
    throw std::invalid_argument("lp_norm: p must be >= 1 or infinity, got " + std::to_string(p));
  const double cv = f.grid().cell_volume();
  if (p == 1.0) return cv * par::sum_transform(f.size(), [&](std::size_t i) { return std::fabs(f[i]); });
  if (p == 2.0) return std::sqrt(cv * par::dot(f.data(), f.data(), f.size()));
  const double s =
      par::sum_transform(f.size(), [&](std::size_t i) { return std::pow(std::fabs(f[i]), p); });
  return std::pow(cv * s, 1.0 / p);
}

/* ---------------- differential operators ---------------- */

namespace {

// First-derivative spectral factor along axis a; zero at the Nyquist mode.
double derivative_factor(const TorusGrid& g, const std::array<int, 3>& k, int a) {
  if (2 * std::abs(k[a]) == g.n) return 0.0;
  return kTwoPi * static_cast<double>(k[a]);
}

}  // namespace

VectorField gradient(const ScalarField& f) {
  const auto s = detail::forward(f);
  VectorField out;
  for (int a = 0; a < f.grid().dim; ++a) {
    detail::Spectrum sa = s;
    par::for_each(sa.c.size(), [&](std::size_t i) {
      const auto k = detail::mode_of(sa.grid, i);
      sa.c[i] *= std::complex<double>(0.0, derivative_factor(sa.grid, k, a));
    });
    out.comp.push_back(detail::backward(std::move(sa)));
    require_finite(out.comp.back(), "gradient");
  }
  return out;
}

ScalarField divergence(const VectorField& V) {
  if (V.comp.empty()) throw std::invalid_argument("divergence: empty vector field");
  const TorusGrid& g = V.grid();
  if (static_cast<int>(V.comp.size()) != g.dim)
    throw std::invalid_argument("divergence: component count does not match grid dimension");
  detail::Spectrum acc{g, {}};
  acc.c.assign(detail::Spectrum{g, {}}.size(), {0.0, 0.0});
  for (int a = 0; a < g.dim; ++a) {
    require_same_grid(V.comp[a].grid(), g, "divergence");
    auto sa = detail::forward(V.comp[a]);
    par::for_each(sa.c.size(), [&](std::size_t i) {
      const auto k = detail::mode_of(g, i);
      acc.c[i] += sa.c[i] * std::complex<double>(0.0, derivative_factor(g, k, a));
    });
  }
  auto out = detail::backward(std::move(acc));
  require_finite(out, "divergence");
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  auto s = detail::forward(f);
  par::for_each(s.c.size(), [&](std::size_t i) {
    s.c[i] *= -detail::laplacian_symbol(s.grid, detail::mode_of(s.grid, i));
  });
  auto out = detail::backward(std::move(s));
  require_finite(out, "laplacian");
  return out;
}

ScalarField solve_poisson_zero_mean(const ScalarField& g) {
  const double mass = integrate(g);
  const double scale = lp_norm(g, 2.0);
  if (std::fabs(mass) > 1e-12 * std::max(1.0, scale))
    throw std::invalid_argument("solve_poisson_zero_mean: rhs has nonzero mean " +
                                std::to_string(mass));
  auto s = detail::forward(g);
  par::for_each(s.c.size(), [&](std::size_t i) {
    const double sym = detail::laplacian_symbol(s.grid, detail::mode_of(s.grid, i));
    s.c[i] = sym > 0.0 ? s.c[i] / sym : std::complex<double>(0.0, 0.0);
  });
  auto out = detail::backward(std::move(s));
  require_finite(out, "solve_poisson_zero_mean");
  return out;
}

/* ---------------- shifted Poisson PCG ---------------- */

namespace {

// y = (-lap) p as a raw-vector operation on grid g.
std::vector<double> apply_neg_laplacian(const TorusGrid& g, const std::vector<double>& p) {
  auto s = detail::forward(ScalarField(g, p));
  par::for_each(s.c.size(), [&](std::size_t i) {
    s.c[i] *= detail::laplacian_symbol(g, detail::mode_of(g, i));
  });
  return detail::backward(std::move(s)).values();
}

std::vector<double> apply_shift_inverse(const TorusGrid& g, const std::vector<double>& r,
                                        double shift) {
  auto s = detail::forward(ScalarField(g, r));
  par::for_each(s.c.size(), [&](std::size_t i) {
    s.c[i] /= detail::laplacian_symbol(g, detail::mode_of(g, i)) + shift;
  });
  return detail::backward(std::move(s)).values();
}

}  // namespace

ScalarField solve_shifted_poisson(const ScalarField& g, const ScalarField& w,
                                  ShiftedSolveOptions opts, ShiftedSolveInfo* info) {
  require_same_grid(g.grid(), w.grid(), "solve_shifted_poisson");
  const TorusGrid& grid = g.grid();
  const std::size_t N = grid.size();
  const double wmin = par::min(w.data(), N);
  if (wmin < 0.0)
    throw std::invalid_argument("solve_shifted_poisson: w has negative entries (min " +
                                std::to_string(wmin) + ")");
  const double wbar = mean(w);
  if (!(wbar > 0.0))
    throw std::invalid_argument("solve_shifted_poisson: w must have positive mean");

  const double cv = grid.cell_volume();
  const double normg = std::max(1.0, lp_norm(g, 2.0));
  const double target = opts.tol * normg;
  // largest eigenvalue of -Laplacian + w, used for the attainable-accuracy
  // acceptance bound tol * (||g|| + ||A|| ||u||)
  const double pin = std::numbers::pi * grid.n;
  const double anorm = grid.dim * pin * pin + par::max(w.data(), N);
  const int cap = opts.max_iters > 0
                      ? opts.max_iters
                      : static_cast<int>(10.0 * std::pow(grid.n, grid.dim / 2.0)) + 10;

  const auto apply_A = [&](const std::vector<double>& p) {
    auto y = apply_neg_laplacian(grid, p);
    par::for_each(N, [&](std::size_t i) { y[i] += w[i] * p[i]; });
    return y;
  };

  std::vector<double> u(N, 0.0);
  std::vector<double> r(g.values());
  double res = l2_norm_vec(r, cv);
  int iters = 0;

  if (res <= target) {
    if (info) *info = {0, res};
    return ScalarField(grid, std::move(u));
  }

  while (iters < cap) {
    auto z = apply_shift_inverse(grid, r, wbar);
    auto p = z;
    double rz = par::dot(r.data(), z.data(), N);
    bool restart = false;
    while (iters < cap && !restart) {
      const auto q = apply_A(p);
      const double pq = par::dot(p.data(), q.data(), N);
      if (!(pq > 0.0)) throw NumericalError("solve_shifted_poisson: operator lost positivity");
      const double alpha = rz / pq;
      par::for_each(N, [&](std::size_t i) {
        u[i] += alpha * p[i];
        r[i] -= alpha * q[i];
      });
      ++iters;
      res = l2_norm_vec(r, cv);
      if (res <= target) {
        // confirm with the true residual before accepting
        const auto Au = apply_A(u);
        std::vector<double> rt(N);
        par::for_each(N, [&](std::size_t i) { rt[i] = g[i] - Au[i]; });
        const double res_true = l2_norm_vec(rt, cv);
        const double accept = opts.tol * (normg + anorm * l2_norm_vec(u, cv));
        if (res_true <= std::max(target, accept)) {
          if (info) *info = {iters, res_true};
          ScalarField out(grid, std::move(u));
          require_finite(out, "solve_shifted_poisson");
          return out;
        }
        r = std::move(rt);
        res = res_true;
        restart = true;
        break;
      }
      z = apply_shift_inverse(grid, r, wbar);
      const double rz2 = par::dot(r.data(), z.data(), N);
      const double beta = rz2 / rz;
      rz = rz2;
      par::for_each(N, [&](std::size_t i) { p[i] = z[i] + beta * p[i]; });
    }
  }

  char msg[160];
  std::snprintf(msg, sizeof msg,
                "solve_shifted_poisson: no convergence after %d iterations, residual=%.3e "
                "(target %.3e)",
                iters, res, target);
  throw ConvergenceError(msg);
}

/* ---------------- convolution, exp, densities ---------------- */

ScalarField convolve(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "convolve");
  auto sa = detail::forward(a);
  const auto sb = detail::forward(b);
  const double cv = a.grid().cell_volume();
  par::for_each(sa.c.size(), [&](std::size_t i) { sa.c[i] *= sb.c[i] * cv; });
  auto out = detail::backward(std::move(sa));
  require_finite(out, "convolve");
  return out;
}

ScalarField exp_field(const ScalarField& f) {
  const double mx = par::max(f.data(), f.size());
  if (mx > kMaxExponent)
    throw OverflowError("exp_field: exponent " + std::to_string(mx) + " exceeds 700");
  ScalarField out(f.grid());
  par::for_each(f.size(), [&](std::size_t i) { out[i] = std::exp(f[i]); });
  return out;
}

double density_mass(const ScalarField& rho) {
  const double mn = par::min(rho.data(), rho.size());
  if (mn < 0.0)
    throw std::invalid_argument("density: negative values present (min " + std::to_string(mn) +
                                ")");
  const double mass = integrate(rho);
  if (!(mass > 0.0)) throw std::invalid_argument("density: mass must be positive");
  return mass;
}

/* ---------------- pointwise arithmetic ---------------- */

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "operator+");
  ScalarField out(a.grid());
  par::for_each(a.size(), [&](std::size_t i) { out[i] = a[i] + b[i]; });
  return out;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "operator-");
  ScalarField out(a.grid());
  par::for_each(a.size(), [&](std::size_t i) { out[i] = a[i] - b[i]; });
  return out;
}

ScalarField operator*(double a, const ScalarField& f) {
  ScalarField out(f.grid());
  par::for_each(f.size(), [&](std::size_t i) { out[i] = a * f[i]; });
  return out;
}

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "multiply");
  ScalarField out(a.grid());
  par::for_each(a.size(), [&](std::size_t i) { out[i] = a[i] * b[i]; });
  return out;
}

}  // namespace ivp
