#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ivp {

/** Numerical failure of a solver or functional evaluation (exit code 2 at
 *  the CLI).  Input-contract violations throw std::invalid_argument. */
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/** An exponential would exceed the safe double range (exponent > 700). */
struct OverflowError : NumericalError {
  using NumericalError::NumericalError;
};

/** An iterative solve hit its iteration cap before reaching tolerance. */
struct ConvergenceError : NumericalError {
  using NumericalError::NumericalError;
};

/** Uniform periodic grid on the unit torus [0,1)^dim with n nodes per axis.
 *  Nodes sit at x_i = i/n; quadrature is the rectangle rule, which is exact
 *  for trigonometric polynomials below the Nyquist frequency. */
struct TorusGrid {
  int dim = 1;
  int n = 8;

  /** Validates dim in {1,2,3} and n even, >= 4. */
  static TorusGrid make(int dim, int n);

  double h() const { return 1.0 / n; }
  double cell_volume() const;
  std::size_t size() const;
  double node(int i) const { return i * h(); }

  std::size_t flatten(const std::array<int, 3>& idx) const;
  std::array<int, 3> unflatten(std::size_t flat) const;
  std::array<double, 3> coords(std::size_t flat) const;

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;
};

/** Real scalar field sampled at the grid nodes, row-major. */
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(TorusGrid g, double fill = 0.0);
  ScalarField(TorusGrid g, std::vector<double> values);

  const TorusGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

 private:
  TorusGrid grid_{};
  std::vector<double> values_;
};

/** One ScalarField per axis. */
struct VectorField {
  std::vector<ScalarField> comp;
  const TorusGrid& grid() const { return comp.at(0).grid(); }
};

/** Evaluate fn at every node; fn receives the node coordinates (entries
 *  beyond the grid dimension are zero). */
ScalarField sample(const TorusGrid& g,
                   const std::function<double(const std::array<double, 3>&)>& fn);

/** Rectangle-rule integral h^dim * sum of values. */
double integrate(const ScalarField& f);
double mean(const ScalarField& f);

/** L^p norm for p >= 1 (infinity allowed: max |f|).  Throws for p < 1. */
double lp_norm(const ScalarField& f, double p);

/** Spectral gradient; the first-derivative multiplier at the Nyquist mode is
 *  zero, so divergence below is its exact negative adjoint. */
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& V);
ScalarField laplacian(const ScalarField& f);

/** Solve -lap(phi) = g with mean(phi) = 0.  Requires integrate(g) == 0
 *  within 1e-12 * max(1, ||g||_2). */
ScalarField solve_poisson_zero_mean(const ScalarField& g);

struct ShiftedSolveOptions {
  double tol = 1e-12;  // on ||residual||_2 relative to max(1, ||g||_2)
  int max_iters = 0;   // 0 selects the default cap 10 * n^(dim/2)
};

struct ShiftedSolveInfo {
  int iterations = 0;
  double residual = 0.0;
};

/** Solve (-lap + diag(w)) u = g by preconditioned conjugate gradients with
 *  the spectral preconditioner (-lap + mean(w) I)^{-1}.  Requires w >= 0
 *  pointwise with mean(w) > 0 (the operator is then SPD).  Throws
 *  ConvergenceError, reporting the final residual, if the cap is hit. */
ScalarField solve_shifted_poisson(const ScalarField& g, const ScalarField& w,
                                  ShiftedSolveOptions opts = {},
                                  ShiftedSolveInfo* info = nullptr);

/** Periodic convolution (a * b)(x) = int a(x - y) b(y) dy, evaluated
 *  spectrally.  Exact on constants when a has unit mass. */
ScalarField convolve(const ScalarField& a, const ScalarField& b);

/** Pointwise exp.  Throws OverflowError if any exponent exceeds 700. */
ScalarField exp_field(const ScalarField& f);

/** Validates rho >= 0 pointwise with integrate(rho) > 0; returns the mass. */
double density_mass(const ScalarField& rho);

/* Pointwise arithmetic helpers. */
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double a, const ScalarField& f);
ScalarField multiply(const ScalarField& a, const ScalarField& b);

}  // namespace ivp
