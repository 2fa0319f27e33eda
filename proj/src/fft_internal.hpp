#pragma once

#include <array>
#include <complex>
#include <vector>

#include "ivp/grid.hpp"

namespace ivp::detail {

/** Half-spectrum of a real field (last axis stores modes 0..n/2), unscaled
 *  FFTW forward convention. */
struct Spectrum {
  TorusGrid grid{};
  std::vector<std::complex<double>> c;

  std::size_t last_extent() const { return static_cast<std::size_t>(grid.n / 2 + 1); }
  std::size_t size() const;
};

Spectrum forward(const ScalarField& f);

/** Inverse transform including the 1/n^dim normalization; consumes s. */
ScalarField backward(Spectrum s);

/** Integer wavenumber triple of a flattened half-spectrum index.  Full axes
 *  fold to (-n/2, n/2]; the last axis runs 0..n/2. */
std::array<int, 3> mode_of(const TorusGrid& g, std::size_t flat);

/** |2 pi k|^2 for one mode. */
double laplacian_symbol(const TorusGrid& g, const std::array<int, 3>& k);

}  // namespace ivp::detail
