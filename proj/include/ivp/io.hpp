#pragma once

#include <cstdint>
#include <filesystem>

#include "ivp/grid.hpp"
#include "ivp/vlasov.hpp"

namespace ivp::io {

/** Binary field dump: magic "IVPF", u32 version = 1, u32 dim, u32 n, then
 *  n^dim little-endian f64 values in row-major order.  Round trips are
 *  bit-identical. */
void write_field(const std::filesystem::path& path, const ScalarField& f);
ScalarField read_field(const std::filesystem::path& path);

/** Phase-space dump: version = 2 with an extra u32 nv after n and a u64
 *  time index, then n^dim * nv^dim values (velocity index fastest).  The
 *  velocity extent is not part of the format and must be supplied on read. */
void write_phase_space(const std::filesystem::path& path, const vp::PhaseSpaceField& f,
                       std::uint64_t time_index);
vp::PhaseSpaceField read_phase_space(const std::filesystem::path& path, double v_extent,
                                     std::uint64_t* time_index = nullptr);

}  // namespace ivp::io
