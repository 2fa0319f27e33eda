#include "ivp/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace ivp::io {

static_assert(std::endian::native == std::endian::little,
              "field dumps are little-endian; big-endian hosts are unsupported");

namespace {

constexpr char kMagic[4] = {'I', 'V', 'P', 'F'};

void put_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t take_u32(std::istream& in, const char* what) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw std::runtime_error(std::string("field dump: truncated ") + what);
  return v;
}

std::uint64_t take_u64(std::istream& in, const char* what) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw std::runtime_error(std::string("field dump: truncated ") + what);
  return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  return in;
}

void check_magic(std::istream& in, const std::filesystem::path& path) {
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("not a field dump: " + path.string());
}

void put_values(std::ostream& out, const std::vector<double>& v) {
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void take_values(std::istream& in, std::vector<double>& v) {
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (!in) throw std::runtime_error("field dump: truncated payload");
}

}  // namespace

void write_field(const std::filesystem::path& path, const ScalarField& f) {
  auto out = open_out(path);
  out.write(kMagic, 4);
  put_u32(out, 1);
  put_u32(out, static_cast<std::uint32_t>(f.grid().dim));
  put_u32(out, static_cast<std::uint32_t>(f.grid().n));
  put_values(out, f.values());
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ScalarField read_field(const std::filesystem::path& path) {
  auto in = open_in(path);
  check_magic(in, path);
  const auto version = take_u32(in, "version");
  if (version != 1)
    throw std::runtime_error("field dump: expected version 1, got " + std::to_string(version));
  const int dim = static_cast<int>(take_u32(in, "dim"));
  const int n = static_cast<int>(take_u32(in, "n"));
  const auto grid = TorusGrid::make(dim, n);
  std::vector<double> v(grid.size());
  take_values(in, v);
  return ScalarField(grid, std::move(v));
}

void write_phase_space(const std::filesystem::path& path, const vp::PhaseSpaceField& f,
                       std::uint64_t time_index) {
  auto out = open_out(path);
  out.write(kMagic, 4);
  put_u32(out, 2);
  put_u32(out, static_cast<std::uint32_t>(f.xgrid().dim));
  put_u32(out, static_cast<std::uint32_t>(f.xgrid().n));
  put_u32(out, static_cast<std::uint32_t>(f.nv()));
  put_u64(out, time_index);
  put_values(out, f.values());
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

vp::PhaseSpaceField read_phase_space(const std::filesystem::path& path, double v_extent,
                                     std::uint64_t* time_index) {
  auto in = open_in(path);
  check_magic(in, path);
  const auto version = take_u32(in, "version");
  if (version != 2)
    throw std::runtime_error("phase-space dump: expected version 2, got " +
                             std::to_string(version));
  const int dim = static_cast<int>(take_u32(in, "dim"));
  const int n = static_cast<int>(take_u32(in, "n"));
  const int nv = static_cast<int>(take_u32(in, "nv"));
  const std::uint64_t t = take_u64(in, "time index");
  auto f = vp::PhaseSpaceField::make(TorusGrid::make(dim, n), nv, v_extent);
  take_values(in, f.values());
  if (time_index) *time_index = t;
  return f;
}

}  // namespace ivp::io
