#include "b4ns/serialize.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "b4ns/evolution.hpp"

namespace b4ns {

namespace {

// all integers and floats little-endian on disk
template <typename T>
void put(std::ostream& os, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  os.write(buf, sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  char buf[sizeof(T)];
  is.read(buf, sizeof(T));
  if (!is) throw std::runtime_error("read: truncated stream");
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

constexpr std::uint32_t kFieldVersion = 1;
constexpr std::uint32_t kTrajVersion = 1;
constexpr std::uint32_t kLayoutRowMajorFreq = 0;

}  // namespace

void write_field(std::ostream& os, const SpectralField& u) {
  os.write("B4NS", 4);
  put<std::uint32_t>(os, kFieldVersion);
  put<std::uint32_t>(os, std::uint32_t(u.grid.d));
  put<std::uint32_t>(os, std::uint32_t(u.grid.n));
  put<double>(os, u.grid.L);
  put<std::uint32_t>(os, kLayoutRowMajorFreq);
  for (const cd& c : u.coeffs) {
    put<double>(os, c.real());
    put<double>(os, c.imag());
  }
}

SpectralField read_field(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "B4NS", 4) != 0)
    throw std::runtime_error("read_field: bad magic");
  auto version = get<std::uint32_t>(is);
  if (version != kFieldVersion) throw std::runtime_error("read_field: unsupported version");
  int d = int(get<std::uint32_t>(is));
  int n = int(get<std::uint32_t>(is));
  double L = get<double>(is);
  auto layout = get<std::uint32_t>(is);
  if (layout != kLayoutRowMajorFreq) throw std::runtime_error("read_field: unknown layout tag");
  SpectralField u(make_grid(d, n, L));
  for (cd& c : u.coeffs) {
    double re = get<double>(is), im = get<double>(is);
    c = cd{re, im};
  }
  return u;
}

void write_field_file(const std::string& path, const SpectralField& u) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_field_file: cannot open " + path);
  write_field(os, u);
}

SpectralField read_field_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_field_file: cannot open " + path);
  return read_field(is);
}

void write_trajectory(std::ostream& os, const Trajectory& tr) {
  os.write("B4NT", 4);
  put<std::uint32_t>(os, kTrajVersion);
  put<std::uint64_t>(os, tr.times.size());
  for (double t : tr.times) put<double>(os, t);
  for (const auto& st : tr.states) write_field(os, st);
}

Trajectory read_trajectory(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "B4NT", 4) != 0)
    throw std::runtime_error("read_trajectory: bad magic");
  auto version = get<std::uint32_t>(is);
  if (version != kTrajVersion) throw std::runtime_error("read_trajectory: unsupported version");
  auto count = get<std::uint64_t>(is);
  Trajectory tr;
  tr.times.resize(count);
  for (auto& t : tr.times) t = get<double>(is);
  tr.states.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) tr.states.push_back(read_field(is));
  return tr;
}

void write_trajectory_file(const std::string& path, const Trajectory& tr) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_trajectory_file: cannot open " + path);
  write_trajectory(os, tr);
}

Trajectory read_trajectory_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_trajectory_file: cannot open " + path);
  return read_trajectory(is);
}

}  // namespace b4ns
