#ifndef B4NS_SERIALIZE_HPP
#define B4NS_SERIALIZE_HPP

#include <iosfwd>
#include <string>

#include "b4ns/field.hpp"

namespace b4ns {

struct Trajectory;

// Binary field container: magic "B4NS", u32 version, u32 d, u32 n, f64 L
// (little-endian), u32 layout tag (0 = row-major frequency order), then
// interleaved re/im f64 per lattice point.
void write_field(std::ostream& os, const SpectralField& u);
SpectralField read_field(std::istream& is);
void write_field_file(const std::string& path, const SpectralField& u);
SpectralField read_field_file(const std::string& path);

// Trajectory container: magic "B4NT", u32 version, u64 count, f64 times[count],
// then count field records.
void write_trajectory(std::ostream& os, const Trajectory& tr);
Trajectory read_trajectory(std::istream& is);
void write_trajectory_file(const std::string& path, const Trajectory& tr);
Trajectory read_trajectory_file(const std::string& path);

}  // namespace b4ns

#endif
