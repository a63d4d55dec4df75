#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "nl4s/spectral.hpp"

namespace nl4s {

inline constexpr std::uint16_t kFieldFormatVersion = 1;

struct Snapshot {
  Field field;
  double t = 0;
};

// "NL4S", u16 version, u16 d, u32 N[d], f64 L[d], f64 t, then (re, im) f64
// pairs row-major; everything little-endian.
void write_field(std::ostream& os, const Field& f, double t);
void write_field(const std::string& path, const Field& f, double t);
Snapshot read_field(std::istream& is);
Snapshot read_field(const std::string& path);

}  // namespace nl4s
