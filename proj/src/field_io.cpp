#include "nl4s/field_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "nl4s/errors.hpp"

namespace nl4s {
namespace {

template <class T>
void put_le(std::ostream& os, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<unsigned char, sizeof(T)> b;
  std::memcpy(b.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  os.write(reinterpret_cast<const char*>(b.data()), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  std::array<unsigned char, sizeof(T)> b;
  if (!is.read(reinterpret_cast<char*>(b.data()), sizeof(T))) throw Error(Errc::Io, "truncated field file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  T value;
  std::memcpy(&value, b.data(), sizeof(T));
  return value;
}

}  // namespace

void write_field(std::ostream& os, const Field& f, double t) {
  os.write("NL4S", 4);
  put_le<std::uint16_t>(os, kFieldFormatVersion);
  put_le<std::uint16_t>(os, static_cast<std::uint16_t>(f.grid.dim()));
  for (int n : f.grid.n()) put_le<std::uint32_t>(os, static_cast<std::uint32_t>(n));
  for (double L : f.grid.lengths()) put_le<double>(os, L);
  put_le<double>(os, t);
  for (Eigen::Index i = 0; i < f.v.size(); ++i) {
    put_le<double>(os, f.v[i].real());
    put_le<double>(os, f.v[i].imag());
  }
  if (!os) throw Error(Errc::Io, "write failed");
}

void write_field(const std::string& path, const Field& f, double t) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(Errc::Io, "cannot open " + path + " for writing");
  write_field(os, f, t);
}

Snapshot read_field(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "NL4S", 4) != 0) throw Error(Errc::Io, "bad magic, not a field file");
  const auto version = get_le<std::uint16_t>(is);
  if (version != kFieldFormatVersion) throw Error(Errc::Io, "unsupported field format version " + std::to_string(version));
  const int d = get_le<std::uint16_t>(is);
  if (d < 1) throw Error(Errc::Io, "field file with zero dimensions");
  std::vector<int> n(d);
  std::vector<double> L(d);
  for (auto& x : n) x = static_cast<int>(get_le<std::uint32_t>(is));
  for (auto& x : L) x = get_le<double>(is);
  const double t = get_le<double>(is);
  Grid g;
  try {
    g = make_grid(d, n, L);
  } catch (const Error& e) {
    throw Error(Errc::Io, std::string("field header: ") + e.what());
  }
  CArray v(g.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = get_le<double>(is);
    const double im = get_le<double>(is);
    v[i] = {re, im};
  }
  return {Field(g, std::move(v)), t};
}

Snapshot read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::Io, "cannot open " + path);
  return read_field(is);
}

}  // namespace nl4s
