#include "nullcone/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace nullcone::fields {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put(std::ofstream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get(std::ifstream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw std::runtime_error("truncated field file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_field(const ScalarField& f, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const Grid& g = f.grid();
  put<std::int64_t>(out, g.dim());
  for (int a = 0; a < g.dim(); ++a) put<std::int64_t>(out, g.axis_nodes());
  put<double>(out, g.h());
  put<double>(out, f.time());
  for (double v : f.values()) put<double>(out, v);
}

FieldSnapshot read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  FieldSnapshot s;
  s.dim = get<std::int64_t>(in);
  if (s.dim < 1 || s.dim > 3) throw std::runtime_error("bad dimension in field file");
  std::size_t count = 1;
  for (std::int64_t a = 0; a < s.dim; ++a) {
    s.shape.push_back(get<std::int64_t>(in));
    if (s.shape.back() < 1) throw std::runtime_error("bad shape in field file");
    count *= static_cast<std::size_t>(s.shape.back());
  }
  s.h = get<double>(in);
  s.t = get<double>(in);
  s.values.resize(count);
  for (auto& v : s.values) v = get<double>(in);
  return s;
}

void write_csv_slice(const ScalarField& f, int axis, const std::filesystem::path& path) {
  const Grid& g = f.grid();
  if (axis < 1 || axis > g.dim()) throw std::invalid_argument("slice axis out of range");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "x,value\r\n" << std::setprecision(17);
  const int origin = g.octant() ? 0 : g.half_count();
  std::size_t base = 0;
  for (int a = 1; a <= g.dim(); ++a) {
    if (a != axis) base += static_cast<std::size_t>(origin) * g.stride(a);
  }
  for (int i = 0; i < g.axis_nodes(); ++i) {
    out << g.coord(i) << "," << f[base + static_cast<std::size_t>(i) * g.stride(axis)] << "\r\n";
  }
}

}  // namespace nullcone::fields
