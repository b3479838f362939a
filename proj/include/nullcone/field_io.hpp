#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "nullcone/field.hpp"

namespace nullcone::fields {

/// Binary snapshot: int64 dim, int64 shape[dim], f64 h, f64 t, then the values
/// as little-endian f64 in axis-major order (axis 1 slowest). Octant grids
/// store only the [0, R]^n part.
struct FieldSnapshot {
  std::int64_t dim = 0;
  std::vector<std::int64_t> shape;
  double h = 0.0;
  double t = 0.0;
  std::vector<double> values;
};

void write_field(const ScalarField& f, const std::filesystem::path& path);
FieldSnapshot read_field(const std::filesystem::path& path);

/// Line through the origin along `axis`: columns x,value.
void write_csv_slice(const ScalarField& f, int axis, const std::filesystem::path& path);

}  // namespace nullcone::fields
