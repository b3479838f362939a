#include "nullcone/derivatives.hpp"

#include <string>

#include "nullcone/parallel.hpp"

namespace nullcone::fields {

namespace {

void require_nodes(const Grid& g, int needed) {
  if (g.axis_nodes() < needed) {
    throw StencilError("field narrower than stencil: " + std::to_string(g.axis_nodes()) + " nodes per axis, need " +
                       std::to_string(needed));
  }
}

void require_axis(const Grid& g, int axis) {
  if (axis < 1 || axis > g.dim()) throw std::invalid_argument("spatial axis out of range");
}

// steps (r, i) = (idx % s, (idx / s) % N) to idx + 1 without dividing
inline void advance(std::size_t& r, std::size_t& i, std::size_t s, std::size_t N) {
  if (++r == s) {
    r = 0;
    if (++i == N) i = 0;
  }
}

}  // namespace

ScalarField spatial_derivative(const ScalarField& f, int axis) {
  const Grid& g = f.grid();
  require_axis(g, axis);
  require_nodes(g, 3);
  ScalarField out(g, f.time(), flip(f.parity(), axis));
  const std::size_t s = g.stride(axis);
  const auto N = static_cast<std::size_t>(g.axis_nodes());
  const std::size_t last = N - 1;
  const double inv2h = 0.5 / g.h();
  const double p = f.parity()[static_cast<std::size_t>(axis - 1)];
  const bool octant = g.octant();
  const auto& v = f.values();
  auto& o = out.values();
  parallel_for(f.size(), [&](std::size_t b, std::size_t e) {
    std::size_t i = (b / s) % N;
    std::size_t r = b % s;
    for (std::size_t idx = b; idx < e; ++idx, advance(r, i, s, N)) {
      if (i > 0 && i < last) {
        o[idx] = (v[idx + s] - v[idx - s]) * inv2h;
      } else if (i == 0) {
        o[idx] = octant ? (1.0 - p) * v[idx + s] * inv2h : (-3.0 * v[idx] + 4.0 * v[idx + s] - v[idx + 2 * s]) * inv2h;
      } else {
        o[idx] = (3.0 * v[idx] - 4.0 * v[idx - s] + v[idx - 2 * s]) * inv2h;
      }
    }
  });
  return out;
}

ScalarField second_spatial_derivative(const ScalarField& f, int a, int b) {
  if (a != b) return spatial_derivative(spatial_derivative(f, b), a);
  const Grid& g = f.grid();
  require_axis(g, a);
  require_nodes(g, 4);
  ScalarField out(g, f.time(), f.parity());
  const std::size_t s = g.stride(a);
  const auto N = static_cast<std::size_t>(g.axis_nodes());
  const std::size_t last = N - 1;
  const double ih2 = 1.0 / (g.h() * g.h());
  const double p = f.parity()[static_cast<std::size_t>(a - 1)];
  const bool octant = g.octant();
  const auto& v = f.values();
  auto& o = out.values();
  parallel_for(f.size(), [&](std::size_t lo, std::size_t hi) {
    std::size_t i = (lo / s) % N;
    std::size_t r = lo % s;
    for (std::size_t idx = lo; idx < hi; ++idx, advance(r, i, s, N)) {
      if (i > 0 && i < last) {
        o[idx] = (v[idx + s] - 2.0 * v[idx] + v[idx - s]) * ih2;
      } else if (i == 0) {
        o[idx] = octant ? ((1.0 + p) * v[idx + s] - 2.0 * v[idx]) * ih2
                        : (2.0 * v[idx] - 5.0 * v[idx + s] + 4.0 * v[idx + 2 * s] - v[idx + 3 * s]) * ih2;
      } else {
        o[idx] = (2.0 * v[idx] - 5.0 * v[idx - s] + 4.0 * v[idx - 2 * s] - v[idx - 3 * s]) * ih2;
      }
    }
  });
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  ScalarField out = second_spatial_derivative(f, 1, 1);
  for (int a = 2; a <= f.grid().dim(); ++a) out += second_spatial_derivative(f, a, a);
  return out;
}

ScalarField time_derivative(const SpaceTimeBlock& block, std::size_t k) {
  const std::size_t L = block.levels();
  if (L < 3) throw StencilError("time derivative needs at least three levels");
  const double inv2dt = 0.5 / block.dt();
  ScalarField out(block.grid(), block.time(k), block.parity());
  auto& o = out.values();
  if (k > 0 && k + 1 < L) {
    const auto& a = block.level(k - 1).values();
    const auto& b = block.level(k + 1).values();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = (b[i] - a[i]) * inv2dt;
  } else if (k == 0) {
    const auto& f0 = block.level(0).values();
    const auto& f1 = block.level(1).values();
    const auto& f2 = block.level(2).values();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = (-3.0 * f0[i] + 4.0 * f1[i] - f2[i]) * inv2dt;
  } else {
    const auto& f0 = block.level(L - 1).values();
    const auto& f1 = block.level(L - 2).values();
    const auto& f2 = block.level(L - 3).values();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = (3.0 * f0[i] - 4.0 * f1[i] + f2[i]) * inv2dt;
  }
  return out;
}

ScalarField second_time_derivative(const SpaceTimeBlock& block, std::size_t k) {
  const std::size_t L = block.levels();
  if (L < 4) throw StencilError("second time derivative needs at least four levels");
  const double idt2 = 1.0 / (block.dt() * block.dt());
  ScalarField out(block.grid(), block.time(k), block.parity());
  auto& o = out.values();
  if (k > 0 && k + 1 < L) {
    const auto& a = block.level(k - 1).values();
    const auto& m = block.level(k).values();
    const auto& b = block.level(k + 1).values();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = (a[i] - 2.0 * m[i] + b[i]) * idt2;
  } else {
    const bool front = k == 0;
    const auto& f0 = block.level(front ? 0 : L - 1).values();
    const auto& f1 = block.level(front ? 1 : L - 2).values();
    const auto& f2 = block.level(front ? 2 : L - 3).values();
    const auto& f3 = block.level(front ? 3 : L - 4).values();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = (2.0 * f0[i] - 5.0 * f1[i] + 4.0 * f2[i] - f3[i]) * idt2;
  }
  return out;
}

ScalarField partial_derivative(const SpaceTimeBlock& block, std::size_t k, int axis) {
  if (axis == 0) return time_derivative(block, k);
  return spatial_derivative(block.level(k), axis);
}

SpaceTimeBlock partial_derivative(const SpaceTimeBlock& block, int axis) {
  std::vector<ScalarField> levels;
  levels.reserve(block.levels());
  for (std::size_t k = 0; k < block.levels(); ++k) levels.push_back(partial_derivative(block, k, axis));
  return SpaceTimeBlock(std::move(levels), block.t0(), block.dt());
}

ScalarField box(const SpaceTimeBlock& block, std::size_t k, double c) {
  ScalarField out = second_time_derivative(block, k);
  out.axpy(-c * c, laplacian(block.level(k)));
  return out;
}

SpaceTimeBlock box(const SpaceTimeBlock& block, double c) {
  std::vector<ScalarField> levels;
  levels.reserve(block.levels());
  for (std::size_t k = 0; k < block.levels(); ++k) levels.push_back(box(block, k, c));
  return SpaceTimeBlock(std::move(levels), block.t0(), block.dt());
}

ScalarField times_coordinate(const ScalarField& f, int axis) {
  const Grid& g = f.grid();
  require_axis(g, axis);
  ScalarField out(g, f.time(), flip(f.parity(), axis));
  const std::size_t s = g.stride(axis);
  const auto N = static_cast<std::size_t>(g.axis_nodes());
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    out[idx] = g.coord(static_cast<int>((idx / s) % N)) * f[idx];
  }
  return out;
}

}  // namespace nullcone::fields
