#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace nullcone::fields {

/// Thrown when a time step violates the stability bound dt <= cfl * h / c_max.
class CflError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// `full` stores [-R, R]^n. `octant` stores [0, R]^n for data that is even
/// under every reflection x_j -> -x_j; fields then carry a per-axis parity
/// and stencils mirror across the coordinate planes.
enum class Symmetry { full, octant };

std::string to_string(Symmetry s);
Symmetry symmetry_from_string(const std::string& s);

inline constexpr double kMaxCfl = 0.9;

/// Uniform node-centred Cartesian grid on [-R, R]^n (or [0, R]^n).
class Grid {
 public:
  Grid(int dim, double h, double extent, double dt, Symmetry symmetry = Symmetry::full);

  int dim() const { return dim_; }
  double h() const { return h_; }
  double extent() const { return extent_; }
  double dt() const { return dt_; }
  Symmetry symmetry() const { return symmetry_; }
  bool octant() const { return symmetry_ == Symmetry::octant; }

  /// Nodes per spatial axis (2N + 1 full, N + 1 octant, N = R / h).
  int axis_nodes() const { return axis_nodes_; }
  int half_count() const { return half_count_; }
  std::size_t size() const { return size_; }
  /// Stride of spatial axis a in 1..dim (axis 1 varies slowest).
  std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis - 1)]; }
  double lower() const { return octant() ? 0.0 : -extent_; }
  double coord(int i) const { return lower() + i * h_; }

  /// Node indices per axis; unused axes are 0.
  std::array<int, 3> unravel(std::size_t index) const;
  std::array<double, 3> position(std::size_t index) const;
  double radius(std::size_t index) const;

  /// Trapezoid weight of a node, including the mirrored copies on octant grids.
  double quadrature_weight(std::size_t index) const;

  double cfl_number(double c_max) const { return c_max * dt_ / h_; }
  /// Throws CflError unless c_max * dt / h <= cfl_limit <= 0.9.
  void check_cfl(double c_max, double cfl_limit = kMaxCfl) const;

  Grid with_dt(double dt) const { return Grid(dim_, h_, extent_, dt, symmetry_); }

  bool same_layout(const Grid& other) const;

 private:
  int dim_;
  double h_;
  double extent_;
  double dt_;
  Symmetry symmetry_;
  int half_count_;
  int axis_nodes_;
  std::size_t size_;
  std::array<std::size_t, 3> strides_{};
};

}  // namespace nullcone::fields
