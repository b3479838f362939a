#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "nullcone/grid.hpp"

namespace nullcone::fields {

/// Reflection parity per spatial axis (+1 even, -1 odd). Only meaningful on
/// octant grids, where it drives the mirror rule of every stencil.
using Parity = std::array<int, 3>;
inline constexpr Parity kEven{1, 1, 1};

/// Spatial point (unused coordinates are zero).
using Point = std::array<double, 3>;
using SpatialFunction = std::function<double(const Point&)>;
using SpaceTimeFunction = std::function<double(double, const Point&)>;

class ScalarField {
 public:
  explicit ScalarField(Grid grid, double t = 0.0, Parity parity = kEven);

  static ScalarField sample(const Grid& grid, double t, const SpatialFunction& fn, Parity parity = kEven);

  const Grid& grid() const { return grid_; }
  double time() const { return t_; }
  void set_time(double t) { t_ = t; }
  const Parity& parity() const { return parity_; }
  void set_parity(const Parity& p) { parity_ = p; }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool is_finite() const;
  double max_abs() const;
  /// Trapezoid integral over the grid (mirrored copies included).
  double integral() const;
  double l2_norm() const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);
  /// Pointwise product; parities multiply.
  ScalarField& multiply(const ScalarField& other);
  /// this += s * other
  ScalarField& axpy(double s, const ScalarField& other);

 private:
  void check_compatible(const ScalarField& other) const;

  Grid grid_;
  double t_;
  Parity parity_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
ScalarField hadamard(ScalarField a, const ScalarField& b);

Parity flip(Parity p, int axis);
Parity combine(const Parity& a, const Parity& b);

/// Consecutive time levels t0, t0 + dt, ... of one scalar quantity.
class SpaceTimeBlock {
 public:
  SpaceTimeBlock(std::vector<ScalarField> levels, double t0, double dt);

  /// Samples fn at t_center + k dt for k = -half_width..half_width.
  static SpaceTimeBlock sample(const Grid& grid, double t_center, int half_width, double dt, const SpaceTimeFunction& fn,
                               Parity parity = kEven);

  std::size_t levels() const { return levels_.size(); }
  const ScalarField& level(std::size_t k) const { return levels_[k]; }
  ScalarField& level(std::size_t k) { return levels_[k]; }
  const ScalarField& center() const { return levels_[levels_.size() / 2]; }
  double time(std::size_t k) const { return t0_ + static_cast<double>(k) * dt_; }
  double t0() const { return t0_; }
  double dt() const { return dt_; }
  const Grid& grid() const { return levels_.front().grid(); }
  const Parity& parity() const { return levels_.front().parity(); }

  SpaceTimeBlock& operator+=(const SpaceTimeBlock& other);
  SpaceTimeBlock& operator-=(const SpaceTimeBlock& other);
  SpaceTimeBlock& operator*=(double s);

 private:
  std::vector<ScalarField> levels_;
  double t0_;
  double dt_;
};

SpaceTimeBlock operator+(SpaceTimeBlock a, const SpaceTimeBlock& b);
SpaceTimeBlock operator-(SpaceTimeBlock a, const SpaceTimeBlock& b);
SpaceTimeBlock operator*(double s, SpaceTimeBlock a);

/// D-component state at two consecutive levels: `previous` at t - dt and
/// `current` at t.
struct Frame {
  std::vector<ScalarField> previous;
  std::vector<ScalarField> current;
  double t = 0.0;
  double dt = 0.0;

  int components() const { return static_cast<int>(current.size()); }
  const Grid& grid() const { return current.front().grid(); }
  /// Throws std::invalid_argument if the two levels disagree in layout or count.
  void validate() const;
};

/// Second-order values at the frame midpoint t - dt/2.
struct MidpointState {
  double t = 0.0;
  std::vector<ScalarField> u;
  /// grad[I][a], a = 0 time derivative, a = 1..n spatial derivatives.
  std::vector<std::vector<ScalarField>> grad;
};

MidpointState midpoint_state(const Frame& frame);

}  // namespace nullcone::fields
