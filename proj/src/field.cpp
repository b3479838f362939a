#include "nullcone/field.hpp"

#include <cmath>
#include <stdexcept>

#include "nullcone/derivatives.hpp"
#include "nullcone/parallel.hpp"

namespace nullcone::fields {

ScalarField::ScalarField(Grid grid, double t, Parity parity)
    : grid_(std::move(grid)), t_(t), parity_(parity), values_(grid_.size(), 0.0) {}

ScalarField ScalarField::sample(const Grid& grid, double t, const SpatialFunction& fn, Parity parity) {
  ScalarField f(grid, t, parity);
  parallel_for(f.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) f.values_[i] = fn(grid.position(i));
  });
  return f;
}

bool ScalarField::is_finite() const {
  const double m = deterministic_max(values_.size(), [&](std::size_t b, std::size_t e) {
    double acc = 0.0;
    for (std::size_t i = b; i < e; ++i) {
      if (!std::isfinite(values_[i])) return std::nan("");
      acc = std::max(acc, std::abs(values_[i]));
    }
    return acc;
  });
  return std::isfinite(m);
}

double ScalarField::max_abs() const {
  return deterministic_max(values_.size(), [&](std::size_t b, std::size_t e) {
    double acc = 0.0;
    for (std::size_t i = b; i < e; ++i) {
      if (std::isnan(values_[i])) return values_[i];
      acc = std::max(acc, std::abs(values_[i]));
    }
    return acc;
  });
}

double ScalarField::integral() const {
  if (grid_.octant()) {
    for (int a = 0; a < grid_.dim(); ++a) {
      if (parity_[static_cast<std::size_t>(a)] < 0) return 0.0;
    }
  }
  return deterministic_sum(values_.size(), [&](std::size_t b, std::size_t e) {
    double acc = 0.0;
    for (std::size_t i = b; i < e; ++i) acc += grid_.quadrature_weight(i) * values_[i];
    return acc;
  });
}

double ScalarField::l2_norm() const {
  return std::sqrt(deterministic_sum(values_.size(), [&](std::size_t b, std::size_t e) {
    double acc = 0.0;
    for (std::size_t i = b; i < e; ++i) acc += grid_.quadrature_weight(i) * values_[i] * values_[i];
    return acc;
  }));
}

void ScalarField::check_compatible(const ScalarField& other) const {
  if (!grid_.same_layout(other.grid_)) throw std::invalid_argument("fields live on different grids");
  if (grid_.octant() && parity_ != other.parity_) {
    throw std::invalid_argument("cannot add octant fields of different parity");
  }
}

ScalarField& ScalarField::operator+=(const ScalarField& other) { return axpy(1.0, other); }

ScalarField& ScalarField::operator-=(const ScalarField& other) { return axpy(-1.0, other); }

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField& ScalarField::multiply(const ScalarField& other) {
  if (!grid_.same_layout(other.grid_)) throw std::invalid_argument("fields live on different grids");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= other.values_[i];
  parity_ = combine(parity_, other.parity_);
  return *this;
}

ScalarField& ScalarField::axpy(double s, const ScalarField& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * other.values_[i];
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }
ScalarField hadamard(ScalarField a, const ScalarField& b) { return a.multiply(b); }

Parity flip(Parity p, int axis) {
  p[static_cast<std::size_t>(axis - 1)] *= -1;
  return p;
}

Parity combine(const Parity& a, const Parity& b) { return {a[0] * b[0], a[1] * b[1], a[2] * b[2]}; }

SpaceTimeBlock::SpaceTimeBlock(std::vector<ScalarField> levels, double t0, double dt)
    : levels_(std::move(levels)), t0_(t0), dt_(dt) {
  if (levels_.empty()) throw std::invalid_argument("space-time block needs at least one level");
  if (!(dt > 0.0)) throw std::invalid_argument("space-time block needs dt > 0");
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    if (!levels_[k].grid().same_layout(levels_.front().grid())) {
      throw std::invalid_argument("space-time block levels live on different grids");
    }
    levels_[k].set_time(time(k));
  }
}

SpaceTimeBlock SpaceTimeBlock::sample(const Grid& grid, double t_center, int half_width, double dt,
                                      const SpaceTimeFunction& fn, Parity parity) {
  std::vector<ScalarField> levels;
  const double t0 = t_center - half_width * dt;
  for (int k = 0; k <= 2 * half_width; ++k) {
    const double t = t0 + k * dt;
    levels.push_back(ScalarField::sample(grid, t, [&](const Point& x) { return fn(t, x); }, parity));
  }
  return SpaceTimeBlock(std::move(levels), t0, dt);
}

SpaceTimeBlock& SpaceTimeBlock::operator+=(const SpaceTimeBlock& other) {
  if (other.levels_.size() != levels_.size()) throw std::invalid_argument("blocks differ in level count");
  for (std::size_t k = 0; k < levels_.size(); ++k) levels_[k] += other.levels_[k];
  return *this;
}

SpaceTimeBlock& SpaceTimeBlock::operator-=(const SpaceTimeBlock& other) {
  if (other.levels_.size() != levels_.size()) throw std::invalid_argument("blocks differ in level count");
  for (std::size_t k = 0; k < levels_.size(); ++k) levels_[k] -= other.levels_[k];
  return *this;
}

SpaceTimeBlock& SpaceTimeBlock::operator*=(double s) {
  for (auto& l : levels_) l *= s;
  return *this;
}

SpaceTimeBlock operator+(SpaceTimeBlock a, const SpaceTimeBlock& b) { return a += b; }
SpaceTimeBlock operator-(SpaceTimeBlock a, const SpaceTimeBlock& b) { return a -= b; }
SpaceTimeBlock operator*(double s, SpaceTimeBlock a) { return a *= s; }

void Frame::validate() const {
  if (current.empty() || previous.size() != current.size()) {
    throw std::invalid_argument("frame levels must hold the same positive number of components");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("frame dt must be positive");
  const Grid& g = current.front().grid();
  for (std::size_t i = 0; i < current.size(); ++i) {
    if (!current[i].grid().same_layout(g) || !previous[i].grid().same_layout(g)) {
      throw std::invalid_argument("frame components live on different grids");
    }
  }
}

MidpointState midpoint_state(const Frame& frame) {
  frame.validate();
  MidpointState m;
  m.t = frame.t - 0.5 * frame.dt;
  const int n = frame.grid().dim();
  const double inv_dt = 1.0 / frame.dt;
  for (int I = 0; I < frame.components(); ++I) {
    const auto& a = frame.previous[static_cast<std::size_t>(I)];
    const auto& b = frame.current[static_cast<std::size_t>(I)];
    ScalarField mid(a.grid(), m.t, a.parity());
    ScalarField ut(a.grid(), m.t, a.parity());
    const auto& av = a.values();
    const auto& bv = b.values();
    auto& mv = mid.values();
    auto& tv = ut.values();
    parallel_for(a.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        mv[i] = 0.5 * (av[i] + bv[i]);
        tv[i] = (bv[i] - av[i]) * inv_dt;
      }
    });
    std::vector<ScalarField> grad;
    grad.push_back(std::move(ut));
    // the stencils are linear, so differentiating the average is the same
    for (int j = 1; j <= n; ++j) grad.push_back(spatial_derivative(mid, j));
    m.u.push_back(std::move(mid));
    m.grad.push_back(std::move(grad));
  }
  return m;
}

}  // namespace nullcone::fields
