#include "nullcone/grid.hpp"

#include <cmath>
#include <sstream>

namespace nullcone::fields {

std::string to_string(Symmetry s) { return s == Symmetry::octant ? "octant" : "full"; }

Symmetry symmetry_from_string(const std::string& s) {
  if (s == "full") return Symmetry::full;
  if (s == "octant") return Symmetry::octant;
  throw std::invalid_argument("unknown grid symmetry '" + s + "'");
}

Grid::Grid(int dim, double h, double extent, double dt, Symmetry symmetry)
    : dim_(dim), h_(h), extent_(extent), dt_(dt), symmetry_(symmetry) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("grid dimension must be 1, 2 or 3");
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("grid spacing must be positive");
  if (!(extent > 0.0)) throw std::invalid_argument("grid extent must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const double ratio = extent / h;
  half_count_ = static_cast<int>(std::lround(ratio));
  if (std::abs(ratio - half_count_) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("grid extent must be an integer multiple of the spacing");
  }
  axis_nodes_ = octant() ? half_count_ + 1 : 2 * half_count_ + 1;
  std::size_t stride = 1;
  for (int a = dim_; a >= 1; --a) {
    strides_[static_cast<std::size_t>(a - 1)] = stride;
    stride *= static_cast<std::size_t>(axis_nodes_);
  }
  size_ = stride;
}

std::array<int, 3> Grid::unravel(std::size_t index) const {
  std::array<int, 3> ijk{0, 0, 0};
  for (int a = 1; a <= dim_; ++a) {
    const std::size_t s = strides_[static_cast<std::size_t>(a - 1)];
    ijk[static_cast<std::size_t>(a - 1)] = static_cast<int>(index / s);
    index %= s;
  }
  return ijk;
}

std::array<double, 3> Grid::position(std::size_t index) const {
  const auto ijk = unravel(index);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) x[static_cast<std::size_t>(a)] = coord(ijk[static_cast<std::size_t>(a)]);
  return x;
}

double Grid::radius(std::size_t index) const {
  const auto x = position(index);
  return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
}

double Grid::quadrature_weight(std::size_t index) const {
  const auto ijk = unravel(index);
  double w = 1.0;
  const int last = axis_nodes_ - 1;
  for (int a = 0; a < dim_; ++a) {
    const int i = ijk[static_cast<std::size_t>(a)];
    if (octant()) {
      w *= (i == 0 || i == last) ? h_ : 2.0 * h_;
    } else {
      w *= (i == 0 || i == last) ? 0.5 * h_ : h_;
    }
  }
  return w;
}

void Grid::check_cfl(double c_max, double cfl_limit) const {
  if (cfl_limit > kMaxCfl) {
    std::ostringstream msg;
    msg << "cfl limit " << cfl_limit << " exceeds the maximum " << kMaxCfl;
    throw CflError(msg.str());
  }
  const double cfl = cfl_number(c_max);
  if (cfl > cfl_limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "CFL violation: c_max*dt/h = " << cfl << " > " << cfl_limit;
    throw CflError(msg.str());
  }
}

bool Grid::same_layout(const Grid& other) const {
  return dim_ == other.dim_ && half_count_ == other.half_count_ && symmetry_ == other.symmetry_ && h_ == other.h_;
}

}  // namespace nullcone::fields
