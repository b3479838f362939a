#include "nullcone/vector_fields.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nullcone/derivatives.hpp"
#include "nullcone/parallel.hpp"

namespace nullcone::fields {

bool VectorField::needs_time() const {
  switch (kind) {
    case Kind::partial:
      return a == 0;
    case Kind::omega:
      return false;
    default:
      return true;
  }
}

std::string VectorField::name() const {
  std::ostringstream s;
  switch (kind) {
    case Kind::partial:
      s << "d" << a;
      break;
    case Kind::omega:
      s << "Omega" << a << b;
      break;
    case Kind::scaling:
      s << "L";
      break;
    case Kind::modified_scaling:
      s << "tildeL";
      break;
    case Kind::boost:
      s << "boost" << a << "(c=" << c << ")";
      break;
  }
  return s.str();
}

std::vector<VectorField> z_fields(int dim) {
  std::vector<VectorField> z;
  for (int a = 0; a <= dim; ++a) z.push_back(VectorField::partial(a));
  for (int j = 1; j <= dim; ++j) {
    for (int k = j + 1; k <= dim; ++k) z.push_back(VectorField::omega(j, k));
  }
  return z;
}

double cutoff_chi(double r) {
  if (r <= 1.0) return 0.0;
  if (r >= 2.0) return 1.0;
  const double s = r - 1.0;
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

namespace {

void check_axes(const VectorField& v, int dim) {
  auto bad = [dim](int a, int lo) { return a < lo || a > dim; };
  switch (v.kind) {
    case VectorField::Kind::partial:
      if (bad(v.a, 0)) throw std::invalid_argument("partial derivative axis out of range");
      break;
    case VectorField::Kind::omega:
      if (bad(v.a, 1) || bad(v.b, 1) || v.a == v.b) throw std::invalid_argument("rotation needs two distinct axes");
      break;
    case VectorField::Kind::boost:
      if (bad(v.a, 1)) throw std::invalid_argument("boost axis out of range");
      if (!(v.c > 0.0)) throw std::invalid_argument("boost speed must be positive");
      break;
    default:
      break;
  }
}

// sum_i x_i d_i f, optionally times chi(r)
ScalarField radial_part(const ScalarField& f, bool cutoff) {
  const Grid& g = f.grid();
  ScalarField out(g, f.time(), f.parity());
  for (int i = 1; i <= g.dim(); ++i) out += times_coordinate(spatial_derivative(f, i), i);
  if (cutoff) {
    parallel_for(out.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t idx = b; idx < e; ++idx) out[idx] *= cutoff_chi(g.radius(idx));
    });
  }
  return out;
}

ScalarField rotation(const ScalarField& f, int j, int k) {
  ScalarField out = times_coordinate(spatial_derivative(f, k), j);
  out -= times_coordinate(spatial_derivative(f, j), k);
  return out;
}

}  // namespace

ScalarField apply_vector_field(const VectorField& v, const SpaceTimeBlock& block, std::size_t k) {
  check_axes(v, block.grid().dim());
  const ScalarField& f = block.level(k);
  const double t = block.time(k);
  switch (v.kind) {
    case VectorField::Kind::partial:
      return partial_derivative(block, k, v.a);
    case VectorField::Kind::omega:
      return rotation(f, v.a, v.b);
    case VectorField::Kind::scaling:
    case VectorField::Kind::modified_scaling: {
      ScalarField out = radial_part(f, v.kind == VectorField::Kind::modified_scaling);
      out.axpy(t, time_derivative(block, k));
      return out;
    }
    case VectorField::Kind::boost: {
      ScalarField out = (v.c * t) * spatial_derivative(f, v.a);
      out.axpy(1.0 / v.c, times_coordinate(time_derivative(block, k), v.a));
      return out;
    }
  }
  throw std::logic_error("unhandled vector field");
}

SpaceTimeBlock apply_vector_field(const VectorField& v, const SpaceTimeBlock& block) {
  std::vector<ScalarField> levels;
  levels.reserve(block.levels());
  for (std::size_t k = 0; k < block.levels(); ++k) levels.push_back(apply_vector_field(v, block, k));
  return SpaceTimeBlock(std::move(levels), block.t0(), block.dt());
}

ScalarField apply_vector_field(const VectorField& v, const ScalarField& f) {
  check_axes(v, f.grid().dim());
  if (v.needs_time()) throw std::invalid_argument(v.name() + " needs time levels");
  if (v.kind == VectorField::Kind::omega) return rotation(f, v.a, v.b);
  return spatial_derivative(f, v.a);
}

SpaceTimeBlock apply_composition(const std::vector<VectorField>& fields, const SpaceTimeBlock& block) {
  SpaceTimeBlock out = block;
  for (auto it = fields.rbegin(); it != fields.rend(); ++it) out = apply_vector_field(*it, out);
  return out;
}

TangentialFields tangential_derivatives(double c, const std::vector<ScalarField>& gradient) {
  if (gradient.empty()) throw std::invalid_argument("empty gradient");
  const Grid& g = gradient.front().grid();
  const int n = g.dim();
  if (static_cast<int>(gradient.size()) != n + 1) throw std::invalid_argument("gradient must have n + 1 components");
  TangentialFields out;
  out.components.emplace_back(g, gradient[0].time(), gradient[0].parity());
  for (int j = 1; j <= n; ++j) {
    out.components.emplace_back(g, gradient[0].time(), gradient[static_cast<std::size_t>(j)].parity());
  }
  out.mask.assign(g.size(), 0);
  const double r_mask = tangential_mask_radius(g);
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t idx = b; idx < e; ++idx) {
      const auto x = g.position(idx);
      const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
      if (r < r_mask) {
        out.mask[idx] = 1;
        continue;
      }
      double dr = 0.0;
      for (int j = 1; j <= n; ++j) dr += x[static_cast<std::size_t>(j - 1)] / r * gradient[static_cast<std::size_t>(j)][idx];
      out.components[0][idx] = gradient[0][idx] + c * dr;
      if (n == 1) continue;
      for (int j = 1; j <= n; ++j) {
        out.components[static_cast<std::size_t>(j)][idx] =
            gradient[static_cast<std::size_t>(j)][idx] - x[static_cast<std::size_t>(j - 1)] / r * dr;
      }
    }
  });
  for (unsigned char m : out.mask) out.masked_nodes += m;
  return out;
}

TangentialFields tangential_derivatives(double c, const SpaceTimeBlock& block, std::size_t k) {
  std::vector<ScalarField> grad;
  for (int a = 0; a <= block.grid().dim(); ++a) grad.push_back(partial_derivative(block, k, a));
  return tangential_derivatives(c, grad);
}

double commutator_residual(CommutatorPair pair, const VectorField& z, const SpaceTimeFunction& u, const Grid& grid,
                           double t, double c, int margin) {
  const SpaceTimeBlock block = SpaceTimeBlock::sample(grid, t, 2, grid.dt(), u);
  const std::size_t mid = 2;
  const VectorField field = pair == CommutatorPair::box_scaling ? VectorField::scaling() : z;
  const SpaceTimeBlock zu = apply_vector_field(field, block);
  const ScalarField lhs = box(zu, mid, c);
  const SpaceTimeBlock bu = box(block, c);
  ScalarField rhs = apply_vector_field(field, bu, mid);
  if (pair == CommutatorPair::box_scaling) rhs.axpy(2.0, bu.level(mid));

  const auto N = grid.axis_nodes();
  double worst = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const auto ijk = grid.unravel(idx);
    bool inside = true;
    for (int a = 0; a < grid.dim(); ++a) {
      const int i = ijk[static_cast<std::size_t>(a)];
      if (i > N - 1 - margin || (!grid.octant() && i < margin)) inside = false;
    }
    if (inside) worst = std::max(worst, std::abs(lhs[idx] - rhs[idx]));
  }
  return worst;
}

double weight_value(const WeightSpec& spec, double t, double r) {
  double base = 1.0;
  switch (spec.kind) {
    case WeightSpec::Kind::angle_x:
      base = std::sqrt(1.0 + r * r);
      break;
    case WeightSpec::Kind::cone: {
      const double s = spec.c * t - r;
      base = spec.linear_cone ? 1.0 + std::abs(s) : std::sqrt(1.0 + s * s);
      break;
    }
    case WeightSpec::Kind::time_plus_r:
      base = std::sqrt(1.0 + (t + r) * (t + r));
      break;
  }
  return std::pow(base, spec.exponent);
}

ScalarField weight_field(const WeightSpec& spec, const Grid& grid, double t) {
  ScalarField out(grid, t);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) out[idx] = weight_value(spec, t, grid.radius(idx));
  return out;
}

}  // namespace nullcone::fields
