#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nullcone/field.hpp"

namespace nullcone::fields {

/// One of the commuting fields: partial(a) with a = 0..n, omega(j,k) =
/// x_j d_k - x_k d_j, scaling L = t d_t + r d_r, modified_scaling
/// t d_t + chi(r) r d_r, boost(c,j) = c t d_j + (x_j / c) d_t.
struct VectorField {
  enum class Kind { partial, omega, scaling, modified_scaling, boost };
  Kind kind = Kind::partial;
  int a = 0;
  int b = 0;
  double c = 1.0;

  static VectorField partial(int axis) { return {Kind::partial, axis, 0, 1.0}; }
  static VectorField omega(int j, int k) { return {Kind::omega, j, k, 1.0}; }
  static VectorField scaling() { return {Kind::scaling, 0, 0, 1.0}; }
  static VectorField modified_scaling() { return {Kind::modified_scaling, 0, 0, 1.0}; }
  static VectorField boost(double c, int j) { return {Kind::boost, j, 0, c}; }

  bool needs_time() const;
  std::string name() const;
};

/// Z = (d_0..d_n, Omega_jk with j < k).
std::vector<VectorField> z_fields(int dim);

/// C^2 cutoff: 0 for r <= 1, 1 for r >= 2, 10s^3 - 15s^4 + 6s^5 with s = r - 1 between.
double cutoff_chi(double r);

ScalarField apply_vector_field(const VectorField& v, const SpaceTimeBlock& block, std::size_t k);
SpaceTimeBlock apply_vector_field(const VectorField& v, const SpaceTimeBlock& block);
/// Spatial fields only (partial(j >= 1) and omega); throws for fields with a time part.
ScalarField apply_vector_field(const VectorField& v, const ScalarField& f);

/// Applies `fields` right to left, i.e. the last entry acts first.
SpaceTimeBlock apply_composition(const std::vector<VectorField>& fields, const SpaceTimeBlock& block);

/// Tangential derivatives along the c-speed cone from a gradient (d_t, d_1..d_n):
/// component 0 is d_t + c d_r, component j is d_j - omega_j d_r. For n = 1 the
/// angular component is identically zero. Nodes with r < 2h are masked to 0.
struct TangentialFields {
  std::vector<ScalarField> components;
  std::vector<unsigned char> mask;  // 1 where masked
  std::size_t masked_nodes = 0;
};

TangentialFields tangential_derivatives(double c, const std::vector<ScalarField>& gradient);
TangentialFields tangential_derivatives(double c, const SpaceTimeBlock& block, std::size_t k);

/// Radius below which omega = x / r is treated as undefined.
inline double tangential_mask_radius(const Grid& g) { return 2.0 * g.h(); }

/// max |[box_c, Z] u| or max |box_c L u - (L + 2) box_c u| over nodes at least
/// `margin` nodes away from the outer boundary, at time t.
enum class CommutatorPair { box_z, box_scaling };
double commutator_residual(CommutatorPair pair, const VectorField& z, const SpaceTimeFunction& u, const Grid& grid,
                           double t, double c, int margin = 4);

/// <x>, <ct - r> (or 1 + |ct - r|), <t + r>, raised to `exponent`.
struct WeightSpec {
  enum class Kind { angle_x, cone, time_plus_r };
  Kind kind = Kind::angle_x;
  double exponent = 1.0;
  double c = 1.0;
  bool linear_cone = false;  // 1 + |ct - r| instead of sqrt(1 + (ct - r)^2)
};

double weight_value(const WeightSpec& spec, double t, double r);
ScalarField weight_field(const WeightSpec& spec, const Grid& grid, double t);

}  // namespace nullcone::fields
