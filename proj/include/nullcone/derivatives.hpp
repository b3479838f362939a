#pragma once

#include <cstddef>
#include <stdexcept>

#include "nullcone/field.hpp"

namespace nullcone::fields {

/// Raised when an axis has fewer nodes (or a block fewer levels) than the
/// stencil needs.
class StencilError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Second-order central difference along spatial axis 1..n. The outer ring
/// uses one-sided second-order stencils; octant planes mirror by parity.
ScalarField spatial_derivative(const ScalarField& f, int axis);

/// d^2/dx_a dx_b. a == b uses the compact three-point stencil.
ScalarField second_spatial_derivative(const ScalarField& f, int a, int b);

ScalarField laplacian(const ScalarField& f);

/// d/dt at level k: centered inside the block, one-sided second order at its ends.
ScalarField time_derivative(const SpaceTimeBlock& block, std::size_t k);
ScalarField second_time_derivative(const SpaceTimeBlock& block, std::size_t k);

/// axis 0 is time, 1..n space.
ScalarField partial_derivative(const SpaceTimeBlock& block, std::size_t k, int axis);
SpaceTimeBlock partial_derivative(const SpaceTimeBlock& block, int axis);

/// dt^2 - c^2 Laplacian at level k.
ScalarField box(const SpaceTimeBlock& block, std::size_t k, double c);
SpaceTimeBlock box(const SpaceTimeBlock& block, double c);

/// Multiplication by x_j; flips the parity of axis j.
ScalarField times_coordinate(const ScalarField& f, int axis);

}  // namespace nullcone::fields
