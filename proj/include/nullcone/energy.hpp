#pragma once

#include <optional>
#include <vector>

#include "nullcone/field.hpp"
#include "nullcone/nullform.hpp"

namespace nullcone::energy {

using fields::Grid;
using fields::ScalarField;

/// grads[I][a]: d_a u_I with a = 0 time, 1..n space.
using Gradients = std::vector<std::vector<ScalarField>>;

/// gamma_I^{Kkl} = sum_{J,j} Q_I^{JKjkl} d_j u_J as one field per index tuple.
/// A linear (or semilinear) system keeps `entries` empty.
class GammaField {
 public:
  GammaField() = default;
  GammaField(int components, int dim) : components_(components), dim_(dim) {}

  int components() const { return components_; }
  int dim() const { return dim_; }
  bool is_zero() const { return entries_.empty(); }
  std::size_t index(int I, int K, int k, int l) const;
  const ScalarField& at(int I, int K, int k, int l) const { return entries_[index(I, K, k, l)]; }
  std::vector<ScalarField>& entries() { return entries_; }
  const std::vector<ScalarField>& entries() const { return entries_; }
  /// max over nodes and index tuples of |gamma|.
  double max_abs() const;

 private:
  int components_ = 0;
  int dim_ = 0;
  std::vector<ScalarField> entries_;
};

GammaField assemble_gamma(const nullform::NonlinearityKernel& kernel, const Gradients& grads);

/// Smallness test ||gamma||_inf < min c_I^2 / 4.
bool gamma_small(const GammaField& gamma, const nullform::SpeedVector& speeds);

struct EnergyDensity {
  std::vector<ScalarField> e;  // e_0, e_1..e_n
  bool positive = true;        // false when the gamma smallness test fails
  double gamma_norm = 0.0;
};

EnergyDensity energy_density(const Gradients& grads, const GammaField& gamma, const nullform::SpeedVector& speeds);

/// Central-difference gradients of one level, with the time derivative supplied.
std::vector<ScalarField> level_gradient(const ScalarField& u, const ScalarField& ut);

/// Gradients at the frame midpoint (time difference, averaged space derivatives).
Gradients midpoint_gradients(const fields::Frame& frame);

/// Energy density at the frame midpoint with gamma from the coefficient set.
EnergyDensity energy_density(const fields::Frame& frame, const nullform::CoefficientSet& cs);

/// Energy that the leapfrog scheme conserves exactly when F = 0:
/// sum_I sum_nodes w |D_t u_I|^2 + c_I^2 sum_edges w D+ u_I^m D+ u_I^{m+1}.
/// Nodes the solver pins to zero act as boundary and need no special case.
double discrete_energy(const fields::Frame& frame, const nullform::SpeedVector& speeds);

/// max over nodes at least `margin` nodes from the outer boundary of
/// |d_t e_0 + div(e_1..e_n) - sum_I 2 d_t u_I box_gamma u_I - R(u)|
/// evaluated from the levels m-1, m, m+1. When `forcing` is given it replaces
/// the discrete box_gamma u_I (it should hold the equation's right side at t_m).
struct DivergenceResult {
  double residual = 0.0;
  double scale = 0.0;  // max |d_t e_0| over the same nodes, for context
};

DivergenceResult divergence_residual(const std::vector<ScalarField>& previous, const std::vector<ScalarField>& current,
                                     const std::vector<ScalarField>& next, double dt,
                                     const nullform::CoefficientSet& cs,
                                     const std::vector<ScalarField>* forcing = nullptr, int margin = 3);

DivergenceResult divergence_residual(const fields::Frame& earlier, const fields::Frame& later,
                                     const nullform::CoefficientSet& cs,
                                     const std::vector<ScalarField>* forcing = nullptr, int margin = 3);

}  // namespace nullcone::energy
