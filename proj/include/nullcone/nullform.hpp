#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nullcone::nullform {

/// Propagation speeds c_1..c_D, all strictly positive.
class SpeedVector {
 public:
  SpeedVector() : values_{1.0} {}
  explicit SpeedVector(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  double max() const;
  double min() const;
  /// Distinct speeds in ascending order.
  std::vector<double> distinct() const;

 private:
  std::vector<double> values_;
};

/// Dense coefficient tensor with `Components` equation/component indices
/// (0-based, range D) and `Slots` derivative slots (range 0..n).
template <int Components, int Slots>
class CoefficientTensor {
 public:
  using ComponentIndex = std::array<int, Components>;
  using SlotIndex = std::array<int, Slots>;
  static constexpr int kComponents = Components;
  static constexpr int kSlots = Slots;

  CoefficientTensor() = default;
  CoefficientTensor(int components, int dim);

  int components() const { return components_; }
  int dim() const { return dim_; }
  bool empty() const { return data_.empty(); }
  bool is_zero() const;
  double abs_sum() const;
  void scale(double s);

  double operator()(const ComponentIndex& comp, const SlotIndex& slot) const { return data_[offset(comp, slot)]; }
  double& operator()(const ComponentIndex& comp, const SlotIndex& slot) { return data_[offset(comp, slot)]; }

  const std::vector<double>& data() const { return data_; }

  /// Decodes a flat position back into its indices.
  void unflatten(std::size_t flat, ComponentIndex& comp, SlotIndex& slot) const;

  template <class Fn>
  void for_each_nonzero(Fn&& fn) const {
    ComponentIndex comp{};
    SlotIndex slot{};
    for (std::size_t i = 0; i < data_.size(); ++i) {
      if (data_[i] == 0.0) continue;
      unflatten(i, comp, slot);
      fn(comp, slot, data_[i]);
    }
  }

 private:
  std::size_t offset(const ComponentIndex& comp, const SlotIndex& slot) const;

  int components_ = 0;
  int dim_ = 0;
  std::vector<double> data_;
};

using QuadraticTensor = CoefficientTensor<3, 2>;
using QuasilinearTensor = CoefficientTensor<3, 3>;
using CubicSemilinearTensor = CoefficientTensor<4, 3>;
using CubicQuasilinearTensor = CoefficientTensor<4, 4>;

/// Cubic nonlinearity coefficients for the two-dimensional single-speed system.
struct CubicTensorSet {
  CubicSemilinearTensor b3;
  CubicQuasilinearTensor q3;

  bool empty() const { return b3.empty() && q3.empty(); }
};

/// Full description of F = B + Q (+ cubic B3 + Q3 when dim == 2).
struct CoefficientSet {
  int dim = 3;
  SpeedVector speeds;
  QuadraticTensor b;
  QuasilinearTensor q;
  CubicTensorSet cubic;

  int components() const { return static_cast<int>(speeds.size()); }
  /// Zero-initialised set with every tensor allocated for (D, dim).
  static CoefficientSet zeros(int dim, const SpeedVector& speeds, bool with_cubic = false);
  /// Throws std::invalid_argument on inconsistent shapes or non-finite entries.
  void validate() const;
  bool is_linear() const;
};

struct SymmetryViolation {
  std::vector<int> components;
  std::vector<int> slots;
  std::vector<int> partner_components;
  std::vector<int> partner_slots;
  double value = 0.0;
  double partner_value = 0.0;
};

/// Checks Q_I^{JKjkl} = Q_K^{JIjlk}. Each violated pair is reported once, at
/// the lexicographically smaller index tuple.
std::vector<SymmetryViolation> validate_symmetry(const QuasilinearTensor& q);
/// Checks Q_I^{JKLjklm} = Q_L^{JKIjkml}.
std::vector<SymmetryViolation> validate_symmetry(const CubicQuasilinearTensor& q);

enum class Verdict { holds, violated, exempt };
std::string to_string(Verdict v);

struct TupleVerdict {
  std::vector<int> components;  // 0-based (I,J,K) or (I,J,K,L)
  Verdict verdict = Verdict::holds;
  double residual = 0.0;
  std::optional<std::vector<double>> witness;
};

struct NullReport {
  std::vector<TupleVerdict> tuples;
  double worst_residual = 0.0;
  std::optional<std::vector<double>> witness;  // worst violating covector, |xi'| = 1
  int samples = 0;
  double tol = 0.0;

  /// True iff no tuple is violated.
  bool holds() const;
};

inline constexpr int kMinConeSamples = 64;
inline constexpr double kDefaultNullTolerance = 1e-10;

/// Deterministic low-discrepancy unit vectors on S^{n-1}. For n == 1 the
/// sphere is {+1, -1} regardless of `count`.
std::vector<std::vector<double>> sphere_directions(int n, int count);

NullReport check_null_quadratic(const QuadraticTensor& b, const QuasilinearTensor& q, const SpeedVector& c,
                                int n_samples, double tol = kDefaultNullTolerance);
NullReport check_null_cubic(const CubicTensorSet& t3, double c, int n_samples, double tol = kDefaultNullTolerance);

/// Runs the quadratic check and, for dim == 2 sets carrying cubic terms, the
/// cubic check (single speed required); tuples from both are concatenated.
NullReport check_null(const CoefficientSet& cs, int n_samples, double tol = kDefaultNullTolerance);

using Matrix = std::vector<std::vector<double>>;

/// Multi-speed example family: kappa^{JK}{d_t u_J d_t u_K - c_I^2 grad u_J . grad u_K}
/// on equal-speed pairs, lambda^{JK} d_t u_J d_t u_K elsewhere, and Q the
/// symmetrised directional derivative sum_m lift_m d_m B. An empty `lift`
/// means d_t only; an all-zero lift gives a semilinear system.
CoefficientSet make_example_system(const SpeedVector& c, int dim, const Matrix& kappa, const Matrix& lambda,
                                   std::vector<double> lift = {});

/// Two-dimensional cubic family B_I = sum_J lambda^J d_t u_I {(d_t u_J)^2 - c^2 |grad u_J|^2}
/// with Q the symmetrised directional lift of B.
CoefficientSet make_cubic_example(double c, const std::vector<double>& lambda, std::vector<double> lift = {});

/// Compiled sparse form of a CoefficientSet used for pointwise evaluation.
/// Gradients are laid out as grad[I * S + j], S = dim + 1; gamma as
/// gamma[((I * D + K) * S + k) * S + l].
class NonlinearityKernel {
 public:
  NonlinearityKernel() = default;
  explicit NonlinearityKernel(const CoefficientSet& cs);

  int components() const { return components_; }
  int slots() const { return slots_; }
  bool is_linear() const { return b_terms_.empty() && q_terms_.empty() && b3_terms_.empty() && q3_terms_.empty(); }
  bool has_quasilinear() const { return !q_terms_.empty() || !q3_terms_.empty(); }

  /// out[I] = B_I(u') (+ cubic B3). `out` is overwritten.
  void semilinear(std::span<const double> grad, std::span<double> out) const;
  /// gamma_I^{Kkl} = sum Q_I^{JKjkl} d_j u_J (+ cubic analogue). Overwritten.
  void gamma(std::span<const double> grad, std::span<double> gamma_out) const;

 private:
  struct QuadTerm {
    int out;
    int a;
    int b;
    double value;
  };
  struct CubicTerm {
    int out;
    int a;
    int b;
    int c;
    double value;
  };
  int components_ = 0;
  int slots_ = 0;
  std::vector<QuadTerm> b_terms_;   // out = I, a/b = grad slots
  std::vector<QuadTerm> q_terms_;   // out = gamma slot, a = grad slot, b unused
  std::vector<CubicTerm> b3_terms_;
  std::vector<CubicTerm> q3_terms_;  // out = gamma slot, a/b = grad slots
};

/// Pointwise F_I = B_I(u') + Q_I(u', u''). grads: D*(n+1), hessians: D*(n+1)^2
/// row-major per component. Throws if a hessian is not symmetric to 1e-12.
std::vector<double> evaluate_nonlinearity(const CoefficientSet& cs, std::span<const double> grads,
                                          std::span<const double> hessians);

struct TangentialBound {
  double lhs_b = 0.0;
  double rhs_b = 0.0;
  double lhs_q = 0.0;
  double rhs_q = 0.0;
  double constant_b = 0.0;
  double constant_q = 0.0;
  double decomposition_b = 0.0;
  double decomposition_q = 0.0;
  double residual_b = 0.0;
  double residual_q = 0.0;
  bool holds = false;
};

/// Pointwise null-form bound for the bilinear/trilinear forms selected by
/// `triple` = (I, J, K): B^{jk} = B_I^{JKjk}, Q^{jkl} = Q_I^{JKjkl}. The
/// angular direction omega is frozen, so the Q bound is the r-independent
/// part. Throws std::invalid_argument unless |omega| = 1.
TangentialBound tangential_bound_check(const CoefficientSet& cs, const std::array<int, 3>& triple, double c,
                                       std::span<const double> omega, std::span<const double> grads_u,
                                       std::span<const double> grads_v, std::span<const double> hess_v);

}  // namespace nullcone::nullform
