#include "nullcone/nullform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nullcone::nullform {

// ---------------------------------------------------------------------------
// SpeedVector

SpeedVector::SpeedVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("speed vector must have at least one entry");
  for (double c : values_) {
    if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("propagation speeds must be finite and positive");
  }
}

double SpeedVector::max() const { return *std::max_element(values_.begin(), values_.end()); }
double SpeedVector::min() const { return *std::min_element(values_.begin(), values_.end()); }

std::vector<double> SpeedVector::distinct() const {
  std::vector<double> out = values_;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// CoefficientTensor

template <int C, int S>
CoefficientTensor<C, S>::CoefficientTensor(int components, int dim) : components_(components), dim_(dim) {
  if (components < 1) throw std::invalid_argument("tensor needs at least one component");
  if (dim < 1 || dim > 3) throw std::invalid_argument("spatial dimension must be 1, 2 or 3");
  std::size_t size = 1;
  for (int i = 0; i < C; ++i) size *= static_cast<std::size_t>(components);
  for (int i = 0; i < S; ++i) size *= static_cast<std::size_t>(dim + 1);
  data_.assign(size, 0.0);
}

template <int C, int S>
std::size_t CoefficientTensor<C, S>::offset(const ComponentIndex& comp, const SlotIndex& slot) const {
  std::size_t off = 0;
  for (int i = 0; i < C; ++i) {
    if (comp[i] < 0 || comp[i] >= components_) throw std::out_of_range("component index out of range");
    off = off * static_cast<std::size_t>(components_) + static_cast<std::size_t>(comp[i]);
  }
  for (int i = 0; i < S; ++i) {
    if (slot[i] < 0 || slot[i] > dim_) throw std::out_of_range("derivative slot out of range");
    off = off * static_cast<std::size_t>(dim_ + 1) + static_cast<std::size_t>(slot[i]);
  }
  return off;
}

template <int C, int S>
void CoefficientTensor<C, S>::unflatten(std::size_t flat, ComponentIndex& comp, SlotIndex& slot) const {
  const auto ns = static_cast<std::size_t>(dim_ + 1);
  const auto nc = static_cast<std::size_t>(components_);
  for (int i = S - 1; i >= 0; --i) {
    slot[i] = static_cast<int>(flat % ns);
    flat /= ns;
  }
  for (int i = C - 1; i >= 0; --i) {
    comp[i] = static_cast<int>(flat % nc);
    flat /= nc;
  }
}

template <int C, int S>
bool CoefficientTensor<C, S>::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
}

template <int C, int S>
double CoefficientTensor<C, S>::abs_sum() const {
  double s = 0.0;
  for (double v : data_) s += std::abs(v);
  return s;
}

template <int C, int S>
void CoefficientTensor<C, S>::scale(double s) {
  for (double& v : data_) v *= s;
}

template class CoefficientTensor<3, 2>;
template class CoefficientTensor<3, 3>;
template class CoefficientTensor<4, 3>;
template class CoefficientTensor<4, 4>;

// ---------------------------------------------------------------------------
// CoefficientSet

CoefficientSet CoefficientSet::zeros(int dim, const SpeedVector& speeds, bool with_cubic) {
  CoefficientSet cs;
  cs.dim = dim;
  cs.speeds = speeds;
  const int d = static_cast<int>(speeds.size());
  cs.b = QuadraticTensor(d, dim);
  cs.q = QuasilinearTensor(d, dim);
  if (with_cubic) {
    if (dim != 2) throw std::invalid_argument("cubic nonlinearities are defined for dim == 2 only");
    cs.cubic.b3 = CubicSemilinearTensor(d, dim);
    cs.cubic.q3 = CubicQuasilinearTensor(d, dim);
  }
  return cs;
}

namespace {

template <class T>
void check_shape(const T& t, int d, int dim, const char* name) {
  if (t.empty()) return;
  if (t.components() != d || t.dim() != dim) {
    throw std::invalid_argument(std::string("tensor ") + name + " does not match (D, dim)");
  }
  for (double v : t.data()) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string("tensor ") + name + " has non-finite entries");
  }
}

}  // namespace

void CoefficientSet::validate() const {
  if (dim < 1 || dim > 3) throw std::invalid_argument("dim must be 1, 2 or 3");
  const int d = components();
  check_shape(b, d, dim, "B");
  check_shape(q, d, dim, "Q");
  check_shape(cubic.b3, d, dim, "B3");
  check_shape(cubic.q3, d, dim, "Q3");
  if (!cubic.empty() && dim != 2) throw std::invalid_argument("cubic tensors require dim == 2");
}

bool CoefficientSet::is_linear() const {
  return (b.empty() || b.is_zero()) && (q.empty() || q.is_zero()) && (cubic.b3.empty() || cubic.b3.is_zero()) &&
         (cubic.q3.empty() || cubic.q3.is_zero());
}

// ---------------------------------------------------------------------------
// Symmetry

namespace {

template <class Tensor, class PartnerFn>
std::vector<SymmetryViolation> symmetry_violations(const Tensor& q, PartnerFn partner_of) {
  std::vector<SymmetryViolation> out;
  if (q.empty()) return out;
  typename Tensor::ComponentIndex comp{};
  typename Tensor::SlotIndex slot{};
  for (std::size_t flat = 0; flat < q.data().size(); ++flat) {
    q.unflatten(flat, comp, slot);
    auto [pcomp, pslot] = partner_of(comp, slot);
    const double a = q(comp, slot);
    const double b = q(pcomp, pslot);
    if (a == b) continue;
    const auto key = std::make_pair(std::vector<int>(comp.begin(), comp.end()), std::vector<int>(slot.begin(), slot.end()));
    const auto pkey =
        std::make_pair(std::vector<int>(pcomp.begin(), pcomp.end()), std::vector<int>(pslot.begin(), pslot.end()));
    if (pkey < key) continue;  // reported from the partner side
    out.push_back({key.first, key.second, pkey.first, pkey.second, a, b});
  }
  return out;
}

}  // namespace

std::vector<SymmetryViolation> validate_symmetry(const QuasilinearTensor& q) {
  return symmetry_violations(q, [](const QuasilinearTensor::ComponentIndex& c, const QuasilinearTensor::SlotIndex& s) {
    // Q_I^{JKjkl} <-> Q_K^{JIjlk}
    return std::make_pair(QuasilinearTensor::ComponentIndex{c[2], c[1], c[0]},
                          QuasilinearTensor::SlotIndex{s[0], s[2], s[1]});
  });
}

std::vector<SymmetryViolation> validate_symmetry(const CubicQuasilinearTensor& q) {
  return symmetry_violations(
      q, [](const CubicQuasilinearTensor::ComponentIndex& c, const CubicQuasilinearTensor::SlotIndex& s) {
        // Q_I^{JKLjklm} <-> Q_L^{JKIjkml}
        return std::make_pair(CubicQuasilinearTensor::ComponentIndex{c[3], c[1], c[2], c[0]},
                              CubicQuasilinearTensor::SlotIndex{s[0], s[1], s[3], s[2]});
      });
}

// ---------------------------------------------------------------------------
// Null condition

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return "holds";
    case Verdict::violated:
      return "violated";
    case Verdict::exempt:
      return "exempt";
  }
  return "unknown";
}

bool NullReport::holds() const {
  return std::none_of(tuples.begin(), tuples.end(), [](const TupleVerdict& t) { return t.verdict == Verdict::violated; });
}

std::vector<std::vector<double>> sphere_directions(int n, int count) {
  if (n < 1 || n > 3) throw std::invalid_argument("sphere dimension must be 1, 2 or 3");
  std::vector<std::vector<double>> dirs;
  if (n == 1) return {{1.0}, {-1.0}};
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  dirs.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    if (n == 2) {
      const double frac = std::fmod(0.5 + k / golden, 1.0);
      const double theta = 2.0 * std::numbers::pi * frac;
      dirs.push_back({std::cos(theta), std::sin(theta)});
    } else {
      // Fibonacci lattice
      const double z = 1.0 - (2.0 * k + 1.0) / count;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = 2.0 * std::numbers::pi * std::fmod(k / golden, 1.0);
      dirs.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
    }
  }
  return dirs;
}

namespace {

void check_sampling(int n, int n_samples, double tol) {
  if (n < 1 || n > 3) throw std::invalid_argument("null-condition check needs dim in {1,2,3}");
  if (n_samples < kMinConeSamples) {
    throw std::invalid_argument("n_samples below " + std::to_string(kMinConeSamples) + ": insufficient cone coverage");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
}

std::vector<std::vector<double>> cone_covectors(int n, int n_samples, double c) {
  std::vector<std::vector<double>> out;
  for (const auto& omega : sphere_directions(n, n_samples)) {
    for (double sheet : {1.0, -1.0}) {
      std::vector<double> xi(static_cast<std::size_t>(n + 1));
      xi[0] = sheet * c;
      for (int i = 0; i < n; ++i) xi[static_cast<std::size_t>(i + 1)] = omega[static_cast<std::size_t>(i)];
      out.push_back(std::move(xi));
    }
  }
  return out;
}

template <class Tensor>
double contract(const Tensor& t, const typename Tensor::ComponentIndex& comp, const std::vector<double>& xi) {
  if (t.empty()) return 0.0;
  const int ns = t.dim() + 1;
  typename Tensor::SlotIndex slot{};
  double sum = 0.0;
  // odometer over all slot tuples
  while (true) {
    double prod = t(comp, slot);
    if (prod != 0.0) {
      for (int s : slot) prod *= xi[static_cast<std::size_t>(s)];
      sum += prod;
    }
    int pos = Tensor::kSlots - 1;
    while (pos >= 0 && ++slot[pos] == ns) {
      slot[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return sum;
}

void finish_report(NullReport& report) {
  report.worst_residual = 0.0;
  report.witness.reset();
  double worst_violation = -1.0;
  for (const auto& t : report.tuples) {
    if (t.verdict == Verdict::exempt) continue;
    report.worst_residual = std::max(report.worst_residual, t.residual);
    if (t.verdict == Verdict::violated && t.residual > worst_violation) {
      worst_violation = t.residual;
      report.witness = t.witness;
    }
  }
}

}  // namespace

NullReport check_null_quadratic(const QuadraticTensor& b, const QuasilinearTensor& q, const SpeedVector& c,
                                int n_samples, double tol) {
  const int n = !b.empty() ? b.dim() : q.dim();
  const int d = static_cast<int>(c.size());
  check_sampling(n, n_samples, tol);
  if ((!b.empty() && (b.components() != d || b.dim() != n)) || (!q.empty() && (q.components() != d || q.dim() != n))) {
    throw std::invalid_argument("coefficient tensors do not match the speed vector");
  }
  NullReport report;
  report.samples = n_samples;
  report.tol = tol;
  for (int I = 0; I < d; ++I) {
    for (int J = 0; J < d; ++J) {
      for (int K = 0; K < d; ++K) {
        TupleVerdict tv;
        tv.components = {I, J, K};
        const auto ui = static_cast<std::size_t>(I);
        if (!(c[ui] == c[static_cast<std::size_t>(J)] && c[ui] == c[static_cast<std::size_t>(K)])) {
          tv.verdict = Verdict::exempt;
          report.tuples.push_back(std::move(tv));
          continue;
        }
        const std::array<int, 3> comp{I, J, K};
        double worst = 0.0;
        std::vector<double> worst_xi;
        for (const auto& xi : cone_covectors(n, n_samples, c[ui])) {
          const double r = std::max(std::abs(contract(b, comp, xi)), std::abs(contract(q, comp, xi)));
          if (r > worst || worst_xi.empty()) {
            worst = r;
            worst_xi = xi;
          }
        }
        tv.residual = worst;
        tv.verdict = worst <= tol ? Verdict::holds : Verdict::violated;
        if (tv.verdict == Verdict::violated) tv.witness = worst_xi;
        report.tuples.push_back(std::move(tv));
      }
    }
  }
  finish_report(report);
  return report;
}

NullReport check_null_cubic(const CubicTensorSet& t3, double c, int n_samples, double tol) {
  const int n = 2;
  check_sampling(n, n_samples, tol);
  if (!(c > 0.0)) throw std::invalid_argument("speed must be positive");
  const int d = !t3.b3.empty() ? t3.b3.components() : (!t3.q3.empty() ? t3.q3.components() : 0);
  if ((!t3.b3.empty() && t3.b3.dim() != 2) || (!t3.q3.empty() && t3.q3.dim() != 2)) {
    throw std::invalid_argument("cubic tensors must have dim == 2");
  }
  NullReport report;
  report.samples = n_samples;
  report.tol = tol;
  const auto covectors = cone_covectors(n, n_samples, c);
  for (int I = 0; I < d; ++I) {
    for (int J = 0; J < d; ++J) {
      for (int K = 0; K < d; ++K) {
        for (int L = 0; L < d; ++L) {
          TupleVerdict tv;
          tv.components = {I, J, K, L};
          const std::array<int, 4> comp{I, J, K, L};
          double worst = 0.0;
          std::vector<double> worst_xi;
          for (const auto& xi : covectors) {
            const double r = std::max(std::abs(contract(t3.b3, comp, xi)), std::abs(contract(t3.q3, comp, xi)));
            if (r > worst || worst_xi.empty()) {
              worst = r;
              worst_xi = xi;
            }
          }
          tv.residual = worst;
          tv.verdict = worst <= tol ? Verdict::holds : Verdict::violated;
          if (tv.verdict == Verdict::violated) tv.witness = worst_xi;
          report.tuples.push_back(std::move(tv));
        }
      }
    }
  }
  finish_report(report);
  return report;
}

NullReport check_null(const CoefficientSet& cs, int n_samples, double tol) {
  cs.validate();
  NullReport report = check_null_quadratic(cs.b, cs.q, cs.speeds, n_samples, tol);
  if (!cs.cubic.empty()) {
    const auto distinct = cs.speeds.distinct();
    if (distinct.size() != 1) throw std::invalid_argument("cubic systems require a single propagation speed");
    NullReport cubic = check_null_cubic(cs.cubic, distinct.front(), n_samples, tol);
    for (auto& t : cubic.tuples) report.tuples.push_back(std::move(t));
    report.witness.reset();
    finish_report(report);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Example families

namespace {

std::vector<double> resolve_lift(std::vector<double> lift, int dim) {
  if (lift.empty()) {
    lift.assign(static_cast<std::size_t>(dim + 1), 0.0);
    lift[0] = 1.0;
  }
  if (static_cast<int>(lift.size()) != dim + 1) throw std::invalid_argument("lift weights must have dim + 1 entries");
  return lift;
}

void check_matrix(const Matrix& m, int d, const char* name) {
  if (static_cast<int>(m.size()) != d) throw std::invalid_argument(std::string(name) + " must be D x D");
  for (const auto& row : m) {
    if (static_cast<int>(row.size()) != d) throw std::invalid_argument(std::string(name) + " must be D x D");
  }
}

}  // namespace

CoefficientSet make_example_system(const SpeedVector& c, int dim, const Matrix& kappa, const Matrix& lambda,
                                   std::vector<double> lift) {
  const int d = static_cast<int>(c.size());
  check_matrix(kappa, d, "kappa");
  check_matrix(lambda, d, "lambda");
  lift = resolve_lift(std::move(lift), dim);
  CoefficientSet cs = CoefficientSet::zeros(dim, c);
  const int ns = dim + 1;

  for (int I = 0; I < d; ++I) {
    const double ci = c[static_cast<std::size_t>(I)];
    for (int J = 0; J < d; ++J) {
      for (int K = 0; K < d; ++K) {
        const double cj = c[static_cast<std::size_t>(J)];
        const double ck = c[static_cast<std::size_t>(K)];
        const auto uj = static_cast<std::size_t>(J);
        const auto uk = static_cast<std::size_t>(K);
        if (cj == ci && ck == ci) {
          const double kap = kappa[uj][uk];
          if (kap == 0.0) continue;
          cs.b({I, J, K}, {0, 0}) += kap;
          for (int i = 1; i <= dim; ++i) cs.b({I, J, K}, {i, i}) -= kap * ci * ci;
        } else {
          cs.b({I, J, K}, {0, 0}) += lambda[uj][uk];
        }
      }
    }
  }

  // Directional lift, symmetric in the two second-derivative slots.
  QuasilinearTensor lifted(d, dim);
  cs.b.for_each_nonzero([&](const QuadraticTensor::ComponentIndex& comp, const QuadraticTensor::SlotIndex& slot,
                            double beta) {
    const int I = comp[0], J = comp[1], K = comp[2];
    const int j = slot[0], k = slot[1];
    for (int m = 0; m < ns; ++m) {
      const double w = beta * lift[static_cast<std::size_t>(m)];
      if (w == 0.0) continue;
      // d_j u_J * d_m d_k u_K
      lifted({I, J, K}, {j, k, m}) += 0.5 * w;
      lifted({I, J, K}, {j, m, k}) += 0.5 * w;
      // d_m d_j u_J * d_k u_K
      lifted({I, K, J}, {k, j, m}) += 0.5 * w;
      lifted({I, K, J}, {k, m, j}) += 0.5 * w;
    }
  });
  // Q_I^{JKjkl} = (L_I^{JKjkl} + L_K^{JIjlk}) / 2
  for (int I = 0; I < d; ++I)
    for (int J = 0; J < d; ++J)
      for (int K = 0; K < d; ++K)
        for (int j = 0; j < ns; ++j)
          for (int k = 0; k < ns; ++k)
            for (int l = 0; l < ns; ++l)
              cs.q({I, J, K}, {j, k, l}) = 0.5 * (lifted({I, J, K}, {j, k, l}) + lifted({K, J, I}, {j, l, k}));
  return cs;
}

CoefficientSet make_cubic_example(double c, const std::vector<double>& lambda, std::vector<double> lift) {
  const int d = static_cast<int>(lambda.size());
  if (d < 1) throw std::invalid_argument("lambda must have at least one entry");
  const int dim = 2;
  const int ns = dim + 1;
  lift = resolve_lift(std::move(lift), dim);
  CoefficientSet cs = CoefficientSet::zeros(dim, SpeedVector(std::vector<double>(static_cast<std::size_t>(d), c)), true);
  auto& b3 = cs.cubic.b3;
  for (int I = 0; I < d; ++I) {
    for (int J = 0; J < d; ++J) {
      const double lam = lambda[static_cast<std::size_t>(J)];
      if (lam == 0.0) continue;
      b3({I, I, J, J}, {0, 0, 0}) += lam;
      for (int i = 1; i <= dim; ++i) b3({I, I, J, J}, {0, i, i}) -= lam * c * c;
    }
  }
  CubicQuasilinearTensor lifted(d, dim);
  b3.for_each_nonzero([&](const CubicSemilinearTensor::ComponentIndex& comp, const CubicSemilinearTensor::SlotIndex& s,
                          double beta) {
    const int I = comp[0], J = comp[1], K = comp[2], L = comp[3];
    const int j = s[0], k = s[1], l = s[2];
    for (int m = 0; m < ns; ++m) {
      const double w = 0.5 * beta * lift[static_cast<std::size_t>(m)];
      if (w == 0.0) continue;
      lifted({I, J, K, L}, {j, k, l, m}) += w;
      lifted({I, J, K, L}, {j, k, m, l}) += w;
      lifted({I, J, L, K}, {j, l, k, m}) += w;
      lifted({I, J, L, K}, {j, l, m, k}) += w;
      lifted({I, K, L, J}, {k, l, j, m}) += w;
      lifted({I, K, L, J}, {k, l, m, j}) += w;
    }
  });
  // Q_I^{JKLjklm} = (L_I^{JKLjklm} + L_L^{JKIjkml}) / 2
  for (int I = 0; I < d; ++I)
    for (int J = 0; J < d; ++J)
      for (int K = 0; K < d; ++K)
        for (int L = 0; L < d; ++L)
          for (int j = 0; j < ns; ++j)
            for (int k = 0; k < ns; ++k)
              for (int l = 0; l < ns; ++l)
                for (int m = 0; m < ns; ++m)
                  cs.cubic.q3({I, J, K, L}, {j, k, l, m}) =
                      0.5 * (lifted({I, J, K, L}, {j, k, l, m}) + lifted({L, J, K, I}, {j, k, m, l}));
  return cs;
}

// ---------------------------------------------------------------------------
// Kernel

NonlinearityKernel::NonlinearityKernel(const CoefficientSet& cs) {
  cs.validate();
  components_ = cs.components();
  slots_ = cs.dim + 1;
  const int d = components_;
  const int ns = slots_;
  auto grad_slot = [ns](int comp, int slot) { return comp * ns + slot; };
  auto gamma_slot = [d, ns](int I, int K, int k, int l) { return ((I * d + K) * ns + k) * ns + l; };

  if (!cs.b.empty()) {
    cs.b.for_each_nonzero([&](const auto& c, const auto& s, double v) {
      b_terms_.push_back({c[0], grad_slot(c[1], s[0]), grad_slot(c[2], s[1]), v});
    });
  }
  if (!cs.q.empty()) {
    cs.q.for_each_nonzero([&](const auto& c, const auto& s, double v) {
      q_terms_.push_back({gamma_slot(c[0], c[2], s[1], s[2]), grad_slot(c[1], s[0]), 0, v});
    });
  }
  if (!cs.cubic.b3.empty()) {
    cs.cubic.b3.for_each_nonzero([&](const auto& c, const auto& s, double v) {
      b3_terms_.push_back({c[0], grad_slot(c[1], s[0]), grad_slot(c[2], s[1]), grad_slot(c[3], s[2]), v});
    });
  }
  if (!cs.cubic.q3.empty()) {
    cs.cubic.q3.for_each_nonzero([&](const auto& c, const auto& s, double v) {
      q3_terms_.push_back({gamma_slot(c[0], c[3], s[2], s[3]), grad_slot(c[1], s[0]), grad_slot(c[2], s[1]), 0, v});
    });
  }
}

void NonlinearityKernel::semilinear(std::span<const double> grad, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& t : b_terms_) out[static_cast<std::size_t>(t.out)] += t.value * grad[static_cast<std::size_t>(t.a)] * grad[static_cast<std::size_t>(t.b)];
  for (const auto& t : b3_terms_) {
    out[static_cast<std::size_t>(t.out)] += t.value * grad[static_cast<std::size_t>(t.a)] *
                                            grad[static_cast<std::size_t>(t.b)] * grad[static_cast<std::size_t>(t.c)];
  }
}

void NonlinearityKernel::gamma(std::span<const double> grad, std::span<double> gamma_out) const {
  std::fill(gamma_out.begin(), gamma_out.end(), 0.0);
  for (const auto& t : q_terms_) gamma_out[static_cast<std::size_t>(t.out)] += t.value * grad[static_cast<std::size_t>(t.a)];
  for (const auto& t : q3_terms_) {
    gamma_out[static_cast<std::size_t>(t.out)] +=
        t.value * grad[static_cast<std::size_t>(t.a)] * grad[static_cast<std::size_t>(t.b)];
  }
}

std::vector<double> evaluate_nonlinearity(const CoefficientSet& cs, std::span<const double> grads,
                                          std::span<const double> hessians) {
  const int d = cs.components();
  const int ns = cs.dim + 1;
  const auto ud = static_cast<std::size_t>(d);
  const auto uns = static_cast<std::size_t>(ns);
  if (grads.size() != ud * uns) throw std::invalid_argument("grads must have D*(n+1) entries");
  if (hessians.size() != ud * uns * uns) throw std::invalid_argument("hessians must have D*(n+1)^2 entries");
  for (std::size_t K = 0; K < ud; ++K) {
    for (std::size_t k = 0; k < uns; ++k) {
      for (std::size_t l = k + 1; l < uns; ++l) {
        const double a = hessians[(K * uns + k) * uns + l];
        const double b = hessians[(K * uns + l) * uns + k];
        if (std::abs(a - b) > 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)))) {
          throw std::invalid_argument("hessian is not symmetric");
        }
      }
    }
  }
  NonlinearityKernel kernel(cs);
  std::vector<double> out(ud, 0.0);
  kernel.semilinear(grads, out);
  std::vector<double> gam(ud * ud * uns * uns, 0.0);
  kernel.gamma(grads, gam);
  for (std::size_t I = 0; I < ud; ++I)
    for (std::size_t K = 0; K < ud; ++K)
      for (std::size_t k = 0; k < uns; ++k)
        for (std::size_t l = 0; l < uns; ++l)
          out[I] += gam[((I * ud + K) * uns + k) * uns + l] * hessians[(K * uns + k) * uns + l];
  return out;
}

// ---------------------------------------------------------------------------
// Tangential decomposition

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TangentialBound tangential_bound_check(const CoefficientSet& cs, const std::array<int, 3>& triple, double c,
                                       std::span<const double> omega, std::span<const double> grads_u,
                                       std::span<const double> grads_v, std::span<const double> hess_v) {
  const int n = cs.dim;
  const auto ns = static_cast<std::size_t>(n + 1);
  if (omega.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("omega must have n entries");
  if (std::abs(norm(omega) - 1.0) > 1e-12) throw std::invalid_argument("omega must be a unit vector");
  if (grads_u.size() != ns || grads_v.size() != ns || hess_v.size() != ns * ns) {
    throw std::invalid_argument("gradient/hessian sizes must match dim");
  }
  // w_0 = -c, w_i = omega_i
  std::vector<double> w(ns);
  w[0] = -c;
  for (std::size_t i = 1; i < ns; ++i) w[i] = omega[i - 1];
  auto radial = [&](std::span<const double> g) {
    double s = 0.0;
    for (std::size_t i = 1; i < ns; ++i) s += w[i] * g[i];
    return s;
  };
  const double dr_u = radial(grads_u);
  const double dr_v = radial(grads_v);
  std::vector<double> bar_u(ns), bar_v(ns);
  for (std::size_t j = 0; j < ns; ++j) {
    bar_u[j] = grads_u[j] - w[j] * dr_u;
    bar_v[j] = grads_v[j] - w[j] * dr_v;
  }
  // d_r d_l v and tangential derivatives of v' with omega frozen
  std::vector<double> dr_grad_v(ns, 0.0);
  for (std::size_t l = 0; l < ns; ++l)
    for (std::size_t i = 1; i < ns; ++i) dr_grad_v[l] += w[i] * hess_v[i * ns + l];
  std::vector<double> bar_grad_v(ns * ns);
  for (std::size_t k = 0; k < ns; ++k)
    for (std::size_t l = 0; l < ns; ++l) bar_grad_v[k * ns + l] = hess_v[k * ns + l] - w[k] * dr_grad_v[l];
  double dr_dr_v = 0.0;
  for (std::size_t i = 1; i < ns; ++i) dr_dr_v += w[i] * dr_grad_v[i];
  std::vector<double> bar_dr_v(ns);
  for (std::size_t l = 0; l < ns; ++l) bar_dr_v[l] = dr_grad_v[l] - w[l] * dr_dr_v;

  const int I = triple[0], J = triple[1], K = triple[2];
  TangentialBound out;
  double mass_b = 0.0, mass_q = 0.0;
  double direct_b = 0.0, dec_b = 0.0, direct_q = 0.0, dec_q = 0.0;
  for (std::size_t j = 0; j < ns; ++j) {
    for (std::size_t k = 0; k < ns; ++k) {
      const double bjk = cs.b.empty() ? 0.0 : cs.b({I, J, K}, {static_cast<int>(j), static_cast<int>(k)});
      mass_b += std::abs(bjk);
      direct_b += bjk * grads_u[j] * grads_v[k];
      dec_b += bjk * (bar_u[j] * grads_v[k] + w[j] * dr_u * bar_v[k]);
      for (std::size_t l = 0; l < ns; ++l) {
        const double qjkl =
            cs.q.empty() ? 0.0 : cs.q({I, J, K}, {static_cast<int>(j), static_cast<int>(k), static_cast<int>(l)});
        if (qjkl == 0.0) continue;
        mass_q += std::abs(qjkl);
        direct_q += qjkl * grads_u[j] * hess_v[k * ns + l];
        dec_q += qjkl * (bar_u[j] * hess_v[k * ns + l] + w[j] * dr_u * (bar_grad_v[k * ns + l] + w[k] * bar_dr_v[l]));
      }
    }
  }
  const double speed_factor = std::max(1.0, c) * std::max(1.0, c);
  const double comb = static_cast<double>((n + 2) * (n + 2));
  out.constant_b = comb * speed_factor * mass_b;
  out.constant_q = comb * speed_factor * mass_q;
  out.lhs_b = std::abs(direct_b);
  out.lhs_q = std::abs(direct_q);
  out.decomposition_b = dec_b;
  out.decomposition_q = dec_q;
  out.residual_b = std::abs(direct_b - dec_b);
  out.residual_q = std::abs(direct_q - dec_q);
  const double nu = norm(grads_u), nv = norm(grads_v), nh = norm(hess_v);
  out.rhs_b = out.constant_b * (norm(bar_u) * nv + nu * norm(bar_v));
  out.rhs_q = out.constant_q * (norm(bar_u) * nh + nu * norm(bar_grad_v));
  out.holds = out.lhs_b <= out.rhs_b * (1.0 + 1e-12) + 1e-300 && out.lhs_q <= out.rhs_q * (1.0 + 1e-12) + 1e-300;
  return out;
}

}  // namespace nullcone::nullform
