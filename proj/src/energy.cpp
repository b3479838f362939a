#include "nullcone/energy.hpp"

#include <cmath>
#include <stdexcept>

#include "nullcone/derivatives.hpp"
#include "nullcone/parallel.hpp"

namespace nullcone::energy {

using fields::Parity;

namespace {

Parity gradient_parity(int a) {
  Parity p = fields::kEven;
  if (a >= 1) p[static_cast<std::size_t>(a - 1)] = -1;
  return p;
}

Parity gamma_parity(int k, int l) { return fields::combine(gradient_parity(k), gradient_parity(l)); }

double axis_weight(const Grid& g, int i) {
  const int last = g.axis_nodes() - 1;
  if (g.octant()) return (i == 0 || i == last) ? g.h() : 2.0 * g.h();
  return (i == 0 || i == last) ? 0.5 * g.h() : g.h();
}

bool interior(const Grid& g, std::size_t idx, int margin) {
  const auto ijk = g.unravel(idx);
  const int last = g.axis_nodes() - 1;
  for (int a = 0; a < g.dim(); ++a) {
    const int i = ijk[static_cast<std::size_t>(a)];
    if (i > last - margin) return false;
    if (!g.octant() && i < margin) return false;
  }
  return true;
}

void check_grads(const Gradients& grads) {
  if (grads.empty()) throw std::invalid_argument("no components");
  const int n = grads.front().front().grid().dim();
  for (const auto& g : grads) {
    if (static_cast<int>(g.size()) != n + 1) throw std::invalid_argument("gradient must have n + 1 entries");
  }
}

}  // namespace

std::size_t GammaField::index(int I, int K, int k, int l) const {
  const int S = dim_ + 1;
  return static_cast<std::size_t>(((I * components_ + K) * S + k) * S + l);
}

double GammaField::max_abs() const {
  double m = 0.0;
  for (const auto& f : entries_) m = std::max(m, f.max_abs());
  return m;
}

GammaField assemble_gamma(const nullform::NonlinearityKernel& kernel, const Gradients& grads) {
  check_grads(grads);
  const int D = static_cast<int>(grads.size());
  const Grid& g = grads.front().front().grid();
  const int n = g.dim();
  const int S = n + 1;
  GammaField gamma(D, n);
  if (!kernel.has_quasilinear()) return gamma;
  if (kernel.components() != D || kernel.slots() != S) throw std::invalid_argument("kernel does not match gradients");
  auto& entries = gamma.entries();
  for (int I = 0; I < D; ++I)
    for (int K = 0; K < D; ++K)
      for (int k = 0; k < S; ++k)
        for (int l = 0; l < S; ++l) entries.emplace_back(g, grads[0][0].time(), gamma_parity(k, l));
  const std::size_t G = entries.size();
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    std::vector<double> grad(static_cast<std::size_t>(D * S));
    std::vector<double> out(G);
    for (std::size_t idx = b; idx < e; ++idx) {
      for (int I = 0; I < D; ++I)
        for (int a = 0; a < S; ++a)
          grad[static_cast<std::size_t>(I * S + a)] = grads[static_cast<std::size_t>(I)][static_cast<std::size_t>(a)][idx];
      kernel.gamma(grad, out);
      for (std::size_t q = 0; q < G; ++q) entries[q][idx] = out[q];
    }
  });
  return gamma;
}

bool gamma_small(const GammaField& gamma, const nullform::SpeedVector& speeds) {
  const double cmin = speeds.min();
  return gamma.max_abs() < 0.25 * cmin * cmin;
}

EnergyDensity energy_density(const Gradients& grads, const GammaField& gamma, const nullform::SpeedVector& speeds) {
  check_grads(grads);
  const int D = static_cast<int>(grads.size());
  if (static_cast<int>(speeds.size()) != D) throw std::invalid_argument("speed count does not match components");
  const Grid& g = grads.front().front().grid();
  const int n = g.dim();
  const int S = n + 1;
  const double t = grads[0][0].time();
  EnergyDensity out;
  for (int a = 0; a <= n; ++a) out.e.emplace_back(g, t, gradient_parity(a));
  const bool quasi = !gamma.is_zero();
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t idx = b; idx < e; ++idx) {
      auto du = [&](int I, int a) {
        return grads[static_cast<std::size_t>(I)][static_cast<std::size_t>(a)][idx];
      };
      double e0 = 0.0;
      std::array<double, 4> ek{0.0, 0.0, 0.0, 0.0};
      for (int I = 0; I < D; ++I) {
        const double c2 = speeds[static_cast<std::size_t>(I)] * speeds[static_cast<std::size_t>(I)];
        const double ut = du(I, 0);
        e0 += ut * ut;
        for (int j = 1; j <= n; ++j) {
          e0 += c2 * du(I, j) * du(I, j);
          ek[static_cast<std::size_t>(j)] -= 2.0 * c2 * ut * du(I, j);
        }
      }
      if (quasi) {
        for (int I = 0; I < D; ++I) {
          for (int K = 0; K < D; ++K) {
            for (int l = 0; l < S; ++l) {
              e0 -= 2.0 * gamma.at(I, K, 0, l)[idx] * du(I, 0) * du(K, l);
              for (int k = 0; k < S; ++k) e0 += gamma.at(I, K, k, l)[idx] * du(I, k) * du(K, l);
              for (int k = 1; k <= n; ++k) {
                ek[static_cast<std::size_t>(k)] -= 2.0 * gamma.at(I, K, k, l)[idx] * du(I, 0) * du(K, l);
              }
            }
          }
        }
      }
      out.e[0][idx] = e0;
      for (int k = 1; k <= n; ++k) out.e[static_cast<std::size_t>(k)][idx] = ek[static_cast<std::size_t>(k)];
    }
  });
  out.gamma_norm = gamma.max_abs();
  out.positive = gamma_small(gamma, speeds);
  return out;
}

std::vector<ScalarField> level_gradient(const ScalarField& u, const ScalarField& ut) {
  std::vector<ScalarField> grad;
  grad.push_back(ut);
  for (int j = 1; j <= u.grid().dim(); ++j) grad.push_back(fields::spatial_derivative(u, j));
  return grad;
}

Gradients midpoint_gradients(const fields::Frame& frame) { return fields::midpoint_state(frame).grad; }

EnergyDensity energy_density(const fields::Frame& frame, const nullform::CoefficientSet& cs) {
  const Gradients grads = midpoint_gradients(frame);
  const nullform::NonlinearityKernel kernel(cs);
  return energy_density(grads, assemble_gamma(kernel, grads), cs.speeds);
}

double discrete_energy(const fields::Frame& frame, const nullform::SpeedVector& speeds) {
  frame.validate();
  const Grid& g = frame.grid();
  const int n = g.dim();
  const auto N = static_cast<std::size_t>(g.axis_nodes());
  const double edge_h = g.octant() ? 2.0 * g.h() : g.h();
  const double inv_dt = 1.0 / frame.dt;
  const double inv_h = 1.0 / g.h();
  std::vector<double> wtab(N);
  for (std::size_t i = 0; i < N; ++i) wtab[i] = axis_weight(g, static_cast<int>(i));
  double total = 0.0;
  for (int I = 0; I < frame.components(); ++I) {
    const auto& a = frame.previous[static_cast<std::size_t>(I)].values();
    const auto& b = frame.current[static_cast<std::size_t>(I)].values();
    const double c2 = speeds[static_cast<std::size_t>(I)] * speeds[static_cast<std::size_t>(I)];
    total += deterministic_sum(g.size(), [&](std::size_t lo, std::size_t hi) {
      double acc = 0.0;
      auto ijk = g.unravel(lo);
      for (std::size_t idx = lo; idx < hi; ++idx) {
        if (idx != lo) {
          // odometer, last axis fastest
          for (int d = n - 1; d >= 0; --d) {
            if (++ijk[static_cast<std::size_t>(d)] < static_cast<int>(N)) break;
            ijk[static_cast<std::size_t>(d)] = 0;
          }
        }
        std::array<double, 3> w{1.0, 1.0, 1.0};
        double wn = 1.0;
        for (int d = 0; d < n; ++d) {
          w[static_cast<std::size_t>(d)] = wtab[static_cast<std::size_t>(ijk[static_cast<std::size_t>(d)])];
          wn *= w[static_cast<std::size_t>(d)];
        }
        const double dtu = (b[idx] - a[idx]) * inv_dt;
        acc += wn * dtu * dtu;
        for (int d = 0; d < n; ++d) {
          if (static_cast<std::size_t>(ijk[static_cast<std::size_t>(d)]) + 1 >= N) continue;
          const std::size_t s = g.stride(d + 1);
          const double we = wn / w[static_cast<std::size_t>(d)] * edge_h;
          acc += c2 * we * ((a[idx + s] - a[idx]) * inv_h) * ((b[idx + s] - b[idx]) * inv_h);
        }
      }
      return acc;
    });
  }
  return total;
}

DivergenceResult divergence_residual(const std::vector<ScalarField>& previous, const std::vector<ScalarField>& current,
                                     const std::vector<ScalarField>& next, double dt,
                                     const nullform::CoefficientSet& cs, const std::vector<ScalarField>* forcing,
                                     int margin) {
  const int D = cs.components();
  if (static_cast<int>(previous.size()) != D || current.size() != previous.size() || next.size() != previous.size()) {
    throw std::invalid_argument("levels must hold one field per component");
  }
  if (forcing && static_cast<int>(forcing->size()) != D) throw std::invalid_argument("forcing needs one field per component");
  const Grid& g = current.front().grid();
  const int n = g.dim();
  const int S = n + 1;
  const nullform::NonlinearityKernel kernel(cs);

  auto half_level = [&](const std::vector<ScalarField>& lo, const std::vector<ScalarField>& hi) {
    Gradients grads;
    for (int I = 0; I < D; ++I) {
      const auto& a = lo[static_cast<std::size_t>(I)];
      const auto& b = hi[static_cast<std::size_t>(I)];
      std::vector<ScalarField> grad;
      grad.push_back((1.0 / dt) * (b - a));
      for (int j = 1; j <= n; ++j) {
        grad.push_back(0.5 * (fields::spatial_derivative(a, j) + fields::spatial_derivative(b, j)));
      }
      grads.push_back(std::move(grad));
    }
    return grads;
  };

  const Gradients grads_lo = half_level(previous, current);
  const Gradients grads_hi = half_level(current, next);
  const GammaField gamma_lo = assemble_gamma(kernel, grads_lo);
  const GammaField gamma_hi = assemble_gamma(kernel, grads_hi);
  const ScalarField e0_lo = energy_density(grads_lo, gamma_lo, cs.speeds).e[0];
  const ScalarField e0_hi = energy_density(grads_hi, gamma_hi, cs.speeds).e[0];
  const ScalarField dte0 = (1.0 / dt) * (e0_hi - e0_lo);

  Gradients grads_m;
  std::vector<ScalarField> utt;
  for (int I = 0; I < D; ++I) {
    const auto& a = previous[static_cast<std::size_t>(I)];
    const auto& m = current[static_cast<std::size_t>(I)];
    const auto& b = next[static_cast<std::size_t>(I)];
    grads_m.push_back(level_gradient(m, (0.5 / dt) * (b - a)));
    ScalarField tt = b - 2.0 * m;
    tt += a;
    tt *= 1.0 / (dt * dt);
    utt.push_back(std::move(tt));
  }
  const GammaField gamma_m = assemble_gamma(kernel, grads_m);
  const EnergyDensity em = energy_density(grads_m, gamma_m, cs.speeds);
  ScalarField lhs = dte0;
  for (int k = 1; k <= n; ++k) lhs += fields::spatial_derivative(em.e[static_cast<std::size_t>(k)], k);

  // sum_I 2 u_t box_gamma u_I
  ScalarField source(g, current.front().time());
  for (int I = 0; I < D; ++I) {
    const auto& ut = grads_m[static_cast<std::size_t>(I)][0];
    ScalarField box_i(g, current.front().time());
    if (forcing) {
      box_i = (*forcing)[static_cast<std::size_t>(I)];
    } else {
      const double c2 = cs.speeds[static_cast<std::size_t>(I)] * cs.speeds[static_cast<std::size_t>(I)];
      box_i = utt[static_cast<std::size_t>(I)];
      box_i.axpy(-c2, fields::laplacian(current[static_cast<std::size_t>(I)]));
      if (!gamma_m.is_zero()) {
        for (int K = 0; K < D; ++K) {
          for (int k = 0; k < S; ++k) {
            for (int l = 0; l < S; ++l) {
              ScalarField hess(g);
              if (k == 0 && l == 0) {
                hess = utt[static_cast<std::size_t>(K)];
              } else if (k == 0 || l == 0) {
                hess = fields::spatial_derivative(grads_m[static_cast<std::size_t>(K)][0], k == 0 ? l : k);
              } else {
                hess = fields::second_spatial_derivative(current[static_cast<std::size_t>(K)], k, l);
              }
              box_i.axpy(-1.0, fields::hadamard(gamma_m.at(I, K, k, l), hess));
            }
          }
        }
      }
    }
    for (std::size_t idx = 0; idx < g.size(); ++idx) source[idx] += 2.0 * ut[idx] * box_i[idx];
  }

  ScalarField remainder(g, current.front().time());
  if (!gamma_m.is_zero()) {
    for (int I = 0; I < D; ++I) {
      for (int K = 0; K < D; ++K) {
        for (int k = 0; k < S; ++k) {
          for (int l = 0; l < S; ++l) {
            const ScalarField d0 = (1.0 / dt) * (gamma_hi.at(I, K, k, l) - gamma_lo.at(I, K, k, l));
            const ScalarField dk = k == 0 ? d0 : fields::spatial_derivative(gamma_m.at(I, K, k, l), k);
            const auto& uI = grads_m[static_cast<std::size_t>(I)];
            const auto& uK = grads_m[static_cast<std::size_t>(K)];
            for (std::size_t idx = 0; idx < g.size(); ++idx) {
              remainder[idx] += -2.0 * dk[idx] * uI[0][idx] * uK[static_cast<std::size_t>(l)][idx] +
                                d0[idx] * uI[static_cast<std::size_t>(k)][idx] * uK[static_cast<std::size_t>(l)][idx];
            }
          }
        }
      }
    }
  }

  DivergenceResult result;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!interior(g, idx, margin)) continue;
    const double r = lhs[idx] - source[idx] - remainder[idx];
    result.residual = std::max(result.residual, std::abs(r));
    result.scale = std::max(result.scale, std::abs(dte0[idx]));
  }
  return result;
}

DivergenceResult divergence_residual(const fields::Frame& earlier, const fields::Frame& later,
                                     const nullform::CoefficientSet& cs, const std::vector<ScalarField>* forcing,
                                     int margin) {
  earlier.validate();
  later.validate();
  if (std::abs(earlier.dt - later.dt) > 1e-14 * earlier.dt || std::abs(later.t - earlier.t - later.dt) > 1e-9 * later.dt) {
    throw std::invalid_argument("frames must be consecutive with a common dt");
  }
  return divergence_residual(earlier.previous, earlier.current, later.current, later.dt, cs, forcing, margin);
}

}  // namespace nullcone::energy
