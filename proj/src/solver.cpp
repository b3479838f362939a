#include "nullcone/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "nullcone/derivatives.hpp"
#include "nullcone/parallel.hpp"

namespace nullcone::solver {

namespace {

constexpr double kStabilityLimit = 1.0;

std::size_t nodes_for(double R, double h, int dim, fields::Symmetry symmetry) {
  const auto N = static_cast<std::size_t>(std::llround(R / h));
  const std::size_t axis = symmetry == fields::Symmetry::octant ? N + 1 : 2 * N + 1;
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= axis;
  return total;
}

// Small dense solve with partial pivoting; D is the component count.
bool solve_in_place(std::vector<double>& m, std::vector<double>& rhs, int D) {
  for (int col = 0; col < D; ++col) {
    int piv = col;
    for (int r = col + 1; r < D; ++r) {
      if (std::abs(m[static_cast<std::size_t>(r * D + col)]) > std::abs(m[static_cast<std::size_t>(piv * D + col)])) piv = r;
    }
    const double p = m[static_cast<std::size_t>(piv * D + col)];
    if (p == 0.0 || !std::isfinite(p)) return false;
    if (piv != col) {
      for (int c = 0; c < D; ++c) std::swap(m[static_cast<std::size_t>(piv * D + c)], m[static_cast<std::size_t>(col * D + c)]);
      std::swap(rhs[static_cast<std::size_t>(piv)], rhs[static_cast<std::size_t>(col)]);
    }
    for (int r = col + 1; r < D; ++r) {
      const double f = m[static_cast<std::size_t>(r * D + col)] / p;
      if (f == 0.0) continue;
      for (int c = col; c < D; ++c) m[static_cast<std::size_t>(r * D + c)] -= f * m[static_cast<std::size_t>(col * D + c)];
      rhs[static_cast<std::size_t>(r)] -= f * rhs[static_cast<std::size_t>(col)];
    }
  }
  for (int r = D - 1; r >= 0; --r) {
    double acc = rhs[static_cast<std::size_t>(r)];
    for (int c = r + 1; c < D; ++c) acc -= m[static_cast<std::size_t>(r * D + c)] * rhs[static_cast<std::size_t>(c)];
    rhs[static_cast<std::size_t>(r)] = acc / m[static_cast<std::size_t>(r * D + r)];
  }
  return true;
}

}  // namespace

double causal_extent(double data_radius, double c_max, double T, double h, int dim, fields::Symmetry symmetry,
                     std::size_t node_budget) {
  if (!(data_radius >= 0.0) || !(c_max > 0.0) || !(T >= 0.0) || !(h > 0.0)) {
    throw std::invalid_argument("causal_extent needs R0 >= 0, c_max > 0, T >= 0, h > 0");
  }
  const double raw = data_radius + c_max * T + 2.0 * h;
  const double R = std::ceil(raw / h - 1e-9) * h;
  if (nodes_for(R, h, dim, symmetry) > node_budget) {
    const double per_axis = std::floor(std::pow(static_cast<double>(node_budget), 1.0 / dim) + 1e-9);
    const double n_max = symmetry == fields::Symmetry::octant ? per_axis - 1.0 : std::floor((per_axis - 1.0) / 2.0);
    const double feasible = std::max(0.0, (n_max * h - data_radius - 2.0 * h) / c_max);
    std::ostringstream msg;
    msg << "causal box R = " << R << " needs " << nodes_for(R, h, dim, symmetry) << " nodes (budget " << node_budget
        << "); largest feasible T = " << feasible;
    throw MemoryBudgetError(msg.str(), feasible);
  }
  return R;
}

double choose_dt(double h, double c_max, double cfl) {
  if (!(h > 0.0) || !(c_max > 0.0) || !(cfl > 0.0)) throw std::invalid_argument("choose_dt needs positive inputs");
  const double per_unit = std::ceil(c_max / (cfl * h) - 1e-9);
  return 1.0 / per_unit;
}

bool reflection_invariant(const nullform::CoefficientSet& cs) {
  bool ok = true;
  auto check = [&](const auto&, const auto& slot, double) {
    std::array<int, 4> count{0, 0, 0, 0};
    for (int s : slot) ++count[static_cast<std::size_t>(s)];
    for (int a = 1; a <= 3; ++a) {
      if (count[static_cast<std::size_t>(a)] % 2 != 0) ok = false;
    }
  };
  if (!cs.b.empty()) cs.b.for_each_nonzero(check);
  if (!cs.q.empty()) cs.q.for_each_nonzero(check);
  if (!cs.cubic.b3.empty()) cs.cubic.b3.for_each_nonzero(check);
  if (!cs.cubic.q3.empty()) cs.cubic.q3.for_each_nonzero(check);
  return ok;
}

BlowupInfo detect_blowup(const Frame& frame, double ceiling) {
  const fields::MidpointState mid = fields::midpoint_state(frame);
  const Grid& g = frame.grid();
  BlowupInfo info;
  double best = -1.0;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    for (const auto& grad : mid.grad) {
      double s = 0.0;
      for (const auto& d : grad) s += d[idx] * d[idx];
      const double v = std::sqrt(s);
      if (!std::isfinite(v)) {
        info.flagged = true;
        info.t = mid.t;
        info.location = g.position(idx);
        info.sup = v;
        info.reason = "non-finite values";
        return info;
      }
      if (v > best) {
        best = v;
        info.location = g.position(idx);
      }
    }
  }
  info.sup = best;
  if (best > ceiling) {
    info.flagged = true;
    info.t = mid.t;
    info.reason = "sup |u'| above ceiling";
  }
  return info;
}

LeapfrogSolver::LeapfrogSolver(nullform::CoefficientSet cs, Grid grid, SolverOptions options)
    : cs_(std::move(cs)), grid_(std::move(grid)), options_(std::move(options)) {
  cs_.validate();
  if (cs_.dim != grid_.dim()) throw std::invalid_argument("coefficient dimension does not match the grid");
  D_ = cs_.components();
  n_ = grid_.dim();
  kernel_ = nullform::NonlinearityKernel(cs_);
  const double cmax = cs_.speeds.max();
  grid_.check_cfl(cmax);
  const double courant = std::sqrt(static_cast<double>(n_)) * grid_.cfl_number(cmax);
  if (courant > fields::kMaxCfl * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "CFL violation: sqrt(n) c_max dt / h = " << courant << " > " << fields::kMaxCfl;
    throw fields::CflError(msg.str());
  }
  if (grid_.axis_nodes() < 4) throw std::invalid_argument("grid too small for the stencils");
  if (grid_.octant() && !reflection_invariant(cs_)) {
    throw std::invalid_argument("octant grids need a reflection-invariant nonlinearity");
  }
  if (!options_.forcing.empty() && static_cast<int>(options_.forcing.size()) != D_) {
    throw std::invalid_argument("forcing needs one entry per component");
  }
  for (int I = 0; I < D_; ++I) c2_.push_back(cs_.speeds[static_cast<std::size_t>(I)] * cs_.speeds[static_cast<std::size_t>(I)]);

  pinned_.assign(grid_.size(), 0);
  const int last = grid_.axis_nodes() - 1;
  for (std::size_t idx = 0; idx < grid_.size(); ++idx) {
    const auto ijk = grid_.unravel(idx);
    for (int a = 0; a < n_; ++a) {
      const int i = ijk[static_cast<std::size_t>(a)];
      if (i == last || (!grid_.octant() && i == 0)) pinned_[idx] = 1;
    }
    if (options_.pin_radius > 0.0 && grid_.radius(idx) <= options_.pin_radius) pinned_[idx] = 1;
  }
  accel_.assign(static_cast<std::size_t>(D_), std::vector<double>(grid_.size(), 0.0));
  ut_.assign(static_cast<std::size_t>(D_), std::vector<double>(grid_.size(), 0.0));
  for (int I = 0; I < D_; ++I) scratch_.emplace_back(grid_);
}

LeapfrogSolver::PassResult LeapfrogSolver::advance(double t, const std::vector<ScalarField>& u,
                                                   const std::vector<ScalarField>* prev) {
  const Grid& g = grid_;
  const int D = D_;
  const int n = n_;
  const int S = n + 1;
  const double h = g.h();
  const double dt = g.dt();
  const double inv2h = 0.5 / h;
  const double ih2 = 1.0 / (h * h);
  const double inv4h2 = 0.25 * ih2;
  const bool octant = g.octant();
  const int last = g.axis_nodes() - 1;
  const bool linear = kernel_.is_linear();
  const bool quasi = kernel_.has_quasilinear();
  const bool forced = !options_.forcing.empty();
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  double base_margin = 0.0;
  for (double c2 : c2_) base_margin = std::max(base_margin, sqrt_n * std::sqrt(c2) * dt / h);
  std::vector<double> temporal(static_cast<std::size_t>(D), 0.0);
  if (forced) {
    for (int I = 0; I < D; ++I) {
      const auto& f = options_.forcing[static_cast<std::size_t>(I)];
      if (f.active()) temporal[static_cast<std::size_t>(I)] = f(t, {0.0, 0.0, 0.0}) / f.amplitude;
    }
  }
  std::array<std::size_t, 3> stride{0, 0, 0};
  for (int a = 1; a <= n; ++a) stride[static_cast<std::size_t>(a - 1)] = g.stride(a);

  std::vector<const double*> uv(static_cast<std::size_t>(D));
  std::vector<const double*> pv(static_cast<std::size_t>(D), nullptr);
  std::vector<double*> nv(static_cast<std::size_t>(D));
  for (int I = 0; I < D; ++I) {
    uv[static_cast<std::size_t>(I)] = u[static_cast<std::size_t>(I)].values().data();
    if (prev) pv[static_cast<std::size_t>(I)] = (*prev)[static_cast<std::size_t>(I)].values().data();
    nv[static_cast<std::size_t>(I)] = scratch_[static_cast<std::size_t>(I)].values().data();
  }

  // chunk partials packed as (sup, margin, nonfinite flag)
  std::vector<std::array<double, 3>> partials((g.size() + kChunkSize - 1) / kChunkSize, {0.0, 0.0, 0.0});

  parallel_for(g.size(), [&](std::size_t begin, std::size_t end) {
    std::vector<double> grad(static_cast<std::size_t>(D * S));
    std::vector<double> lap(static_cast<std::size_t>(D));
    std::vector<double> hess(static_cast<std::size_t>(D * S * S));
    std::vector<double> bout(static_cast<std::size_t>(D));
    std::vector<double> gam(quasi ? static_cast<std::size_t>(D * D * S * S) : 0);
    std::vector<double> mat(static_cast<std::size_t>(D * D));
    std::vector<double> rhs(static_cast<std::size_t>(D));
    double sup = 0.0;
    double margin = linear || !quasi ? base_margin : 0.0;
    bool bad = false;
    auto ijk = g.unravel(begin);
    for (std::size_t idx = begin; idx < end; ++idx) {
      if (!pinned_[idx]) {
        std::array<std::ptrdiff_t, 3> minus{0, 0, 0};
        for (int a = 0; a < n; ++a) {
          const auto s = static_cast<std::ptrdiff_t>(stride[static_cast<std::size_t>(a)]);
          minus[static_cast<std::size_t>(a)] = (octant && ijk[static_cast<std::size_t>(a)] == 0) ? s : -s;
        }
        for (int I = 0; I < D; ++I) {
          const double* v = uv[static_cast<std::size_t>(I)];
          const double* w = ut_[static_cast<std::size_t>(I)].data();
          const double centre = v[idx];
          double l = 0.0;
          double norm = w[idx] * w[idx];
          grad[static_cast<std::size_t>(I * S)] = w[idx];
          for (int a = 0; a < n; ++a) {
            const std::size_t sp = stride[static_cast<std::size_t>(a)];
            const std::size_t im = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(idx) + minus[static_cast<std::size_t>(a)]);
            const double up = v[idx + sp];
            const double um = v[im];
            const double d = (up - um) * inv2h;
            const double dd = (up - 2.0 * centre + um) * ih2;
            grad[static_cast<std::size_t>(I * S + a + 1)] = d;
            norm += d * d;
            l += dd;
            if (quasi) {
              hess[static_cast<std::size_t>((I * S + a + 1) * S + a + 1)] = dd;
              const double dt_d = (w[idx + sp] - w[im]) * inv2h;
              hess[static_cast<std::size_t>((I * S + 0) * S + a + 1)] = dt_d;
              hess[static_cast<std::size_t>((I * S + a + 1) * S + 0)] = dt_d;
            }
          }
          if (quasi) {
            for (int a = 0; a < n; ++a) {
              for (int b = a + 1; b < n; ++b) {
                const auto pa = static_cast<std::ptrdiff_t>(stride[static_cast<std::size_t>(a)]);
                const auto pb = static_cast<std::ptrdiff_t>(stride[static_cast<std::size_t>(b)]);
                const auto ma = minus[static_cast<std::size_t>(a)];
                const auto mb = minus[static_cast<std::size_t>(b)];
                const auto i0 = static_cast<std::ptrdiff_t>(idx);
                const double x = (v[i0 + pa + pb] - v[i0 + pa + mb] - v[i0 + ma + pb] + v[i0 + ma + mb]) * inv4h2;
                hess[static_cast<std::size_t>((I * S + a + 1) * S + b + 1)] = x;
                hess[static_cast<std::size_t>((I * S + b + 1) * S + a + 1)] = x;
              }
            }
          }
          lap[static_cast<std::size_t>(I)] = l;
          const double nn = std::sqrt(norm);
          if (!std::isfinite(nn)) bad = true;
          if (nn > sup) sup = nn;
        }

        for (int I = 0; I < D; ++I) {
          double r = c2_[static_cast<std::size_t>(I)] * lap[static_cast<std::size_t>(I)];
          if (forced && temporal[static_cast<std::size_t>(I)] != 0.0) {
            r += options_.forcing[static_cast<std::size_t>(I)](t, g.position(idx));
          }
          rhs[static_cast<std::size_t>(I)] = r;
        }
        if (!linear) {
          kernel_.semilinear(grad, bout);
          for (int I = 0; I < D; ++I) rhs[static_cast<std::size_t>(I)] += bout[static_cast<std::size_t>(I)];
        }
        if (quasi) {
          kernel_.gamma(grad, gam);
          for (int I = 0; I < D; ++I) {
            double acc = 0.0;
            double spatial = 0.0;
            double temporal_sum = 0.0;
            for (int K = 0; K < D; ++K) {
              const std::size_t base = static_cast<std::size_t>((I * D + K) * S * S);
              mat[static_cast<std::size_t>(I * D + K)] = (I == K ? 1.0 : 0.0) - gam[base];
              temporal_sum += std::abs(gam[base]);
              for (int k = 0; k < S; ++k) {
                for (int l = 0; l < S; ++l) {
                  const double gv = gam[base + static_cast<std::size_t>(k * S + l)];
                  if (k == 0 && l == 0) continue;
                  if (gv == 0.0) continue;
                  acc += gv * hess[static_cast<std::size_t>((K * S + k) * S + l)];
                  if (k > 0 && l > 0) spatial += std::abs(gv);
                }
              }
            }
            rhs[static_cast<std::size_t>(I)] += acc;
            const double denom = 1.0 - temporal_sum;
            const double eff = denom > 0.0 ? (c2_[static_cast<std::size_t>(I)] + spatial) / denom
                                           : std::numeric_limits<double>::infinity();
            margin = std::max(margin, sqrt_n * std::sqrt(eff) * dt / h);
          }
          if (!solve_in_place(mat, rhs, D)) bad = true;
        }
        for (int I = 0; I < D; ++I) {
          const double a = rhs[static_cast<std::size_t>(I)];
          accel_[static_cast<std::size_t>(I)][idx] = a;
          const double* v = uv[static_cast<std::size_t>(I)];
          double next;
          if (prev) {
            next = 2.0 * v[idx] - pv[static_cast<std::size_t>(I)][idx] + dt * dt * a;
          } else {
            next = v[idx] + dt * ut_[static_cast<std::size_t>(I)][idx] + 0.5 * dt * dt * a;
          }
          if (!std::isfinite(next)) bad = true;
          nv[static_cast<std::size_t>(I)][idx] = next;
        }
      } else {
        for (int I = 0; I < D; ++I) {
          accel_[static_cast<std::size_t>(I)][idx] = 0.0;
          nv[static_cast<std::size_t>(I)][idx] = 0.0;
        }
      }
      for (int a = n - 1; a >= 0; --a) {
        if (++ijk[static_cast<std::size_t>(a)] <= last) break;
        ijk[static_cast<std::size_t>(a)] = 0;
      }
    }
    partials[begin / kChunkSize] = {sup, margin, bad ? 1.0 : 0.0};
  });

  PassResult r;
  const double sup = deterministic_max(partials.size(), [&](std::size_t b, std::size_t e) {
    double m = 0.0;
    for (std::size_t i = b; i < e; ++i) m = std::max(m, partials[i][0]);
    return m;
  }, 1);
  const double margin = deterministic_max(partials.size(), [&](std::size_t b, std::size_t e) {
    double m = 0.0;
    for (std::size_t i = b; i < e; ++i) m = std::max(m, partials[i][1]);
    return m;
  }, 1);
  r.sup = sup;
  r.margin = margin;
  for (const auto& p : partials) r.nonfinite = r.nonfinite || p[2] != 0.0;
  return r;
}

void LeapfrogSolver::locate_blowup(double t, const std::vector<ScalarField>& u, const std::string& reason) {
  blowup_.flagged = true;
  blowup_.t = t;
  blowup_.reason = reason;
  double best = -1.0;
  for (std::size_t idx = 0; idx < grid_.size(); ++idx) {
    if (pinned_[idx]) continue;
    for (int I = 0; I < D_; ++I) {
      double s = ut_[static_cast<std::size_t>(I)][idx] * ut_[static_cast<std::size_t>(I)][idx];
      for (int a = 1; a <= n_; ++a) {
        const std::size_t sp = grid_.stride(a);
        const int i = grid_.unravel(idx)[static_cast<std::size_t>(a - 1)];
        const double um = (grid_.octant() && i == 0) ? u[static_cast<std::size_t>(I)][idx + sp]
                                                      : u[static_cast<std::size_t>(I)][idx - sp];
        const double d = (u[static_cast<std::size_t>(I)][idx + sp] - um) / (2.0 * grid_.h());
        s += d * d;
      }
      const double v = std::sqrt(s);
      if (!std::isfinite(v)) {
        blowup_.location = grid_.position(idx);
        blowup_.sup = v;
        return;
      }
      if (v > best) {
        best = v;
        blowup_.location = grid_.position(idx);
        blowup_.sup = v;
      }
    }
  }
}

bool LeapfrogSolver::check_blowup(const PassResult& r, double t) {
  last_sup_ = r.sup;
  const std::vector<ScalarField>& level = frame_.current;
  if (r.nonfinite || !std::isfinite(r.sup)) {
    locate_blowup(t, level, "non-finite values");
    return true;
  }
  if (r.sup > ceiling_) {
    locate_blowup(t, level, "sup |u'| above ceiling");
    return true;
  }
  if (r.margin > kStabilityLimit) {
    locate_blowup(t, level, "hyperbolicity margin lost (effective Courant number above 1)");
    return true;
  }
  return false;
}

void LeapfrogSolver::initialize(const std::vector<ScalarField>& f, const std::vector<ScalarField>& g) {
  if (static_cast<int>(f.size()) != D_ || static_cast<int>(g.size()) != D_) {
    throw std::invalid_argument("initial data needs one field per component");
  }
  for (int I = 0; I < D_; ++I) {
    if (!f[static_cast<std::size_t>(I)].grid().same_layout(grid_) || !g[static_cast<std::size_t>(I)].grid().same_layout(grid_)) {
      throw std::invalid_argument("initial data lives on a different grid");
    }
  }
  frame_.current.clear();
  frame_.previous.clear();
  for (int I = 0; I < D_; ++I) {
    ScalarField f0 = f[static_cast<std::size_t>(I)];
    f0.set_time(0.0);
    f0.set_parity(fields::kEven);
    for (std::size_t idx = 0; idx < grid_.size(); ++idx) {
      if (pinned_[idx]) f0[idx] = 0.0;
      ut_[static_cast<std::size_t>(I)][idx] = pinned_[idx] ? 0.0 : g[static_cast<std::size_t>(I)][idx];
    }
    frame_.current.push_back(std::move(f0));
  }
  frame_.dt = grid_.dt();
  frame_.t = 0.0;
  blowup_ = {};
  const PassResult r = advance(0.0, frame_.current, nullptr);
  initial_sup_ = r.sup;
  ceiling_ = options_.blowup_factor * (initial_sup_ > 0.0 ? initial_sup_ : 1.0);
  const bool blew = check_blowup(r, 0.0);
  frame_.previous = std::move(frame_.current);
  frame_.current = scratch_;
  for (auto& c : frame_.current) c.set_time(grid_.dt());
  frame_.t = grid_.dt();
  steps_ = 1;
  have_accel_ = true;
  initialized_ = true;
  (void)blew;
}

void LeapfrogSolver::initialize(const Frame& frame) {
  frame.validate();
  if (frame.components() != D_ || !frame.grid().same_layout(grid_)) throw std::invalid_argument("frame does not match the solver");
  frame_ = frame;
  frame_.dt = grid_.dt();
  steps_ = static_cast<std::size_t>(std::llround(frame.t / grid_.dt()));
  have_accel_ = false;
  initialized_ = true;
  blowup_ = {};
  initial_sup_ = detect_blowup(frame_, std::numeric_limits<double>::infinity()).sup;
  ceiling_ = options_.blowup_factor * (initial_sup_ > 0.0 ? initial_sup_ : 1.0);
}

bool LeapfrogSolver::step() {
  if (!initialized_) throw std::logic_error("solver used before initialize");
  if (blowup_.flagged) return false;
  const double dt = grid_.dt();
  const double t = static_cast<double>(steps_) * dt;
  for (int I = 0; I < D_; ++I) {
    const auto& a = frame_.previous[static_cast<std::size_t>(I)].values();
    const auto& b = frame_.current[static_cast<std::size_t>(I)].values();
    auto& w = ut_[static_cast<std::size_t>(I)];
    const auto& acc = accel_[static_cast<std::size_t>(I)];
    const double half = have_accel_ ? 0.5 * dt : 0.0;
    parallel_for(w.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) w[i] = (b[i] - a[i]) / dt + half * acc[i];
    });
  }
  const PassResult r = advance(t, frame_.current, &frame_.previous);
  have_accel_ = true;
  if (check_blowup(r, t)) return false;
  std::swap(frame_.previous, frame_.current);
  std::swap(frame_.current, scratch_);
  ++steps_;
  frame_.t = static_cast<double>(steps_) * dt;
  for (auto& c : frame_.current) c.set_time(frame_.t);
  for (auto& c : frame_.previous) c.set_time(frame_.t - dt);
  return true;
}

Frame step_leapfrog(const Frame& frame, const nullform::CoefficientSet& cs, double dt) {
  LeapfrogSolver s(cs, frame.grid().with_dt(dt));
  Frame start = frame;
  start.dt = dt;
  s.initialize(start);
  s.step();
  return s.frame();
}

std::vector<ScalarField> sample_profiles(const Grid& grid, const std::vector<profiles::Profile>& p, double t) {
  std::vector<ScalarField> out;
  for (const auto& prof : p) {
    out.push_back(ScalarField::sample(grid, t, [&](const fields::Point& x) { return prof(x); }));
  }
  return out;
}

Trajectory simulate(const SimulationSetup& setup, const std::vector<FrameObserver*>& observers) {
  const auto start = std::chrono::steady_clock::now();
  LeapfrogSolver solver(setup.cs, setup.grid, setup.options);
  const int D = setup.cs.components();
  auto pad = [D](std::vector<profiles::Profile> p) {
    p.resize(static_cast<std::size_t>(D), profiles::Profile::zero());
    return p;
  };
  solver.initialize(sample_profiles(setup.grid, pad(setup.f)), sample_profiles(setup.grid, pad(setup.g)));

  Trajectory traj;
  traj.dt = setup.grid.dt();
  traj.initial_sup = solver.initial_sup();
  bool want_mid = false;
  for (auto* o : observers) want_mid = want_mid || o->wants_midpoint();
  auto notify = [&](const Frame& frame) {
    std::optional<fields::MidpointState> mid;
    if (want_mid) mid = fields::midpoint_state(frame);
    for (auto* o : observers) o->observe(frame, o->wants_midpoint() ? &*mid : nullptr);
    if (setup.snapshot_stride > 0 && solver.steps() % setup.snapshot_stride == 0) traj.snapshots.push_back(frame);
  };

  const auto total = static_cast<std::size_t>(std::max<long long>(1, std::llround(setup.T / setup.grid.dt())));
  if (!solver.blowup().flagged) notify(solver.frame());
  while (!solver.blowup().flagged && solver.steps() < total) {
    if (!solver.step()) break;
    notify(solver.frame());
  }
  traj.final = solver.frame();
  traj.steps = solver.steps();
  traj.t_end = solver.time();
  traj.blowup = solver.blowup();
  traj.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return traj;
}

}  // namespace nullcone::solver
