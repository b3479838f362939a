#include "nullcone/weighted.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "nullcone/derivatives.hpp"
#include "nullcone/energy.hpp"
#include "nullcone/parallel.hpp"
#include "nullcone/vector_fields.hpp"

namespace nullcone::weighted {

using nlohmann::json;

Tangential tangential_at(int n, const fields::Point& x, double r, double h, double c, double ut, const double* grad) {
  Tangential t;
  if (n == 1) {
    if (r == 0.0) {
      t.masked = true;
      return t;
    }
    const double ur = (x[0] > 0.0 ? 1.0 : -1.0) * grad[0];
    t.d0 = ut + c * ur;
    return t;
  }
  if (r < 2.0 * h) {
    t.masked = true;
    return t;
  }
  double ur = 0.0;
  for (int j = 0; j < n; ++j) ur += x[static_cast<std::size_t>(j)] / r * grad[j];
  t.d0 = ut + c * ur;
  for (int j = 0; j < n; ++j) {
    const double a = grad[j] - x[static_cast<std::size_t>(j)] / r * ur;
    t.angular2 += a * a;
  }
  return t;
}

namespace {

double speed_of(const nullform::SpeedVector& s, std::size_t I) { return I < s.size() ? s[I] : 1.0; }

}  // namespace

// ---------------------------------------------------------------------------

void EnergySeriesObserver::observe(const Frame& frame, const MidpointState* mid) {
  energy.emplace_back(frame.t, energy::discrete_energy(frame, speeds_));
  const MidpointState local = mid != nullptr ? MidpointState{} : fields::midpoint_state(frame);
  const MidpointState& m = mid != nullptr ? *mid : local;
  const auto& grid = frame.grid();
  const double s = deterministic_max(grid.size(), [&](std::size_t lo, std::size_t hi) {
    double best = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      for (const auto& g : m.grad) {
        double v = 0.0;
        for (const auto& d : g) v += d[i] * d[i];
        if (std::isnan(v)) return v;
        best = std::max(best, v);
      }
    }
    return best;
  });
  sup.emplace_back(m.t, std::sqrt(s));
}

// ---------------------------------------------------------------------------

WeightedNormObserver::WeightedNormObserver(nullform::SpeedVector speeds) : speeds_(std::move(speeds)) {
  acc_.lr_integral.assign(speeds_.size(), 0.0);
  acc_.lr_cumulative.resize(speeds_.size());
}

void WeightedNormObserver::observe(const Frame& frame, const MidpointState* mid) {
  const MidpointState local = mid != nullptr ? MidpointState{} : fields::midpoint_state(frame);
  const MidpointState& m = mid != nullptr ? *mid : local;
  const auto& grid = frame.grid();
  const int n = grid.dim();
  const std::size_t D = m.grad.size();
  if (acc_.lr_integral.size() < D) {
    acc_.lr_integral.resize(D, 0.0);
    acc_.lr_cumulative.resize(D);
  }
  const double t = m.t;
  const auto sums = deterministic_sums(grid.size(), 2 + D, [&](std::size_t lo, std::size_t hi, double* out) {
    double grad[3];
    for (std::size_t i = lo; i < hi; ++i) {
      const double w = grid.quadrature_weight(i);
      const auto x = grid.position(i);
      const double r = grid.radius(i);
      const double ax = 1.0 / std::sqrt(1.0 + r * r);
      for (std::size_t I = 0; I < D; ++I) {
        const double ut = m.grad[I][0][i];
        double g2 = ut * ut;
        for (int a = 0; a < n; ++a) {
          grad[a] = m.grad[I][static_cast<std::size_t>(a + 1)][i];
          g2 += grad[a] * grad[a];
        }
        out[0] += w * g2;
        out[1] += w * ax * g2;
        const double c = speed_of(speeds_, I);
        const Tangential tg = tangential_at(n, x, r, grid.h(), c, ut, grad);
        if (tg.masked) continue;
        const double cone = 1.0 / std::sqrt(1.0 + (c * t - r) * (c * t - r));
        out[2 + I] += w * cone * (tg.d0 * tg.d0 + tg.angular2);
      }
    }
  });
  const double dt = frame.dt;
  acc_.sup_gradient = std::max(acc_.sup_gradient, std::sqrt(sums[0]));
  acc_.kss_integral += dt * sums[1];
  acc_.T = frame.t;
  acc_.kss_cumulative.emplace_back(frame.t, acc_.kss_integral);
  for (std::size_t I = 0; I < D; ++I) {
    acc_.lr_integral[I] += dt * sums[2 + I];
    acc_.lr_cumulative[I].emplace_back(frame.t, acc_.lr_integral[I]);
  }
}

void WeightedNormObserver::observe_data(const std::vector<ScalarField>& f, const std::vector<ScalarField>& g) {
  double total = 0.0;
  for (std::size_t I = 0; I < f.size(); ++I) {
    const auto grad = energy::level_gradient(f[I], g[I]);
    const auto& grid = f[I].grid();
    total += deterministic_sum(grid.size(), [&](std::size_t lo, std::size_t hi) {
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) {
        double v = 0.0;
        for (const auto& d : grad) v += d[i] * d[i];
        s += grid.quadrature_weight(i) * v;
      }
      return s;
    });
  }
  acc_.sup_gradient = std::max(acc_.sup_gradient, std::sqrt(total));
}

WeightedNorms WeightedNormObserver::result() const {
  WeightedNorms out = acc_;
  const double scale = 1.0 / std::sqrt(std::log(std::numbers::e + out.T));
  out.kss_norm = scale * std::sqrt(out.kss_integral);
  out.lr_norm.clear();
  for (double v : out.lr_integral) out.lr_norm.push_back(scale * std::sqrt(v));
  return out;
}

// ---------------------------------------------------------------------------

WeObserver::WeObserver(double c, profiles::Forcing forcing, std::vector<double> kappa, int component)
    : c_(c), forcing_(forcing), kappa_(std::move(kappa)), component_(component) {
  if (!(c > 0.0)) throw std::invalid_argument("speed must be positive");
  for (double k : kappa_) {
    if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("kappa grid must be positive and finite");
  }
  kappa_integral_.assign(kappa_.size(), 0.0);
}

void WeObserver::observe(const Frame& frame, const MidpointState* mid) {
  const MidpointState local = mid != nullptr ? MidpointState{} : fields::midpoint_state(frame);
  const MidpointState& m = mid != nullptr ? *mid : local;
  const auto& grid = frame.grid();
  const int n = grid.dim();
  const auto& G = m.grad[static_cast<std::size_t>(component_)];
  const double t = m.t;
  const double c = c_;
  const std::size_t K = kappa_.size();
  const bool forced = forcing_.active();
  // slots: energy, log integrand, source, |F|^2, kappa integrands
  const auto sums = deterministic_sums(grid.size(), 4 + K, [&](std::size_t lo, std::size_t hi, double* out) {
    double grad[3];
    for (std::size_t i = lo; i < hi; ++i) {
      const double w = grid.quadrature_weight(i);
      const auto x = grid.position(i);
      const double r = grid.radius(i);
      const double ut = G[0][i];
      double g2 = 0.0;
      for (int a = 0; a < n; ++a) {
        grad[a] = G[static_cast<std::size_t>(a + 1)][i];
        g2 += grad[a] * grad[a];
      }
      out[0] += w * (ut * ut + c * c * g2);
      if (forced) {
        const double F = forcing_(t, x);
        out[2] += w * 2.0 * std::abs(ut * F);
        out[3] += w * F * F;
      }
      const Tangential tg = tangential_at(n, x, r, grid.h(), c, ut, grad);
      if (tg.masked) continue;
      const double q = tg.d0 * tg.d0 + c * c * tg.angular2;
      if (q == 0.0) continue;
      const double base = 1.0 + std::abs(c * t - r);
      out[1] += w * q / base;
      const double lb = std::log(base);
      for (std::size_t k = 0; k < K; ++k) out[4 + k] += w * q * std::exp(-(1.0 + kappa_[k]) * lb);
    }
  });
  const double dt = frame.dt;
  standard_ = std::max(standard_, sums[0]);
  log_integral_ += dt * sums[1];
  source_ += dt * sums[2];
  forcing_norm_ += dt * std::sqrt(sums[3]);
  for (std::size_t k = 0; k < K; ++k) kappa_integral_[k] += dt * sums[4 + k];
  T_ = frame.t;
}

void WeObserver::observe_data(const ScalarField& f, const ScalarField& g) {
  const auto grad = energy::level_gradient(f, g);
  const auto& grid = f.grid();
  const double c = c_;
  initial_ = deterministic_sum(grid.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      double g2 = 0.0;
      for (std::size_t a = 1; a < grad.size(); ++a) g2 += grad[a][i] * grad[a][i];
      s += grid.quadrature_weight(i) * (grad[0][i] * grad[0][i] + c * c * g2);
    }
    return s;
  });
  standard_ = std::max(standard_, initial_);
}

WeTerms WeObserver::result(double tolerance) const {
  WeTerms w;
  w.c = c_;
  w.T = T_;
  w.kappa = kappa_;
  w.standard = standard_;
  for (std::size_t k = 0; k < kappa_.size(); ++k) w.kappa_term.push_back(c_ * kappa_[k] / 4.0 * kappa_integral_[k]);
  w.log_term = c_ / (6.0 * std::log(std::numbers::e + c_ * T_)) * log_integral_;
  w.initial_energy = initial_;
  w.source = source_;
  w.forcing_l1l2 = forcing_norm_;
  w.rhs = initial_ + source_;
  w.tolerance = tolerance;
  w.max_lhs = w.standard;
  w.max_term = "standard";
  for (std::size_t k = 0; k < w.kappa_term.size(); ++k) {
    if (w.kappa_term[k] > w.max_lhs) {
      w.max_lhs = w.kappa_term[k];
      w.max_term = "kappa=" + json(kappa_[k]).dump();
    }
  }
  if (w.log_term > w.max_lhs) {
    w.max_lhs = w.log_term;
    w.max_term = "log";
  }
  w.ratio = w.rhs > 0.0 ? w.max_lhs / w.rhs : 0.0;
  const double limit = w.rhs * (1.0 + tolerance);
  auto check = [&](const std::string& name, double v) {
    if (v > limit && w.holds) {
      w.holds = false;
      w.violation = name + " exceeds rhs by factor " + json(v / w.rhs).dump();
    }
  };
  check("standard", w.standard);
  for (std::size_t k = 0; k < w.kappa_term.size(); ++k) check("kappa=" + json(kappa_[k]).dump(), w.kappa_term[k]);
  check("log", w.log_term);
  return w;
}

// ---------------------------------------------------------------------------

json to_json(const WeTerms& w) {
  json kt = json::object();
  for (std::size_t k = 0; k < w.kappa.size(); ++k) kt[json(w.kappa[k]).dump()] = w.kappa_term[k];
  return json{{"c", w.c},
              {"T", w.T},
              {"standard", w.standard},
              {"kappa_term", kt},
              {"log_term", w.log_term},
              {"initial_energy", w.initial_energy},
              {"source", w.source},
              {"rhs", w.rhs},
              {"tolerance", w.tolerance},
              {"max_lhs", w.max_lhs},
              {"max_term", w.max_term},
              {"ratio", w.ratio},
              {"holds", w.holds},
              {"violation", w.violation}};
}

json to_json(const WeightedNorms& w) {
  return json{{"T", w.T},
              {"sup_gradient", w.sup_gradient},
              {"kss_integral", w.kss_integral},
              {"kss_norm", w.kss_norm},
              {"lr_integral", w.lr_integral},
              {"lr_norm", w.lr_norm}};
}

json to_json(const EnergyReport& r) {
  return json{{"e0_total", r.e0_total},
              {"ek_flux", r.ek_flux},
              {"divergence_residual", r.divergence_residual},
              {"kss_norm", r.kss_norm},
              {"lr_norm", r.lr_norm},
              {"we_terms", to_json(r.we)},
              {"rhs", r.rhs},
              {"weighted_estimate", {{"lhs", r.kss_lhs}, {"rhs", r.kss_rhs}, {"ratio", r.kss_ratio}}}};
}

json to_json(const KsSample& s) {
  return json{{"t", s.t}, {"lhs", s.lhs}, {"rhs", s.rhs}, {"ratio", s.ratio}, {"lhs_radius", s.lhs_radius}};
}

namespace {

class DivergenceObserver : public solver::FrameObserver {
 public:
  explicit DivergenceObserver(const nullform::CoefficientSet& cs) : cs_(cs) {}
  bool wants_midpoint() const override { return false; }
  void observe(const Frame& frame, const MidpointState*) override {
    if (done_) return;
    if (!first_) {
      first_ = frame;
      return;
    }
    const auto r = energy::divergence_residual(*first_, frame, cs_);
    residual = r.residual;
    done_ = true;
    first_.reset();
  }
  double residual = 0.0;

 private:
  const nullform::CoefficientSet& cs_;
  std::optional<Frame> first_;
  bool done_ = false;
};

double integral_of(const ScalarField& f) {
  const auto& grid = f.grid();
  return deterministic_sum(grid.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += grid.quadrature_weight(i) * f[i];
    return s;
  });
}

double l2_of(const ScalarField& f) {
  const auto& grid = f.grid();
  return std::sqrt(deterministic_sum(grid.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += grid.quadrature_weight(i) * f[i] * f[i];
    return s;
  }));
}

}  // namespace

EnergyReport lemma_we_report(const solver::SimulationSetup& setup, const std::vector<double>& kappa, double tolerance) {
  if (setup.cs.components() != 1) throw std::invalid_argument("the weighted energy report needs a single-speed run");
  if (!setup.cs.is_linear()) throw std::invalid_argument("the weighted energy report needs a linear run");
  const double c = setup.cs.speeds[0];
  const profiles::Forcing forcing =
      setup.options.forcing.empty() ? profiles::Forcing::none() : setup.options.forcing.front();
  const profiles::Profile f = setup.f.empty() ? profiles::Profile::zero() : setup.f.front();
  const profiles::Profile g = setup.g.empty() ? profiles::Profile::zero() : setup.g.front();
  const auto fs = solver::sample_profiles(setup.grid, {f});
  const auto gs = solver::sample_profiles(setup.grid, {g});

  WeObserver we(c, forcing, kappa);
  we.observe_data(fs[0], gs[0]);
  WeightedNormObserver norms(setup.cs.speeds);
  norms.observe_data(fs, gs);
  DivergenceObserver div(setup.cs);
  const auto traj = solver::simulate(setup, {&we, &norms, &div});
  if (traj.blowup.flagged) throw std::runtime_error("linear run flagged blow-up: " + traj.blowup.reason);

  EnergyReport r;
  r.we = we.result(tolerance);
  r.rhs = r.we.rhs;
  const auto density = energy::energy_density(traj.final, setup.cs);
  r.e0_total = integral_of(density.e[0]);
  for (std::size_t k = 1; k < density.e.size(); ++k) r.ek_flux.push_back(integral_of(density.e[k]));
  r.divergence_residual = div.residual;
  const WeightedNorms w = norms.result();
  r.kss_norm = w.kss_norm;
  r.lr_norm = w.lr_norm;
  const auto grad0 = energy::level_gradient(fs[0], gs[0]);
  double grad_f2 = 0.0;
  for (std::size_t a = 1; a < grad0.size(); ++a) {
    const double v = l2_of(grad0[a]);
    grad_f2 += v * v;
  }
  r.kss_lhs = w.sup_gradient + w.kss_norm;
  for (double v : w.lr_norm) r.kss_lhs += v;
  r.kss_rhs = std::sqrt(grad_f2) + l2_of(gs[0]) + r.we.forcing_l1l2;
  r.kss_ratio = r.kss_rhs > 0.0 ? r.kss_lhs / r.kss_rhs : 0.0;
  return r;
}

WeightedNorms weighted_norms(const solver::SimulationSetup& setup, solver::Trajectory* trajectory) {
  const int D = setup.cs.components();
  auto f = setup.f;
  auto g = setup.g;
  f.resize(static_cast<std::size_t>(D), profiles::Profile::zero());
  g.resize(static_cast<std::size_t>(D), profiles::Profile::zero());
  WeightedNormObserver obs(setup.cs.speeds);
  obs.observe_data(solver::sample_profiles(setup.grid, f), solver::sample_profiles(setup.grid, g));
  auto traj = solver::simulate(setup, {&obs});
  if (trajectory != nullptr) *trajectory = std::move(traj);
  return obs.result();
}

// ---------------------------------------------------------------------------

namespace {

double weighted_l2_sq(const ScalarField& f, const ScalarField* weight) {
  const auto& grid = f.grid();
  return deterministic_sum(grid.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double v = weight != nullptr ? (*weight)[i] * f[i] : f[i];
      s += grid.quadrature_weight(i) * v * v;
    }
    return s;
  });
}

}  // namespace

KsSample ks_pointwise_sample(const fields::SpaceTimeBlock& block, double c) {
  if (block.levels() < 9) throw fields::StencilError("KS sample needs a block of at least 9 levels");
  const std::size_t k = block.levels() / 2;
  const auto& grid = block.grid();
  const int n = grid.dim();
  KsSample s;
  s.t = block.time(k);
  const double t = s.t;

  std::vector<fields::SpaceTimeBlock> du;
  for (int a = 0; a <= n; ++a) du.push_back(fields::partial_derivative(block, a));

  // LHS
  {
    double best = 0.0;
    double where = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double g2 = 0.0;
      for (const auto& d : du) g2 += d.level(k)[i] * d.level(k)[i];
      const double r = grid.radius(i);
      const double w = std::sqrt(std::sqrt(1.0 + r * r) * std::sqrt(1.0 + (r + t) * (r + t)) *
                                 std::sqrt(1.0 + (c * t - r) * (c * t - r)));
      const double v = w * std::sqrt(g2);
      if (v > best) {
        best = v;
        where = r;
      }
    }
    s.lhs = best;
    s.lhs_radius = where;
  }

  // sum over mu + |alpha| <= 2, mu <= 1 of ||L^mu Z^alpha u'||; alpha runs
  // over multisets, the Z with the larger index acting first.
  const auto Z = fields::z_fields(n);
  const auto L = fields::VectorField::scaling();
  const std::size_t nz = Z.size();
  // norms_sq[seq] accumulates over the n + 1 components of u'.
  std::vector<double> level0(1, 0.0);            // u'
  std::vector<double> level1(nz, 0.0);           // Z_i u'
  std::vector<double> level_l(1, 0.0);           // L u'
  std::vector<double> level_lz(nz, 0.0);         // L Z_i u'
  std::vector<double> level2(nz * nz, 0.0);      // Z_j Z_i u', j <= i
  for (int a = 0; a <= n; ++a) {
    const auto& D = du[static_cast<std::size_t>(a)];
    level0[0] += weighted_l2_sq(D.level(k), nullptr);
    level_l[0] += weighted_l2_sq(fields::apply_vector_field(L, D, k), nullptr);
    for (std::size_t i = 0; i < nz; ++i) {
      const auto Y = fields::apply_vector_field(Z[i], D);
      level1[i] += weighted_l2_sq(Y.level(k), nullptr);
      level_lz[i] += weighted_l2_sq(fields::apply_vector_field(L, Y, k), nullptr);
      for (std::size_t j = 0; j <= i; ++j) {
        level2[j * nz + i] += weighted_l2_sq(fields::apply_vector_field(Z[j], Y, k), nullptr);
      }
    }
  }
  double rhs = std::sqrt(level0[0]) + std::sqrt(level_l[0]);
  for (std::size_t i = 0; i < nz; ++i) {
    rhs += std::sqrt(level1[i]) + std::sqrt(level_lz[i]);
    for (std::size_t j = 0; j <= i; ++j) rhs += std::sqrt(level2[j * nz + i]);
  }

  // sum over |alpha| <= 1 of ||<t + |y|> Z^alpha box_c u||
  const auto B = fields::box(block, c);
  const ScalarField w = fields::weight_field({fields::WeightSpec::Kind::time_plus_r, 1.0, c, false}, grid, t);
  rhs += std::sqrt(weighted_l2_sq(B.level(k), &w));
  for (std::size_t i = 0; i < nz; ++i) rhs += std::sqrt(weighted_l2_sq(fields::apply_vector_field(Z[i], B, k), &w));

  s.rhs = rhs;
  s.ratio = rhs > 0.0 ? s.lhs / rhs : 0.0;
  return s;
}

KsObserver::KsObserver(double c, std::vector<double> times, int component, int half_width)
    : c_(c), times_(std::move(times)), component_(component), half_width_(half_width) {
  if (half_width < 4) throw std::invalid_argument("KS observer needs half width >= 4");
  std::sort(times_.begin(), times_.end());
}

void KsObserver::push(const ScalarField& level) {
  buffer_.push_back(level);
  const auto width = static_cast<std::size_t>(2 * half_width_ + 1);
  if (buffer_.size() > width) buffer_.pop_front();
  if (buffer_.size() < width) return;
  const double dt = buffer_[1].time() - buffer_[0].time();
  const double tc = buffer_[static_cast<std::size_t>(half_width_)].time();
  for (double ts : times_) {
    if (std::abs(ts - tc) < 0.5 * dt) {
      fields::SpaceTimeBlock block(std::vector<ScalarField>(buffer_.begin(), buffer_.end()), buffer_.front().time(), dt);
      KsSample s = ks_pointwise_sample(block, c_);
      s.t = ts;
      samples_.push_back(s);
    }
  }
}

void KsObserver::observe(const Frame& frame, const MidpointState*) {
  const auto I = static_cast<std::size_t>(component_);
  if (buffer_.empty()) push(frame.previous[I]);
  push(frame.current[I]);
}

}  // namespace nullcone::weighted
