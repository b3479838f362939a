#include "nullcone/exterior.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nullcone/energy.hpp"
#include "nullcone/parallel.hpp"

namespace nullcone::exterior {

using fields::ScalarField;

void ObstacleSpec::validate() const {
  if (!std::isfinite(radius) || radius < 0.0 || radius > 1.0) {
    throw std::invalid_argument("obstacle radius must lie in [0, 1]");
  }
}

RadialGrid::RadialGrid(double rho, double R, double h, double dt) : rho_(rho), R_(R), h_(h), dt_(dt) {
  if (!(h > 0.0) || !(R > rho) || rho < 0.0) throw std::invalid_argument("radial grid needs 0 <= rho < R and h > 0");
  const double m = (R - rho) / h;
  const auto M = static_cast<std::size_t>(std::llround(m));
  if (std::abs(m - static_cast<double>(M)) > 1e-9 * std::max(1.0, m)) {
    throw std::invalid_argument("radial grid: (R - rho) / h must be an integer");
  }
  if (M < 4) throw std::invalid_argument("radial grid needs at least 4 cells");
  nodes_ = M + 1;
  R_ = rho + static_cast<double>(M) * h;
  if (!(dt > 0.0)) throw std::invalid_argument("radial grid needs dt > 0");
}

namespace {

void check_radial_support(const std::function<double(double)>& f, const std::function<double(double)>& g,
                          const RadialGrid& grid) {
  const double band = 2.0 * grid.h();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.r(i);
    if (r > grid.rho() + band && r < grid.outer() - band) continue;
    if (f(r) != 0.0 || g(r) != 0.0) {
      std::ostringstream os;
      os << "initial data must vanish within 2h of the obstacle and the outer edge (nonzero at r = " << r << ")";
      throw SupportError(os.str());
    }
  }
}

// d_r v at node i: central inside, one-sided second order at the ends.
double radial_derivative(const std::vector<double>& v, std::size_t i, double h) {
  const std::size_t M = v.size() - 1;
  if (i == 0) return (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  if (i == M) return (3.0 * v[M] - 4.0 * v[M - 1] + v[M - 2]) / (2.0 * h);
  return (v[i + 1] - v[i - 1]) / (2.0 * h);
}

// 4 pi int_rho^{R_loc} (v_t^2 + c^2 (v_r - v / r)^2) dr; with v = r u the
// integrand equals (u_t^2 + c^2 u_r^2) r^2.
double radial_local_energy(const std::vector<double>& vt, const std::vector<double>& v_prev,
                           const std::vector<double>& v_cur, const RadialGrid& grid, double c, double R_loc) {
  const double h = grid.h();
  double sum = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < grid.size() && grid.r(i) <= R_loc + 1e-12; ++i) last = i;
  for (std::size_t i = 0; i <= last; ++i) {
    const double r = grid.r(i);
    const double vr = 0.5 * (radial_derivative(v_prev, i, h) + radial_derivative(v_cur, i, h));
    const double vm = 0.5 * (v_prev[i] + v_cur[i]);
    const double ur = r > 0.0 ? vr - vm / r : 0.0;
    const double w = (i == 0 || i == last) ? 0.5 * h : h;
    sum += w * (vt[i] * vt[i] + c * c * ur * ur);
  }
  return 4.0 * std::numbers::pi * sum;
}

double radial_discrete_energy(const std::vector<double>& a, const std::vector<double>& b, double dt, double h,
                              double c) {
  double kinetic = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = (b[i] - a[i]) / dt;
    kinetic += h * d * d;
  }
  double potential = 0.0;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    potential += h * ((a[i + 1] - a[i]) / h) * ((b[i + 1] - b[i]) / h);
  }
  return kinetic + c * c * potential;
}

}  // namespace

RadialTrajectory simulate_radial_exterior(const std::function<double(double)>& f,
                                          const std::function<double(double)>& g, double c, double T,
                                          const RadialGrid& grid, double R_loc) {
  if (!(c > 0.0)) throw std::invalid_argument("speed must be positive");
  const double h = grid.h();
  const double dt = grid.dt();
  const double lambda2 = (c * dt / h) * (c * dt / h);
  if (c * dt / h > fields::kMaxCfl) throw fields::CflError("radial run: c dt / h exceeds 0.9");
  check_radial_support(f, g, grid);

  const std::size_t N = grid.size();
  std::vector<double> v0(N, 0.0);
  std::vector<double> w(N, 0.0);
  for (std::size_t i = 1; i + 1 < N; ++i) {
    v0[i] = grid.r(i) * f(grid.r(i));
    w[i] = grid.r(i) * g(grid.r(i));
  }

  RadialTrajectory out;
  out.r.resize(N);
  for (std::size_t i = 0; i < N; ++i) out.r[i] = grid.r(i);
  {
    std::vector<double> vt(N);
    for (std::size_t i = 0; i < N; ++i) vt[i] = w[i];
    out.local_energy.emplace_back(0.0, radial_local_energy(vt, v0, v0, grid, c, R_loc));
  }

  std::vector<double> prev = v0;
  std::vector<double> cur(N, 0.0);
  for (std::size_t i = 1; i + 1 < N; ++i) {
    cur[i] = v0[i] + dt * w[i] + 0.5 * lambda2 * (v0[i + 1] - 2.0 * v0[i] + v0[i - 1]);
  }
  std::vector<double> next(N, 0.0);
  std::vector<double> vt(N, 0.0);
  const auto total = static_cast<std::size_t>(std::max<long long>(1, std::llround(T / dt)));
  std::size_t steps = 1;
  auto record = [&]() {
    for (std::size_t i = 0; i < N; ++i) vt[i] = (cur[i] - prev[i]) / dt;
    const double tm = (static_cast<double>(steps) - 0.5) * dt;
    out.local_energy.emplace_back(tm, radial_local_energy(vt, prev, cur, grid, c, R_loc));
    out.total_energy.emplace_back(static_cast<double>(steps) * dt, radial_discrete_energy(prev, cur, dt, h, c));
  };
  record();
  while (steps < total) {
    next[0] = 0.0;
    next[N - 1] = 0.0;
    for (std::size_t i = 1; i + 1 < N; ++i) {
      next[i] = 2.0 * cur[i] - prev[i] + lambda2 * (cur[i + 1] - 2.0 * cur[i] + cur[i - 1]);
    }
    std::swap(prev, cur);
    std::swap(cur, next);
    ++steps;
    record();
  }
  out.u.assign(N, 0.0);
  out.ut.assign(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    const double r = grid.r(i);
    if (r <= 0.0) continue;
    out.u[i] = cur[i] / r;
    out.ut[i] = vt[i] / r;
  }
  out.steps = steps;
  out.t_end = static_cast<double>(steps) * dt;
  return out;
}

RadialTrajectory simulate_radial_exterior(const profiles::Profile& f, const profiles::Profile& g, double c, double T,
                                          const RadialGrid& grid, double R_loc) {
  if (!f.is_radial() || !g.is_radial()) throw std::invalid_argument("radial run needs radial profiles");
  auto radial = [](const profiles::Profile& p) {
    return [p](double r) { return p(fields::Point{r, 0.0, 0.0}); };
  };
  return simulate_radial_exterior(radial(f), radial(g), c, T, grid, R_loc);
}

double LocalEnergyObserver::value(const std::vector<std::vector<ScalarField>>& grads) const {
  const auto& grid = grads.front().front().grid();
  const int n = grid.dim();
  return deterministic_sum(grid.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double r = grid.radius(i);
      if (r <= inner_ || r >= outer_) continue;
      double e = 0.0;
      for (std::size_t I = 0; I < grads.size(); ++I) {
        const double c = I < speeds_.size() ? speeds_[I] : 1.0;
        const double ut = grads[I][0][i];
        double g2 = 0.0;
        for (int a = 1; a <= n; ++a) g2 += grads[I][static_cast<std::size_t>(a)][i] * grads[I][static_cast<std::size_t>(a)][i];
        e += ut * ut + c * c * g2;
      }
      s += grid.quadrature_weight(i) * e;
    }
    return s;
  });
}

void LocalEnergyObserver::observe(const fields::Frame& frame, const fields::MidpointState* mid) {
  if (mid != nullptr) {
    series_.emplace_back(mid->t, value(mid->grad));
    return;
  }
  const fields::MidpointState m = fields::midpoint_state(frame);
  series_.emplace_back(m.t, value(m.grad));
}

void LocalEnergyObserver::observe_data(const std::vector<ScalarField>& f, const std::vector<ScalarField>& g) {
  std::vector<std::vector<ScalarField>> grads;
  for (std::size_t I = 0; I < f.size(); ++I) grads.push_back(energy::level_gradient(f[I], g[I]));
  series_.insert(series_.begin(), {0.0, value(grads)});
}

namespace {

class EnergySeriesObserver : public solver::FrameObserver {
 public:
  explicit EnergySeriesObserver(nullform::SpeedVector speeds) : speeds_(std::move(speeds)) {}
  bool wants_midpoint() const override { return false; }
  void observe(const fields::Frame& frame, const fields::MidpointState*) override {
    series.emplace_back(frame.t, energy::discrete_energy(frame, speeds_));
  }
  fit::Series series;

 private:
  nullform::SpeedVector speeds_;
};

class CollarObserver : public solver::FrameObserver {
 public:
  CollarObserver(const fields::Grid& grid, double rho) : grid_(grid) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double r = grid.radius(i);
      if (r > rho && r < rho + 2.0 * grid.h()) collar_.push_back(i);
      if (r > rho && r < rho + 3.0 * grid.h()) near_.push_back(i);
    }
  }
  bool wants_midpoint() const override { return false; }
  void observe(const fields::Frame& frame, const fields::MidpointState*) override {
    for (const auto& u : frame.current) {
      double c = 0.0;
      for (std::size_t i : collar_) c = std::max(c, std::abs(u[i]));
      sup_ = std::max(sup_, u.max_abs());
      collar_max_ = std::max(collar_max_, c);
      grad_max_ = std::max(grad_max_, near_gradient(u));
    }
  }
  double ratio() const { return sup_ > 0.0 ? collar_max_ / sup_ : 0.0; }
  double lipschitz_ratio() const { return grad_max_ > 0.0 ? collar_max_ / (grid_.h() * grad_max_) : 0.0; }

 private:
  // max |grad u| by central differences next to the obstacle
  double near_gradient(const fields::ScalarField& u) const {
    const double inv2h = 0.5 / grid_.h();
    double m = 0.0;
    for (std::size_t i : near_) {
      const auto ijk = grid_.unravel(i);
      double g2 = 0.0;
      for (int a = 1; a <= 3; ++a) {
        const std::size_t s = grid_.stride(a);
        const std::size_t lo = grid_.octant() && ijk[static_cast<std::size_t>(a - 1)] == 0 ? i + s : i - s;
        const double d = (u[i + s] - u[lo]) * inv2h;
        g2 += d * d;
      }
      m = std::max(m, std::sqrt(g2));
    }
    return m;
  }

  fields::Grid grid_;
  std::vector<std::size_t> collar_;
  std::vector<std::size_t> near_;
  double sup_ = 0.0;
  double collar_max_ = 0.0;
  double grad_max_ = 0.0;
};

}  // namespace

MaskedRun simulate_masked_exterior(solver::SimulationSetup setup, const ObstacleSpec& obstacle, double R_loc,
                                   const std::vector<solver::FrameObserver*>& extra) {
  obstacle.validate();
  const auto& grid = setup.grid;
  if (grid.dim() != 3) throw std::invalid_argument("exterior runs need n = 3");
  const double rho = obstacle.radius;
  setup.options.pin_radius = rho;
  const int D = setup.cs.components();
  setup.f.resize(static_cast<std::size_t>(D), profiles::Profile::zero());
  setup.g.resize(static_cast<std::size_t>(D), profiles::Profile::zero());
  const auto f = solver::sample_profiles(grid, setup.f);
  const auto g = solver::sample_profiles(grid, setup.g);
  if (!obstacle.empty()) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid.radius(i) > rho + 2.0 * grid.h()) continue;
      for (int I = 0; I < D; ++I) {
        if (f[static_cast<std::size_t>(I)][i] != 0.0 || g[static_cast<std::size_t>(I)][i] != 0.0) {
          throw SupportError("initial data must vanish within 2h of the obstacle");
        }
      }
    }
  }
  const double inner = obstacle.empty() ? 0.0 : rho + 2.0 * grid.h();
  LocalEnergyObserver local(obstacle.empty() ? -1.0 : inner, R_loc, setup.cs.speeds);
  EnergySeriesObserver energy(setup.cs.speeds);
  CollarObserver collar(grid, rho);
  std::vector<solver::FrameObserver*> obs{&local, &energy, &collar};
  obs.insert(obs.end(), extra.begin(), extra.end());

  MaskedRun run;
  run.trajectory = solver::simulate(setup, obs);
  local.observe_data(f, g);
  run.local_energy = local.series();
  run.energy = energy.series;
  run.collar_ratio = obstacle.empty() ? 0.0 : collar.ratio();
  run.collar_lipschitz = obstacle.empty() ? 0.0 : collar.lipschitz_ratio();
  return run;
}

fit::Series local_energy_series(const std::vector<fields::Frame>& frames, double rho, double R_loc) {
  LocalEnergyObserver obs(rho, R_loc);
  for (const auto& fr : frames) obs.observe(fr, nullptr);
  return obs.series();
}

}  // namespace nullcone::exterior
