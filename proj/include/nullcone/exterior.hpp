#pragma once

#include <functional>
#include <utility>
#include <stdexcept>
#include <vector>

#include "nullcone/fit.hpp"
#include "nullcone/profiles.hpp"
#include "nullcone/solver.hpp"

namespace nullcone::exterior {

/// Ball obstacle {|x| <= radius} with a Dirichlet condition. radius = 0 is
/// accepted as "no obstacle" so runs can be compared with free space.
struct ObstacleSpec {
  double radius = 1.0;

  void validate() const;
  bool empty() const { return radius <= 0.0; }
};

/// Raised when the data does not vanish near the obstacle or the outer edge.
class SupportError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// r_i = rho + i h for i = 0..M, rho + M h = R.
class RadialGrid {
 public:
  RadialGrid(double rho, double R, double h, double dt);

  double rho() const { return rho_; }
  double outer() const { return R_; }
  double h() const { return h_; }
  double dt() const { return dt_; }
  std::size_t size() const { return nodes_; }
  double r(std::size_t i) const { return rho_ + static_cast<double>(i) * h_; }

 private:
  double rho_;
  double R_;
  double h_;
  double dt_;
  std::size_t nodes_;
};

struct RadialTrajectory {
  std::vector<double> r;
  std::vector<double> u;   // final u = v / r
  std::vector<double> ut;  // final d_t u at the last midpoint
  fit::Series local_energy;
  fit::Series total_energy;  // discrete energy conserved by the scheme
  double t_end = 0.0;
  std::size_t steps = 0;
};

/// Integrates v = r u with v_tt = c^2 v_rr on (rho, R), v = 0 at both ends.
/// The local energy 4 pi int_{rho}^{R_loc} (u_t^2 + u_r^2) r^2 dr is recorded
/// at every midpoint plus t = 0. `f`, `g` are radial profiles.
RadialTrajectory simulate_radial_exterior(const profiles::Profile& f, const profiles::Profile& g, double c, double T,
                                          const RadialGrid& grid, double R_loc = 4.0);

/// Same with arbitrary radial data given as functions of r.
RadialTrajectory simulate_radial_exterior(const std::function<double(double)>& f,
                                          const std::function<double(double)>& g, double c, double T,
                                          const RadialGrid& grid, double R_loc = 4.0);

/// Local energy int_{rho + collar < |x| < R_loc} |u'|^2 dx at each frame midpoint.
class LocalEnergyObserver : public solver::FrameObserver {
 public:
  LocalEnergyObserver(double inner_radius, double R_loc, nullform::SpeedVector speeds = {})
      : inner_(inner_radius), outer_(R_loc), speeds_(std::move(speeds)) {}
  void observe(const fields::Frame& frame, const fields::MidpointState* mid) override;
  /// Adds the t = 0 sample from the data.
  void observe_data(const std::vector<fields::ScalarField>& f, const std::vector<fields::ScalarField>& g);
  const fit::Series& series() const { return series_; }

 private:
  double value(const std::vector<std::vector<fields::ScalarField>>& grads) const;
  double inner_;
  double outer_;
  nullform::SpeedVector speeds_;
  fit::Series series_;
};

struct MaskedRun {
  solver::Trajectory trajectory;
  fit::Series local_energy;
  fit::Series energy;  // discrete energy per frame
  /// max over frames of max |u| on the collar rho < r < rho + 2h, divided by
  /// the running sup |u|.
  double collar_ratio = 0.0;
  /// max |u| on the collar divided by h max |grad u| near the obstacle; the
  /// Dirichlet trace is O(h) when this stays bounded (about 2 + sqrt 3).
  double collar_lipschitz = 0.0;
};

/// Cartesian leapfrog with nodes inside the ball pinned to zero (staircase
/// Dirichlet). n = 3 only; the data must vanish within 2h of the obstacle.
/// Diagnostics exclude the collar rho < r < rho + 2h.
MaskedRun simulate_masked_exterior(solver::SimulationSetup setup, const ObstacleSpec& obstacle, double R_loc = 4.0,
                                   const std::vector<solver::FrameObserver*>& extra = {});

/// value(t) = ||u'(t)||^2 over rho < |x| < R_loc, from frames.
fit::Series local_energy_series(const std::vector<fields::Frame>& frames, double rho, double R_loc);

}  // namespace nullcone::exterior
