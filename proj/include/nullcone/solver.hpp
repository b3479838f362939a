#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "nullcone/field.hpp"
#include "nullcone/nullform.hpp"
#include "nullcone/profiles.hpp"

namespace nullcone::solver {

using fields::Frame;
using fields::Grid;
using fields::ScalarField;

/// Raised when the causal box would not fit the node budget.
class MemoryBudgetError : public std::runtime_error {
 public:
  MemoryBudgetError(const std::string& what, double feasible_T) : std::runtime_error(what), feasible_T_(feasible_T) {}
  double feasible_T() const { return feasible_T_; }

 private:
  double feasible_T_;
};

inline constexpr std::size_t kDefaultNodeBudget = 60'000'000;

/// R = R0 + c_max T + 2h, rounded up to a multiple of h. Throws
/// MemoryBudgetError (carrying the largest feasible T) when a grid with that
/// extent would exceed `node_budget` nodes.
double causal_extent(double data_radius, double c_max, double T, double h, int dim = 3,
                     fields::Symmetry symmetry = fields::Symmetry::full,
                     std::size_t node_budget = kDefaultNodeBudget);

/// dt = 1 / ceil(c_max / (cfl h)): the largest step within the CFL number that
/// lands on every integer time.
double choose_dt(double h, double c_max, double cfl);

/// True when every nonzero coefficient is unchanged by each reflection
/// x_j -> -x_j, i.e. each spatial slot value occurs an even number of times.
/// Octant grids require it.
bool reflection_invariant(const nullform::CoefficientSet& cs);

struct BlowupInfo {
  bool flagged = false;
  double t = 0.0;
  fields::Point location{0.0, 0.0, 0.0};
  double sup = 0.0;
  std::string reason;
};

/// Flags a frame whose midpoint sup |u'| exceeds `ceiling` or holds NaN/Inf.
BlowupInfo detect_blowup(const Frame& frame, double ceiling);

/// Receives every frame (u^m, u^{m+1}) as the solver produces it. `mid` is
/// the midpoint state when wants_midpoint() is true, otherwise null.
class FrameObserver {
 public:
  virtual ~FrameObserver() = default;
  virtual bool wants_midpoint() const { return true; }
  virtual void observe(const Frame& frame, const fields::MidpointState* mid) = 0;
};

struct SolverOptions {
  /// Nodes with r <= pin_radius are held at zero (Dirichlet obstacle). <= 0: none.
  double pin_radius = 0.0;
  /// Per-component external forcing; empty means none.
  std::vector<profiles::Forcing> forcing;
  double blowup_factor = 1e4;
};

/// Explicit second-order scheme for box_{c_I} u_I = F_I(u', u'') + forcing_I:
/// u^{m+1} = 2u^m - u^{m-1} + dt^2 a^m where a = d_t^2 u solves the pointwise
/// D x D system (delta_IK - gamma_I^{K00}) a_K = c_I^2 Lap u_I + B_I +
/// sum_{(k,l) != (0,0)} gamma_I^{Kkl} d_k d_l u_K + forcing_I. The time
/// derivative at level m is predicted as D_- u + (dt / 2) a^{m-1}.
class LeapfrogSolver {
 public:
  LeapfrogSolver(nullform::CoefficientSet cs, Grid grid, SolverOptions options = {});

  /// Taylor start u^1 = f + dt g + dt^2 / 2 a^0 with a^0 from (f, g).
  void initialize(const std::vector<ScalarField>& f, const std::vector<ScalarField>& g);
  /// Starts from a frame whose previous level is at t - dt; the first step
  /// lags the time derivative.
  void initialize(const Frame& frame);

  /// Advances one step; returns false once blow-up has been flagged.
  bool step();

  const Frame& frame() const { return frame_; }
  double time() const { return frame_.t; }
  std::size_t steps() const { return steps_; }
  const Grid& grid() const { return grid_; }
  const nullform::CoefficientSet& coefficients() const { return cs_; }
  const BlowupInfo& blowup() const { return blowup_; }
  double initial_sup() const { return initial_sup_; }
  double ceiling() const { return ceiling_; }
  const std::vector<unsigned char>& pinned() const { return pinned_; }
  /// sup |u'| at the level the last step started from.
  double last_sup() const { return last_sup_; }

 private:
  struct PassResult {
    double sup = 0.0;
    double margin = 0.0;  // worst sqrt(n) * c_eff * dt / h seen
    bool nonfinite = false;
  };
  /// Computes a^m into accel_ and writes the next level into scratch_: the
  /// leapfrog update when `prev` is given, the Taylor start otherwise.
  PassResult advance(double t, const std::vector<ScalarField>& u, const std::vector<ScalarField>* prev);
  bool check_blowup(const PassResult& r, double t);
  void locate_blowup(double t, const std::vector<ScalarField>& u, const std::string& reason);

  nullform::CoefficientSet cs_;
  nullform::NonlinearityKernel kernel_;
  Grid grid_;
  SolverOptions options_;
  int D_;
  int n_;
  std::vector<double> c2_;
  std::vector<unsigned char> pinned_;
  Frame frame_;
  std::vector<std::vector<double>> accel_;
  std::vector<std::vector<double>> ut_;
  std::vector<ScalarField> scratch_;
  bool have_accel_ = false;
  bool initialized_ = false;
  std::size_t steps_ = 0;
  double initial_sup_ = 0.0;
  double ceiling_ = 0.0;
  double last_sup_ = 0.0;
  BlowupInfo blowup_;
};

/// One step of the scheme from `frame` (lagged time derivative).
Frame step_leapfrog(const Frame& frame, const nullform::CoefficientSet& cs, double dt);

struct SimulationSetup {
  nullform::CoefficientSet cs;
  Grid grid{1, 1.0, 1.0, 1.0};
  std::vector<profiles::Profile> f;
  std::vector<profiles::Profile> g;
  SolverOptions options;
  double T = 0.0;
  /// Keep every k-th frame in the trajectory (0: keep none).
  std::size_t snapshot_stride = 0;
};

struct Trajectory {
  std::vector<Frame> snapshots;
  Frame final;
  std::size_t steps = 0;
  double dt = 0.0;
  double t_end = 0.0;
  double initial_sup = 0.0;
  BlowupInfo blowup;
  double wall_seconds = 0.0;
  std::string config_hash;
};

/// Samples the data on the grid and integrates to T (or blow-up), feeding
/// every frame to the observers in order.
Trajectory simulate(const SimulationSetup& setup, const std::vector<FrameObserver*>& observers = {});

/// Samples a profile list on a grid (one field per component).
std::vector<ScalarField> sample_profiles(const Grid& grid, const std::vector<profiles::Profile>& p, double t = 0.0);

}  // namespace nullcone::solver
