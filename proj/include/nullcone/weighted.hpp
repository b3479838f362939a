#pragma once

#include <deque>
#include <string>
#include <vector>

#include "json.hpp"
#include "nullcone/fit.hpp"
#include "nullcone/profiles.hpp"
#include "nullcone/solver.hpp"

namespace nullcone::weighted {

using fields::Frame;
using fields::MidpointState;
using fields::ScalarField;

inline const std::vector<double> kKappaGrid{0.1, 0.5, 1.0, 2.0};

/// Tangential derivatives at one node: d0 = u_t + c u_r and the squared
/// angular part |grad u - omega u_r|^2 (zero for n = 1). `masked` is set where
/// omega is undefined: r < 2h for n >= 2, x = 0 for n = 1.
struct Tangential {
  double d0 = 0.0;
  double angular2 = 0.0;
  bool masked = false;
};
Tangential tangential_at(int n, const fields::Point& x, double r, double h, double c, double ut, const double* grad);

/// Discrete energy and sup |u'| per frame.
class EnergySeriesObserver : public solver::FrameObserver {
 public:
  explicit EnergySeriesObserver(nullform::SpeedVector speeds) : speeds_(std::move(speeds)) {}
  void observe(const Frame& frame, const MidpointState* mid) override;
  fit::Series energy;  // at frame time t
  fit::Series sup;     // at the midpoint t - dt/2

 private:
  nullform::SpeedVector speeds_;
};

/// Space-time integrals behind the weighted energy estimate, midpoint rule in
/// time and trapezoid rule in space. kss uses <x>^{-1}|u'|^2 summed over
/// components; lr uses <c_I t - r>^{-1}|tangential u_I|^2 per component.
struct WeightedNorms {
  double T = 0.0;
  double sup_gradient = 0.0;  // sup_t ||u'(t)||_{L^2}
  double kss_integral = 0.0;
  std::vector<double> lr_integral;
  double kss_norm = 0.0;  // (log(e + T))^{-1/2} kss_integral^{1/2}
  std::vector<double> lr_norm;
  fit::Series kss_cumulative;
  std::vector<fit::Series> lr_cumulative;
};

class WeightedNormObserver : public solver::FrameObserver {
 public:
  explicit WeightedNormObserver(nullform::SpeedVector speeds);
  void observe(const Frame& frame, const MidpointState* mid) override;
  /// Includes ||u'(0)|| from the data in the sup.
  void observe_data(const std::vector<ScalarField>& f, const std::vector<ScalarField>& g);
  WeightedNorms result() const;

 private:
  nullform::SpeedVector speeds_;
  WeightedNorms acc_;
};

/// Terms of the explicit-constant weighted energy inequality for one speed.
struct WeTerms {
  double c = 1.0;
  double T = 0.0;
  std::vector<double> kappa;
  double standard = 0.0;              // sup_t int u_t^2 + c^2 |grad u|^2
  std::vector<double> kappa_term;     // c kappa / 4 int int (1 + |ct - r|)^{-1-kappa} q
  double log_term = 0.0;              // c / (6 log(e + cT)) int int (1 + |ct - r|)^{-1} q
  double initial_energy = 0.0;        // int g^2 + c^2 |grad f|^2
  double source = 0.0;                // 2 int int |u_t F|
  double forcing_l1l2 = 0.0;          // int ||F(t)||_{L^2} dt
  double rhs = 0.0;
  double tolerance = 0.02;
  double max_lhs = 0.0;
  std::string max_term;
  double ratio = 0.0;  // max_lhs / rhs (0 when both vanish)
  bool holds = true;
  std::string violation;
};

/// Streams the inequality terms for component `component` of a linear run.
class WeObserver : public solver::FrameObserver {
 public:
  WeObserver(double c, profiles::Forcing forcing, std::vector<double> kappa = kKappaGrid, int component = 0);
  void observe(const Frame& frame, const MidpointState* mid) override;
  void observe_data(const ScalarField& f, const ScalarField& g);
  WeTerms result(double tolerance = 0.02) const;

 private:
  double c_;
  profiles::Forcing forcing_;
  std::vector<double> kappa_;
  int component_;
  double T_ = 0.0;
  double standard_ = 0.0;
  double initial_ = 0.0;
  double source_ = 0.0;
  double forcing_norm_ = 0.0;
  double log_integral_ = 0.0;
  std::vector<double> kappa_integral_;
};

/// Energy machinery summary for one run.
struct EnergyReport {
  double e0_total = 0.0;            // int e_0 at the final frame
  std::vector<double> ek_flux;      // int e_k at the final frame
  double divergence_residual = 0.0; // at the first interior level
  double kss_norm = 0.0;
  std::vector<double> lr_norm;      // per speed
  WeTerms we;
  double rhs = 0.0;
  /// Weighted estimate with unit constant: LHS = sup ||u'|| + kss + lr,
  /// RHS = ||grad f|| + ||g|| + int ||F|| dt.
  double kss_lhs = 0.0;
  double kss_rhs = 0.0;
  double kss_ratio = 0.0;
};

nlohmann::json to_json(const WeTerms& w);
nlohmann::json to_json(const WeightedNorms& w);
nlohmann::json to_json(const EnergyReport& r);

/// Runs a linear single-speed setup (forcing from setup.options) and collects
/// every term of the report. Throws std::invalid_argument for nonlinear or
/// multi-speed input.
EnergyReport lemma_we_report(const solver::SimulationSetup& setup, const std::vector<double>& kappa = kKappaGrid,
                             double tolerance = 0.02);

/// Weighted norms for any run (multi-speed allowed).
WeightedNorms weighted_norms(const solver::SimulationSetup& setup, solver::Trajectory* trajectory = nullptr);

/// One Klainerman-Sobolev sample from a 2w+1 level block centred at the
/// sample time (w >= 4 so every composition stays centred).
struct KsSample {
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // 0/0 reported as 0
  double lhs_radius = 0.0;
};
KsSample ks_pointwise_sample(const fields::SpaceTimeBlock& block, double c);

/// Keeps a rolling block of component `component` and samples at the given times.
class KsObserver : public solver::FrameObserver {
 public:
  KsObserver(double c, std::vector<double> times, int component = 0, int half_width = 4);
  bool wants_midpoint() const override { return false; }
  void observe(const Frame& frame, const MidpointState* mid) override;
  const std::vector<KsSample>& samples() const { return samples_; }

 private:
  void push(const ScalarField& level);
  double c_;
  std::vector<double> times_;
  int component_;
  int half_width_;
  std::deque<ScalarField> buffer_;
  std::vector<KsSample> samples_;
};

nlohmann::json to_json(const KsSample& s);

}  // namespace nullcone::weighted
