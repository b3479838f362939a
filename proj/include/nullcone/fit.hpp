#pragma once

#include <utility>
#include <vector>

namespace nullcone::fit {

using Series = std::vector<std::pair<double, double>>;

/// Least-squares fit of log(value) = log_coefficient + exponent * log(1 + t).
struct GrowthFit {
  double exponent = 0.0;
  double log_coefficient = 0.0;
  double residual = 0.0;  // rms of the log misfit
  std::size_t samples = 0;
};

/// Needs >= 5 samples with positive values; throws std::invalid_argument otherwise.
GrowthFit fit_growth(const Series& series);

/// Least-squares fit of log(value) = log(prefactor) - rate * t over t in [t_lo, t_hi].
struct DecayFit {
  bool exited_exactly = false;  // some tail sample is <= 0: no fit
  double rate = 0.0;
  double prefactor = 0.0;
  double residual = 0.0;
  std::size_t samples = 0;
};

DecayFit fit_decay(const Series& series, double t_lo, double t_hi);

/// Slope of log(error) against log(h): the observed convergence order.
double fit_order(const std::vector<double>& h, const std::vector<double>& error);

}  // namespace nullcone::fit
