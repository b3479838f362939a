#pragma once

#include <string>

#include "json.hpp"
#include "nullcone/field.hpp"

namespace nullcone::profiles {

using fields::Point;

/// Smooth compactly supported bump exp(1 - 1 / (1 - s^2)) on |s| < 1, peak 1 at s = 0.
double bump(double s);

/// Named initial-data profile evaluated at a spatial point. All kinds are even
/// under every reflection x_j -> -x_j, so they are valid on octant grids.
///   gaussian: A exp(-r^2 / sigma^2)
///   bump:     A bump(r / radius)
///   shell:    A bump((r - center) / width) (1 + anisotropy (x_1^2 - x_2^2) / r^2)
struct Profile {
  enum class Kind { zero, gaussian, bump, shell };
  Kind kind = Kind::zero;
  double amplitude = 0.0;
  double sigma = 1.0;
  double radius = 1.0;
  double center = 0.0;
  double width = 1.0;
  double anisotropy = 0.0;

  static Profile zero() { return {}; }
  static Profile gaussian(double amplitude, double sigma);
  static Profile bump(double amplitude, double radius);
  static Profile shell(double amplitude, double center, double width, double anisotropy = 0.0);

  double operator()(const Point& x) const;
  /// Radius outside which the profile is zero (Gaussians: below 1e-16 of the peak).
  double support_radius() const;
  /// Radius inside which the profile vanishes (shells only; 0 otherwise).
  double inner_radius() const;
  bool is_zero() const { return kind == Kind::zero || amplitude == 0.0; }
  bool is_radial() const { return kind != Kind::shell || anisotropy == 0.0; }
};

/// Space-time forcing A bump((t - t_mid) / tau) bump(r / radius), supported in
/// t0 < t < t1 and |x| < radius.
struct Forcing {
  enum class Kind { none, spacetime_bump };
  Kind kind = Kind::none;
  double amplitude = 0.0;
  double t0 = 1.0;
  double t1 = 2.0;
  double radius = 1.0;

  static Forcing none() { return {}; }
  static Forcing spacetime_bump(double amplitude, double t0, double t1, double radius);

  double operator()(double t, const Point& x) const;
  bool active() const { return kind != Kind::none && amplitude != 0.0; }
  double support_radius() const { return active() ? radius : 0.0; }
};

nlohmann::json to_json(const Profile& p);
Profile profile_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const Forcing& f);
Forcing forcing_from_json(const nlohmann::json& doc);

}  // namespace nullcone::profiles
