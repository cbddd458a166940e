#pragma once

#include "qball/functionals.hpp"

namespace qball {

/// Lorentz boost parameters for a standing wave of rest frequency omega0:
/// gamma = 1/sqrt(1 - |v|^2), omega = gamma omega0, k = gamma omega0 v,
/// in units with c = 1. The dispersion identity omega^2 - |k|^2 = omega0^2
/// holds by construction.
struct BoostSpec {
  Vector2d v = Vector2d::Zero();
  double gamma = 1.0;
  double omega0 = 0.0;
  double omega = 0.0;
  Vector2d k = Vector2d::Zero();
};

BoostSpec make_boost(const Vector2d& v, double omega0);

/// Complex field sample psi(t, x) on a uniform 2D Cartesian window
/// [-extent_x, extent_x] x [-extent_y, extent_y].
struct BoostedField {
  double extent_x = 0.0;
  double extent_y = 0.0;
  double spacing = 0.0;
  double time = 0.0;
  ArrayXXcd values;  // values(i, j) at (x1(i), x2(j))
  bool tail_warning = false;

  Index nx() const { return values.rows(); }
  Index ny() const { return values.cols(); }
  double x1(Index i) const { return -extent_x + spacing * static_cast<double>(i); }
  double x2(Index j) const { return -extent_y + spacing * static_cast<double>(j); }
};

/// Cubic (Catmull-Rom) interpolation of the radial profile, even across the
/// origin and zero beyond r_max.
double interp_radial(const RadialProfile& u, double r);

/// Samples psi_v(t,x) = u(gamma(x_par - |v| t), x_perp) exp(i(k.x - omega t)).
/// Sets tail_warning when |psi| on the window boundary has not decayed below
/// 1e-6 of the profile sup norm. Requires a 2D profile.
BoostedField sample_boosted(const RadialProfile& u, const BoostSpec& b, double t,
                            double extent_x, double extent_y, double spacing);

/// Normalized sup norm of psi_tt - lap psi + W'(psi) over the sampled window,
/// with psi_tt from three time samples spaced dt_probe and lap psi from the
/// five-point stencil. Throws when the spacing does not resolve the contracted
/// core (>= 16 points across the half-max width).
double pde_residual(const RadialProfile& u, const BoostSpec& b, const PotentialSpec& p,
                    double t, double extent_x, double extent_y, double spacing,
                    double dt_probe);

/// Charge-weighted barycenter of the sample; throws on a vanishing field.
Vector2d barycenter(const BoostedField& f);

/// Half-max widths of |psi| along the two grid axes through the maximum.
/// With the boost along x1, the contraction shows as
/// width_perp / width_parallel = gamma.
struct WidthMeasurement {
  double parallel = 0.0;  // x1 direction
  double perp = 0.0;      // x2 direction
};

WidthMeasurement half_max_widths(const BoostedField& f);

}  // namespace qball
