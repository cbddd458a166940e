#include "qball/boost.hpp"

#include <cmath>
#include <complex>

namespace qball {

BoostSpec make_boost(const Vector2d& v, double omega0) {
  const double v2 = v.squaredNorm();
  if (!(v2 < 1.0)) throw std::invalid_argument("boost velocity must satisfy |v| < 1");
  if (!(omega0 > 0.0)) throw std::invalid_argument("rest frequency must be positive");
  BoostSpec b;
  b.v = v;
  b.gamma = 1.0 / std::sqrt(1.0 - v2);
  b.omega0 = omega0;
  b.omega = b.gamma * omega0;
  b.k = b.gamma * omega0 * v;
  return b;
}

double interp_radial(const RadialProfile& u, double r) {
  r = std::abs(r);
  const RadialGrid& g = u.grid;
  if (r >= g.r_max) return 0.0;
  const double x = r / g.h;
  Index j = static_cast<Index>(x);
  if (j > g.segments - 1) j = g.segments - 1;
  const double w = x - static_cast<double>(j);

  // Catmull-Rom on [r_j, r_{j+1}] with even reflection at the origin and a
  // zero ghost beyond the boundary.
  auto at = [&](Index i) -> double {
    if (i < 0) return u.values(-i);
    if (i > g.segments) return 0.0;
    return u.values(i);
  };
  const double pm = at(j - 1), p0 = at(j), p1 = at(j + 1), p2 = at(j + 2);
  const double w2 = w * w, w3 = w2 * w;
  return 0.5 * ((2.0 * p0) + (p1 - pm) * w + (2.0 * pm - 5.0 * p0 + 4.0 * p1 - p2) * w2 +
                (3.0 * p0 - pm - 3.0 * p1 + p2) * w3);
}

namespace {

// Boosted radius: contract the component along v by gamma and follow the
// center moving at v t. For v = 0 this is plain |x|.
double boosted_radius(const BoostSpec& b, double t, double x1, double x2) {
  const double speed = b.v.norm();
  if (speed == 0.0) return std::hypot(x1, x2);
  const double ex = b.v.x() / speed, ey = b.v.y() / speed;
  const double par = x1 * ex + x2 * ey - speed * t;
  const double perp = -x1 * ey + x2 * ex;
  return std::hypot(b.gamma * par, perp);
}

}  // namespace

BoostedField sample_boosted(const RadialProfile& u, const BoostSpec& b, double t,
                            double extent_x, double extent_y, double spacing) {
  if (u.grid.dim != 2)
    throw std::invalid_argument("boost sampling expects a 2D radial profile");
  if (!(spacing > 0.0 && extent_x > 0.0 && extent_y > 0.0))
    throw std::invalid_argument("boost window must have positive extents and spacing");

  BoostedField f;
  f.extent_x = extent_x;
  f.extent_y = extent_y;
  f.spacing = spacing;
  f.time = t;
  const Index nx = static_cast<Index>(std::lround(2.0 * extent_x / spacing)) + 1;
  const Index ny = static_cast<Index>(std::lround(2.0 * extent_y / spacing)) + 1;
  f.values.resize(nx, ny);

  const std::complex<double> i_unit(0.0, 1.0);
  double edge_max = 0.0;
  for (Index j = 0; j < ny; ++j) {
    const double x2 = f.x2(j);
    for (Index i = 0; i < nx; ++i) {
      const double x1 = f.x1(i);
      const double amp = interp_radial(u, boosted_radius(b, t, x1, x2));
      const double phase = b.k.x() * x1 + b.k.y() * x2 - b.omega * t;
      f.values(i, j) = amp * std::exp(i_unit * phase);
      if (i == 0 || i == nx - 1 || j == 0 || j == ny - 1)
        edge_max = std::max(edge_max, std::abs(amp));
    }
  }
  f.tail_warning = edge_max > 1e-6 * u.values.abs().maxCoeff();
  return f;
}

namespace {

double half_max_radius(const RadialProfile& u) {
  const double sup = u.values.abs().maxCoeff();
  const double level = 0.5 * sup;
  for (Index i = u.grid.segments; i > 0; --i) {
    if (std::abs(u.values(i)) >= level) {
      // Crossing lies between node i and node i+1; linear sub-cell estimate.
      if (i == u.grid.segments) return u.grid.r_max;
      const double a = std::abs(u.values(i)), bb = std::abs(u.values(i + 1));
      const double w = a == bb ? 0.0 : (a - level) / (a - bb);
      return u.grid.nodes(i) + w * u.grid.h;
    }
  }
  return 0.0;
}

}  // namespace

double pde_residual(const RadialProfile& u, const BoostSpec& b, const PotentialSpec& p,
                    double t, double extent_x, double extent_y, double spacing,
                    double dt_probe) {
  if (!(dt_probe > 0.0)) throw std::invalid_argument("dt_probe must be positive");
  const double width_par = 2.0 * half_max_radius(u) / b.gamma;
  if (width_par / spacing < 16.0)
    throw std::invalid_argument(
        "spacing does not resolve the contracted soliton core (need >= 16 points "
        "across the half-max width)");

  const BoostedField f0 = sample_boosted(u, b, t, extent_x, extent_y, spacing);
  const BoostedField fm = sample_boosted(u, b, t - dt_probe, extent_x, extent_y, spacing);
  const BoostedField fp = sample_boosted(u, b, t + dt_probe, extent_x, extent_y, spacing);

  const double inv_dt2 = 1.0 / (dt_probe * dt_probe);
  const double inv_h2 = 1.0 / (spacing * spacing);
  double worst = 0.0;
  for (Index j = 1; j < f0.ny() - 1; ++j) {
    for (Index i = 1; i < f0.nx() - 1; ++i) {
      const std::complex<double> c = f0.values(i, j);
      const std::complex<double> psi_tt =
          (fp.values(i, j) - 2.0 * c + fm.values(i, j)) * inv_dt2;
      const std::complex<double> lap =
          (f0.values(i - 1, j) + f0.values(i + 1, j) + f0.values(i, j - 1) +
           f0.values(i, j + 1) - 4.0 * c) *
          inv_h2;
      const std::complex<double> force = dW_over_s(p, std::abs(c)) * c;
      worst = std::max(worst, std::abs(psi_tt - lap + force));
    }
  }
  return worst / u.values.abs().maxCoeff();
}

Vector2d barycenter(const BoostedField& f) {
  double mass = 0.0, mx = 0.0, my = 0.0;
  for (Index j = 0; j < f.ny(); ++j) {
    const double x2 = f.x2(j);
    for (Index i = 0; i < f.nx(); ++i) {
      const double m = std::norm(f.values(i, j));
      mass += m;
      mx += m * f.x1(i);
      my += m * x2;
    }
  }
  if (!(mass > 0.0)) throw std::invalid_argument("barycenter of a vanishing field");
  return Vector2d(mx / mass, my / mass);
}

namespace {

// Width of |psi| >= max/2 along one axis through the maximum, with linear
// sub-cell crossings.
double axis_width(const BoostedField& f, Index ci, Index cj, bool along_x) {
  const Index n = along_x ? f.nx() : f.ny();
  auto value = [&](Index s) {
    return std::abs(along_x ? f.values(s, cj) : f.values(ci, s));
  };
  const Index c = along_x ? ci : cj;
  const double level = 0.5 * value(c);

  double left = 0.0, right = 0.0;
  for (Index s = c; s > 0; --s) {
    if (value(s - 1) < level) {
      const double a = value(s), bb = value(s - 1);
      left = static_cast<double>(c - s) + (a - level) / (a - bb);
      break;
    }
  }
  for (Index s = c; s < n - 1; ++s) {
    if (value(s + 1) < level) {
      const double a = value(s), bb = value(s + 1);
      right = static_cast<double>(s - c) + (a - level) / (a - bb);
      break;
    }
  }
  return (left + right) * f.spacing;
}

}  // namespace

WidthMeasurement half_max_widths(const BoostedField& f) {
  Index ci = 0, cj = 0;
  f.values.abs().maxCoeff(&ci, &cj);
  WidthMeasurement w;
  w.parallel = axis_width(f, ci, cj, true);
  w.perp = axis_width(f, ci, cj, false);
  return w;
}

}  // namespace qball
