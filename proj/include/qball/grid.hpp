#pragma once

#include "qball/common.hpp"

namespace qball {

/// Uniform radial grid on [0, r_max] in spatial dimension dim >= 2.
/// Nodes r_i = i*h, i = 0..segments, h = r_max/segments.
struct RadialGrid {
  int dim = 2;
  double r_max = 40.0;
  Index segments = 2000;  // M; node count is M + 1
  double h = 0.02;
  ArrayXd nodes;
  ArrayXd quad_weights;  // trapezoid weights times S_{n-1} r^{n-1}
};

RadialGrid make_grid(int dim, double r_max, Index segments);

/// Surface area of the unit sphere S^{n-1}: 2*pi for n = 2, 4*pi for n = 3.
double unit_sphere_area(int dim);

/// Volume of the n-ball of the given radius.
double ball_volume(int dim, double radius);

/// Real radial field sample; the outer node is pinned to zero (Dirichlet).
struct RadialProfile {
  RadialGrid grid;
  ArrayXd values;
};

/// Builds a profile, checking finiteness and zeroing the boundary node.
RadialProfile make_profile(RadialGrid grid, ArrayXd values);

/// \int f dx over R^n for a radial nodal sample f: trapezoid rule with the
/// r^{n-1} volume weight.
double integrate_radial(const RadialGrid& grid, const ArrayXd& f);

/// Second-order radial Laplacian. Interior nodes use the standard three-point
/// stencil plus the (n-1)/r first-derivative term; the origin uses the
/// regularity limit n * u''(0) with u'(0) = 0. The boundary node is unused
/// under the Dirichlet condition and is returned as zero.
template <typename Derived>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1> radial_laplacian(
    const RadialGrid& g, const Eigen::ArrayBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  using Arr = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  const Index m = g.segments;
  const double h2 = g.h * g.h;
  Arr out(m + 1);
  out(0) = (2.0 * g.dim / h2) * (u(1) - u(0));
  auto up = u.segment(2, m - 1);
  auto uc = u.segment(1, m - 1);
  auto um = u.segment(0, m - 1);
  out.segment(1, m - 1) =
      (up - 2.0 * uc + um) / h2 +
      ((g.dim - 1) / (2.0 * g.h)) * (up - um) / g.nodes.segment(1, m - 1);
  out(m) = Scalar(0);
  return out;
}

ArrayXd radial_laplacian(const RadialProfile& u);

/// First radial derivative: centered differences, one-sided at the endpoints.
template <typename Derived>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1> radial_derivative(
    const RadialGrid& g, const Eigen::ArrayBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  using Arr = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  const Index m = g.segments;
  Arr out(m + 1);
  out(0) = (u(1) - u(0)) / g.h;
  out.segment(1, m - 1) = (u.segment(2, m - 1) - u.segment(0, m - 1)) / (2.0 * g.h);
  out(m) = (u(m) - u(m - 1)) / g.h;
  return out;
}

/// |grad u|^2 = (du/dr)^2 for radial fields.
ArrayXd gradient_norm_sq(const RadialProfile& u);
ArrayXd gradient_norm_sq(const RadialGrid& g, const ArrayXcd& u);

/// Linear resampling onto another grid with the same extent (used to carry a
/// converged profile to a finer resolution).
RadialProfile resample_linear(const RadialProfile& u, const RadialGrid& target);

}  // namespace qball
