#include "qball/grid.hpp"

#include <cmath>

namespace qball {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double unit_sphere_area(int dim) {
  return 2.0 * std::pow(kPi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

double ball_volume(int dim, double radius) {
  return unit_sphere_area(dim) / dim * std::pow(radius, dim);
}

RadialGrid make_grid(int dim, double r_max, Index segments) {
  if (dim < 2) throw std::invalid_argument("grid dimension must be >= 2");
  if (!(r_max > 0.0)) throw std::invalid_argument("grid r_max must be positive");
  if (segments < 64) throw std::invalid_argument("grid needs at least 64 segments");

  RadialGrid g;
  g.dim = dim;
  g.r_max = r_max;
  g.segments = segments;
  g.h = r_max / static_cast<double>(segments);
  g.nodes = ArrayXd::LinSpaced(segments + 1, 0.0, r_max);
  g.quad_weights = unit_sphere_area(dim) * g.h * g.nodes.pow(dim - 1);
  g.quad_weights(0) *= 0.5;
  g.quad_weights(segments) *= 0.5;
  return g;
}

RadialProfile make_profile(RadialGrid grid, ArrayXd values) {
  if (values.size() != grid.segments + 1)
    throw std::invalid_argument("profile size does not match the grid");
  if (!values.allFinite()) throw std::invalid_argument("profile has non-finite entries");
  values(grid.segments) = 0.0;
  return RadialProfile{std::move(grid), std::move(values)};
}

double integrate_radial(const RadialGrid& grid, const ArrayXd& f) {
  return (grid.quad_weights * f).sum();
}

ArrayXd radial_laplacian(const RadialProfile& u) {
  return radial_laplacian(u.grid, u.values);
}

ArrayXd gradient_norm_sq(const RadialProfile& u) {
  return radial_derivative(u.grid, u.values).square();
}

ArrayXd gradient_norm_sq(const RadialGrid& g, const ArrayXcd& u) {
  return radial_derivative(g, u).abs2();
}

RadialProfile resample_linear(const RadialProfile& u, const RadialGrid& target) {
  ArrayXd out(target.segments + 1);
  const RadialGrid& src = u.grid;
  for (Index i = 0; i <= target.segments; ++i) {
    const double r = target.nodes(i);
    if (r >= src.r_max) {
      out(i) = 0.0;
      continue;
    }
    const double x = r / src.h;
    const Index j = std::min<Index>(static_cast<Index>(x), src.segments - 1);
    const double w = x - static_cast<double>(j);
    out(i) = (1.0 - w) * u.values(j) + w * u.values(j + 1);
  }
  return make_profile(target, std::move(out));
}

}  // namespace qball
