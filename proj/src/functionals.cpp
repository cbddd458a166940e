#include "qball/functionals.hpp"

#include <cmath>

namespace qball {

namespace {

double norm_sq(const RadialProfile& u) {
  return integrate_radial(u.grid, u.values.square().eval());
}

void require_nonzero(double nrm2) {
  if (!(nrm2 > 0.0))
    throw std::invalid_argument("degenerate profile: \\int u^2 dx vanishes");
}

}  // namespace

double energy(const RadialProfile& u, double omega, const PotentialSpec& p) {
  const ArrayXd integrand = 0.5 * gradient_norm_sq(u) +
                            0.5 * omega * omega * u.values.square() +
                            eval_W_even(p, u.values);
  return integrate_radial(u.grid, integrand);
}

double charge(const RadialProfile& u, double omega) { return -omega * norm_sq(u); }

double omega_from_charge(const RadialProfile& u, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("charge sigma must be positive");
  const double nrm2 = norm_sq(u);
  require_nonzero(nrm2);
  return sigma / nrm2;
}

double hylomorphy(const RadialProfile& u, double omega, const PotentialSpec& p) {
  const double h = charge(u, omega);
  if (h == 0.0) throw std::invalid_argument("hylomorphy ratio undefined at zero charge");
  return energy(u, omega, p) / std::abs(h);
}

double hylomorphy_sigma(const RadialProfile& u, double sigma, const PotentialSpec& p) {
  if (!(sigma > 0.0)) throw std::invalid_argument("charge sigma must be positive");
  const double nrm2 = norm_sq(u);
  require_nonzero(nrm2);
  const double shape = integrate_radial(
      u.grid, (0.5 * gradient_norm_sq(u) + eval_W_even(p, u.values)).eval());
  return shape / sigma + sigma / (2.0 * nrm2);
}

double alpha_ratio(const RadialProfile& u, const PotentialSpec& p) {
  const double nrm2 = norm_sq(u);
  require_nonzero(nrm2);
  const double shape = integrate_radial(
      u.grid, (0.5 * gradient_norm_sq(u) + eval_W_even(p, u.values)).eval());
  return shape / (0.5 * nrm2);
}

double gamma_ratio(const RadialProfile& u) {
  const double nrm2 = norm_sq(u);
  require_nonzero(nrm2);
  return integrate_radial(u.grid, gradient_norm_sq(u)) / nrm2;
}

DensityProfiles densities(const RadialProfile& u, double omega, const PotentialSpec& p) {
  DensityProfiles d;
  const ArrayXd u2 = u.values.square();
  const ArrayXd nonlinear = eval_W_even(p, u.values) - 0.5 * u2;
  d.rho_E = 0.5 * gradient_norm_sq(u) + 0.5 * (1.0 + omega * omega) * u2 + nonlinear;
  d.rho_H = -omega * u2;
  d.rho_B = (d.rho_H.abs() - d.rho_E).max(0.0);

  const ArrayXd& r = u.grid.nodes;
  bool open = false;
  double lo = 0.0;
  for (Index i = 0; i <= u.grid.segments; ++i) {
    const bool positive = d.rho_B(i) > 0.0;
    if (positive && !open) {
      open = true;
      lo = r(i);
    } else if (!positive && open) {
      open = false;
      d.support.emplace_back(lo, r(i - 1));
    }
  }
  if (open) d.support.emplace_back(lo, r(u.grid.segments));
  return d;
}

double localization_radius(const RadialProfile& u, double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("localization eps must lie in (0, 1)");
  const ArrayXd mass = u.grid.quad_weights * u.values.square();
  const double total = mass.sum();
  if (!(total > 0.0)) return 0.0;
  double cum = 0.0;
  for (Index i = 0; i <= u.grid.segments; ++i) {
    cum += mass(i);
    if (total - cum < eps * total) return u.grid.nodes(i);
  }
  return u.grid.r_max;
}

double pohozaev_residual(const RadialProfile& u, double omega, const PotentialSpec& p) {
  const int n = u.grid.dim;
  const double grad2 = integrate_radial(u.grid, gradient_norm_sq(u));
  const double rhs = integrate_radial(
      u.grid,
      (eval_W_even(p, u.values) - 0.5 * omega * omega * u.values.square()).eval());
  const double lhs = (1.0 / n - 0.5) * grad2;
  return std::abs(lhs - rhs) / energy(u, omega, p);
}

QBallDiagnostics compute_diagnostics(const RadialProfile& u, double omega,
                                     const PotentialSpec& p) {
  QBallDiagnostics d;
  d.omega = omega;
  d.energy = energy(u, omega, p);
  d.charge = charge(u, omega);
  d.lambda = d.charge == 0.0 ? 0.0 : d.energy / std::abs(d.charge);
  d.alpha = alpha_ratio(u, p);
  d.gamma = gamma_ratio(u);
  d.sup_norm = u.values.abs().maxCoeff();
  d.pohozaev_residual = pohozaev_residual(u, omega, p);
  return d;
}

}  // namespace qball
