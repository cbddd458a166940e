#include "qball/evolve.hpp"

#include <cmath>
#include <complex>

namespace qball {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

double half_max_radius(const RadialProfile& u) {
  const double level = 0.5 * u.values.abs().maxCoeff();
  for (Index i = u.grid.segments; i > 0; --i)
    if (std::abs(u.values(i)) >= level) return std::max(u.grid.nodes(i), u.grid.h);
  return u.grid.h;
}

// W'(psi) = (W'(|psi|)/|psi|) psi as a real factor array; the factor tends to
// W''(0) = 1 as |psi| -> 0.
ArrayXd force_factor(const PotentialSpec& p, const ArrayXcd& psi) {
  const ArrayXd s = psi.abs();
  ArrayXd dw(s.size());
  eval_dW_into(p, s, dw);
  return (s > 0.0).select(dw / s, 1.0);
}

ArrayXcd acceleration(const RadialGrid& g, const PotentialSpec& p, const ArrayXcd& psi) {
  ArrayXcd a = radial_laplacian(g, psi) - force_factor(p, psi) * psi;
  a(g.segments) = std::complex<double>(0.0, 0.0);
  return a;
}

double modulus_deviation(const ArrayXcd& psi, const ArrayXd& reference) {
  const double sup = reference.abs().maxCoeff();
  return ((psi.abs() - reference).abs()).maxCoeff() / sup;
}

double localization_radius_state(const EvolutionState& st, double eps) {
  const ArrayXd mass = st.grid.quad_weights * st.psi.abs2();
  const double total = mass.sum();
  if (!(total > 0.0)) return 0.0;
  double cum = 0.0;
  for (Index i = 0; i <= st.grid.segments; ++i) {
    cum += mass(i);
    if (total - cum < eps * total) return st.grid.nodes(i);
  }
  return st.grid.r_max;
}

}  // namespace

EvolutionState make_state(const RadialProfile& u, double omega, double perturbation_amp) {
  if (std::abs(perturbation_amp) > 0.1)
    throw std::invalid_argument("perturbation amplitude must satisfy |amp| <= 0.1");
  EvolutionState st;
  st.grid = u.grid;
  const double w = half_max_radius(u);
  const ArrayXd bump = 1.0 + perturbation_amp * (-(u.grid.nodes / w).square()).exp();
  ArrayXd u0 = u.values * bump;
  u0(u.grid.segments) = 0.0;
  st.psi = u0.cast<std::complex<double>>();
  st.psi_t = std::complex<double>(0.0, -omega) * u.values.cast<std::complex<double>>();
  st.psi_t(u.grid.segments) = std::complex<double>(0.0, 0.0);
  st.time = 0.0;
  return st;
}

EvolutionState init_state(const QBallSolution& sol, double perturbation_amp) {
  if (!sol.converged)
    throw std::invalid_argument("time evolution needs a converged standing wave");
  return make_state(sol.profile, sol.omega, perturbation_amp);
}

void evolve_step(EvolutionState& st, const PotentialSpec& p, double dt) {
  if (!(dt > 0.0) || dt > st.grid.h)
    throw std::invalid_argument("CFL violation: need 0 < dt <= h");
  const ArrayXcd a0 = acceleration(st.grid, p, st.psi);
  st.psi += dt * st.psi_t + (0.5 * dt * dt) * a0;
  st.psi(st.grid.segments) = std::complex<double>(0.0, 0.0);
  const ArrayXcd a1 = acceleration(st.grid, p, st.psi);
  st.psi_t += (0.5 * dt) * (a0 + a1);
  st.psi_t(st.grid.segments) = std::complex<double>(0.0, 0.0);
  st.time += dt;
  if (!st.psi.allFinite())
    throw instability_error("time evolution produced non-finite values");
}

std::pair<double, double> conserved(const EvolutionState& st, const PotentialSpec& p) {
  const ArrayXd energy_density = 0.5 * st.psi_t.abs2() +
                                 0.5 * gradient_norm_sq(st.grid, st.psi) +
                                 eval_W(p, st.psi.abs().eval());
  const double e = integrate_radial(st.grid, energy_density);
  const ArrayXd charge_density = (st.psi_t * st.psi.conjugate()).imag();
  const double h = integrate_radial(st.grid, charge_density);
  return {e, h};
}

StabilityReport stability_run(const RadialProfile& u, double omega,
                              const PotentialSpec& p, double perturbation_amp, double T,
                              double dt, double localization_eps) {
  if (!(omega > 0.0)) throw std::invalid_argument("stability run needs omega > 0");
  const double period = kTwoPi / omega;
  if (!(T > 0.0) || T > 100.0 * period)
    throw std::invalid_argument("stability run horizon must satisfy 0 < T <= 100 periods");
  if (dt <= 0.0) dt = 0.5 * u.grid.h;
  if (dt > u.grid.h) throw std::invalid_argument("CFL violation: need dt <= h");

  // Integer steps per ledger sample (one sample per period).
  const long per_period = static_cast<long>(std::ceil(period / dt));
  const double dt_adj = period / static_cast<double>(per_period);
  const long samples = static_cast<long>(std::ceil(T / period));

  EvolutionState st = make_state(u, omega, perturbation_amp);
  StabilityReport rep;

  auto [e0, h0] = conserved(st, p);
  auto record = [&] {
    LedgerEntry le;
    le.t = st.time;
    auto [e, h] = conserved(st, p);
    le.energy = e;
    le.charge = h;
    le.deviation = modulus_deviation(st.psi, u.values);
    le.localization_radius = localization_radius_state(st, localization_eps);
    st.ledger.push_back(le);
    rep.ledger.push_back(le);
    rep.localization_series.push_back(le.localization_radius);
    rep.max_modulus_deviation = std::max(rep.max_modulus_deviation, le.deviation);
    rep.energy_drift = std::max(rep.energy_drift, std::abs(e - e0) / std::abs(e0));
    rep.charge_drift = std::max(rep.charge_drift, std::abs(h - h0) / std::abs(h0));

    // Tail energy fraction in the outer 10% flags boundary reflections.
    const Index m = st.grid.segments;
    const Index start = static_cast<Index>(std::ceil(0.9 * static_cast<double>(m)));
    const ArrayXd density = 0.5 * st.psi_t.abs2() +
                            0.5 * gradient_norm_sq(st.grid, st.psi) +
                            eval_W(p, st.psi.abs().eval());
    const double tail = (st.grid.quad_weights.segment(start, m - start + 1) *
                         density.segment(start, m - start + 1))
                            .sum();
    if (tail > 0.01 * std::abs(e)) rep.boundary_warning = true;
  };

  record();
  for (long s = 0; s < samples; ++s) {
    for (long i = 0; i < per_period; ++i) evolve_step(st, p, dt_adj);
    record();
  }
  return rep;
}

}  // namespace qball
