#pragma once

#include <vector>

#include "qball/flow.hpp"

namespace qball {

struct LedgerEntry {
  double t = 0.0;
  double energy = 0.0;
  double charge = 0.0;
  double deviation = 0.0;  // sup | |psi| - u | / ||u||_inf vs the reference profile
  double localization_radius = 0.0;
};

/// Complex radial field pair (psi, psi_t) with Dirichlet outer boundary.
struct EvolutionState {
  RadialGrid grid;
  ArrayXcd psi;
  ArrayXcd psi_t;
  double time = 0.0;
  std::vector<LedgerEntry> ledger;
};

/// Standing-wave initial data psi = u (1 + delta rho(r)), psi_t = -i omega u,
/// with delta rho a Gaussian bump of the given amplitude scaled to the
/// profile's half-max radius. No convergence gate (see init_state).
EvolutionState make_state(const RadialProfile& u, double omega, double perturbation_amp);

/// Gated variant: requires a converged solution and |perturbation| <= 0.1.
EvolutionState init_state(const QBallSolution& sol, double perturbation_amp);

/// One time-centered (velocity-Verlet) step of psi_tt = lap psi - W'(psi),
/// with W'(psi) evaluated as (W'(|psi|)/|psi|) psi, finite at psi = 0.
/// Preconditions: dt <= h (CFL with c = 1).
void evolve_step(EvolutionState& state, const PotentialSpec& p, double dt);

/// Conserved pair (E, H) of the current state.
std::pair<double, double> conserved(const EvolutionState& state, const PotentialSpec& p);

struct StabilityReport {
  double max_modulus_deviation = 0.0;
  double energy_drift = 0.0;  // max relative drift over the run
  double charge_drift = 0.0;
  std::vector<double> localization_series;
  std::vector<LedgerEntry> ledger;
  bool boundary_warning = false;  // tail energy above 1% of E at some sample
};

/// Evolves perturbed standing-wave data for total time T with one ledger
/// sample per period 2 pi / omega. T is capped at 100 periods.
StabilityReport stability_run(const RadialProfile& u, double omega,
                              const PotentialSpec& p, double perturbation_amp, double T,
                              double dt = 0.0, double localization_eps = 1e-2);

}  // namespace qball
