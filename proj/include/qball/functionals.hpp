#pragma once

#include <utility>
#include <vector>

#include "qball/grid.hpp"
#include "qball/potentials.hpp"

namespace qball {

/// Scalar diagnostics of a standing-wave pair (u, omega).
/// Sign conventions: charge < 0 for omega > 0, sigma = |charge|.
struct QBallDiagnostics {
  double energy = 0.0;
  double charge = 0.0;  // -omega * \int u^2 dx
  double lambda = 0.0;  // E / |H|
  double alpha = 0.0;
  double gamma = 0.0;   // \int |grad u|^2 / \int u^2
  double sup_norm = 0.0;
  double pohozaev_residual = 0.0;
  double omega = 0.0;
};

/// Pointwise densities of a standing wave and the region where binding
/// dominates. rho_B = [|rho_H| - rho_E]^+, support = closure of {rho_B > 0}
/// reported as maximal r-intervals.
struct DensityProfiles {
  ArrayXd rho_E;
  ArrayXd rho_H;
  ArrayXd rho_B;
  std::vector<std::pair<double, double>> support;
};

double energy(const RadialProfile& u, double omega, const PotentialSpec& p);
double charge(const RadialProfile& u, double omega);

/// Frequency slaved to the charge constraint: omega = sigma / \int u^2 dx.
double omega_from_charge(const RadialProfile& u, double sigma);

/// Hylomorphy ratio Lambda(u, omega) = E / |H|.
double hylomorphy(const RadialProfile& u, double omega, const PotentialSpec& p);

/// Charge-reduced ratio Lambda_sigma(u) = Lambda(u, omega_sigma(u)); evaluated
/// through its one-variable form.
double hylomorphy_sigma(const RadialProfile& u, double sigma, const PotentialSpec& p);

double alpha_ratio(const RadialProfile& u, const PotentialSpec& p);
double gamma_ratio(const RadialProfile& u);

DensityProfiles densities(const RadialProfile& u, double omega, const PotentialSpec& p);

/// Smallest grid radius R with \int u^2 - \int_{B_R} u^2 < eps * \int u^2.
double localization_radius(const RadialProfile& u, double eps);

/// Relative virial residual |(1/n - 1/2) \int |grad u|^2 - \int (W - omega^2 u^2 / 2)| / E.
double pohozaev_residual(const RadialProfile& u, double omega, const PotentialSpec& p);

/// All diagnostics of a (u, omega, sigma) triple in one pass.
QBallDiagnostics compute_diagnostics(const RadialProfile& u, double omega,
                                     const PotentialSpec& p);

}  // namespace qball
