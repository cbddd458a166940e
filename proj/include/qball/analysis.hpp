#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qball/flow.hpp"

namespace qball {

/// Admissible-frequency interval for a standing wave: Gamma(u) < n/4 and
/// omega in (lo, hi) with
///   lo = max{1 - sqrt(1 - lambda0), 1/2 - sqrt(1 - 4 Gamma/n)/2}
///   hi = 1/2 + sqrt(1 - 4 Gamma/n)/2.
struct FrequencyWindow {
  double lo = 0.0;
  double hi = 1.0;
  bool gamma_ok = false;  // Gamma(u) < n/4
};

/// |Lambda(u, omega) - (Gamma/(n omega) + omega)|; small only at critical
/// points, where the virial identity removes the potential terms.
/// (pohozaev_residual itself lives with the other functionals.)
double consistency_lambda(const RadialProfile& u, double omega, const PotentialSpec& p);

FrequencyWindow frequency_window(const RadialProfile& u, const PotentialSpec& p,
                                 double lambda0_value);

/// Every computable property a converged standing wave must satisfy.
struct SolitonChecks {
  bool hylomorphic = false;         // Lambda < 1
  bool gamma_ok = false;            // Gamma < n/4
  bool omega_in_window = false;
  bool omega_above_half_lambda0 = false;
  bool pohozaev_ok = false;
  bool support_nonempty = false;    // {rho_B > 0} not empty
  bool binding_integral_ok = false; // \int rho_B >= |H| (1 - Lambda) - tol
  FrequencyWindow window;
  double pohozaev = 0.0;
  double binding_integral = 0.0;
  bool all() const {
    return hylomorphic && gamma_ok && omega_in_window && omega_above_half_lambda0 &&
           pohozaev_ok && support_nonempty && binding_integral_ok;
  }
};

SolitonChecks verify_soliton(const QBallSolution& sol, const PotentialSpec& p,
                             double lambda0_value, double pohozaev_tol = 5e-3);

/// One minimization per requested charge. Entries keep non-converged outcomes
/// with their flags; warm starts reuse the previous converged profile rescaled
/// to the next charge.
struct SweepResult {
  std::string potential_label;
  std::vector<double> charge_grid;
  std::vector<QBallSolution> entries;
};

SweepResult sweep_charges(const PotentialSpec& p, std::vector<double> sigmas,
                          const FlowConfig& cfg, const RadialGrid& grid,
                          bool warm_start = true, int jobs = 1);

/// Result of the minimal-charge bisection. found = false means the flow
/// already converges at sigma_lo ("none found >= sigma_lo").
struct ThresholdBracket {
  bool found = false;
  double lo = 0.0;  // largest probed charge without a soliton
  double hi = 0.0;  // smallest probed charge with one
};

/// Bisection on the convergence outcome between a failing sigma_lo and a
/// converging sigma_hi, to bracket width tol. Throws on a reversed bracket or
/// when sigma_hi itself fails.
ThresholdBracket find_min_charge(const PotentialSpec& p, const FlowConfig& cfg,
                                 const RadialGrid& grid, double sigma_lo,
                                 double sigma_hi, double tol);

enum class TypeVerdict { positive, negative, inconclusive };

/// Evidence-based classification of the nonlinearity from a charge sweep.
/// Finite sweeps cannot certify the universally quantified definitions; the
/// verdicts aggregate the observed trends and the analytic sign conditions of
/// N and N', with the reasoning spelled out in `evidence`.
struct ClassificationReport {
  std::string potential_label;
  std::optional<ThresholdBracket> threshold;
  std::vector<std::pair<double, double>> sup_norm_trend;  // (sigma, ||u||_inf), converged
  TypeVerdict type_alpha = TypeVerdict::inconclusive;
  TypeVerdict type_beta = TypeVerdict::inconclusive;
  bool type_gamma = false;  // non-alpha and non-beta
  bool beta0_finite = false;
  double beta0 = 0.0;       // inf{s : N' >= 0 on (s, inf)} when finite
  bool alpha0_positive = false;
  double alpha0 = 0.0;      // sup{t : N > 0 on (0, t)} when positive near 0
  std::vector<std::string> evidence;
};

ClassificationReport classify(const PotentialSpec& p, const SweepResult& sweep,
                              const std::optional<ThresholdBracket>& threshold = {});

/// Root structure of N' = W' - s. For the built-in potentials this uses the
/// closed forms; custom potentials fall back to a sampled scan.
double analytic_beta0(const PotentialSpec& p, bool* finite);

/// Largest t with N > 0 on (0, t), or 0 when N < 0 immediately (alpha0_positive
/// false). Sampled scan refined by bisection.
double analytic_alpha0(const PotentialSpec& p, bool* positive_near_zero);

std::string to_string(TypeVerdict v, const char* positive_name, const char* negative_name);

/// Formats the classification report as plain text.
std::string format_report(const ClassificationReport& rep);

}  // namespace qball
