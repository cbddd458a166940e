#pragma once

#include <vector>

#include "qball/functionals.hpp"

namespace qball {

/// Initial profile shapes. Amplitudes are set so that the slaved frequency
/// omega_sigma(u) starts at omega_init.
struct GuessSpec {
  enum class Kind { gaussian, plateau };
  Kind kind = Kind::gaussian;
  double width = 5.0;       // gaussian: u = A exp(-r^2 / width^2)
  double radius = 5.0;      // plateau: u = A on [0, radius)
  double omega_init = 0.7;
};

// The stopping distance from the fixed point scales like tol_omega / dt, so
// the per-step tolerances are set two decades below the residual gate times
// the default dt. Looser values leave the static residual above residual_tol
// and mark genuine solitons as non-converged.
struct FlowConfig {
  double dt = 0.0;             // <= 0 selects 0.4 * h^2
  double tol_omega = 1e-11;    // relative per-step frequency tolerance
  double tol_lambda = 1e-13;   // relative per-step Lambda_sigma tolerance
  long max_steps = 5'000'000;
  double residual_tol = 1e-5;  // static-equation sup residual, relative
  double tail_tol = 1e-6;      // boundary-artifact threshold
  GuessSpec guess;
  long history_stride = 1024;
};

/// Output of one constrained minimization.
struct QBallSolution {
  RadialProfile profile;
  double omega = 0.0;
  double sigma = 0.0;
  QBallDiagnostics diagnostics;
  bool converged = false;       // tolerance stop AND tail clean AND small residual
  bool tolerance_stop = false;  // stopping rule fired before max_steps
  bool tail_artifact = false;
  bool nonphysical = false;     // settled with min u < -residual_tol
  long steps = 0;
  double static_residual = 0.0;
  std::vector<double> lambda_history;  // sampled every history_stride steps
};

/// Builds the configured initial shape with charge exactly sigma under the
/// slaved frequency.
RadialProfile initial_guess(const FlowConfig& cfg, const RadialGrid& grid, double sigma);

/// One explicit pseudo-time step u + dt*(lap u - W'(u) + omega^2 u) with
/// omega = omega_sigma(u) recomputed before the step and the outer Dirichlet
/// value re-imposed. Throws instability_error on non-finite output.
RadialProfile flow_step(const RadialProfile& u, double sigma, const PotentialSpec& p,
                        double dt);

/// Sup-norm residual of the static equation, relative to ||u||_inf.
double static_residual(const RadialProfile& u, double omega, const PotentialSpec& p);

/// True iff max |u| over the outer 10% of the grid exceeds tail_tol * ||u||_inf.
bool detect_boundary_artifact(const RadialProfile& u, double tail_tol);

/// Runs the gradient flow of Lambda_sigma from the configured guess until both
/// the frequency and the Lambda_sigma stopping tolerances hold, or max_steps.
/// Non-convergence is reported through the flags, not an exception.
QBallSolution minimize(const FlowConfig& cfg, const PotentialSpec& p, double sigma,
                       const RadialGrid& grid);

/// Warm-started variant.
QBallSolution minimize(const FlowConfig& cfg, const PotentialSpec& p, double sigma,
                       RadialProfile start);

}  // namespace qball
