#include "qball/flow.hpp"

#include <cmath>

namespace qball {

namespace {

void validate(const FlowConfig& cfg, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("charge sigma must be positive");
  if (!(cfg.tol_omega > 0.0 && cfg.tol_omega < 1.0))
    throw std::invalid_argument("tol_omega must lie in (0, 1)");
  if (!(cfg.tol_lambda > 0.0 && cfg.tol_lambda < 1.0))
    throw std::invalid_argument("tol_lambda must lie in (0, 1)");
  if (cfg.max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
}

}  // namespace

RadialProfile initial_guess(const FlowConfig& cfg, const RadialGrid& grid, double sigma) {
  validate(cfg, sigma);
  const GuessSpec& gs = cfg.guess;
  if (!(gs.omega_init > 0.0)) throw std::invalid_argument("guess omega_init must be positive");

  ArrayXd shape;
  if (gs.kind == GuessSpec::Kind::gaussian) {
    if (!(gs.width > 0.0)) throw std::invalid_argument("gaussian guess width must be positive");
    shape = (-grid.nodes.square() / (gs.width * gs.width)).exp();
  } else {
    if (!(gs.radius > 0.0 && gs.radius < grid.r_max))
      throw std::invalid_argument("plateau radius must lie inside the grid");
    shape = (grid.nodes < gs.radius).cast<double>();
  }
  const double q = integrate_radial(grid, shape.square().eval());
  const double amplitude = std::sqrt(sigma / (gs.omega_init * q));
  return make_profile(grid, amplitude * shape);
}

RadialProfile flow_step(const RadialProfile& u, double sigma, const PotentialSpec& p,
                        double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("flow dt must be positive");
  const double omega = omega_from_charge(u, sigma);
  ArrayXd rhs = radial_laplacian(u) - eval_dW_odd(p, u.values) +
                omega * omega * u.values;
  ArrayXd next = u.values + dt * rhs;
  next(u.grid.segments) = 0.0;
  if (!next.allFinite())
    throw instability_error("flow step produced non-finite values; reduce dt");
  return RadialProfile{u.grid, std::move(next)};
}

double static_residual(const RadialProfile& u, double omega, const PotentialSpec& p) {
  const ArrayXd res =
      radial_laplacian(u) - eval_dW_odd(p, u.values) + omega * omega * u.values;
  const double sup = u.values.abs().maxCoeff();
  if (!(sup > 0.0)) return 0.0;
  return res.head(u.grid.segments).abs().maxCoeff() / sup;
}

bool detect_boundary_artifact(const RadialProfile& u, double tail_tol) {
  const Index m = u.grid.segments;
  const Index start = static_cast<Index>(std::ceil(0.9 * static_cast<double>(m)));
  const double sup = u.values.abs().maxCoeff();
  if (!(sup > 0.0)) return false;
  const double tail = u.values.segment(start, m - start + 1).abs().maxCoeff();
  return tail > tail_tol * sup;
}

QBallSolution minimize(const FlowConfig& cfg, const PotentialSpec& p, double sigma,
                       const RadialGrid& grid) {
  return minimize(cfg, p, sigma, initial_guess(cfg, grid, sigma));
}

QBallSolution minimize(const FlowConfig& cfg, const PotentialSpec& p, double sigma,
                       RadialProfile start) {
  validate(cfg, sigma);
  const RadialGrid& g = start.grid;
  const Index m = g.segments;
  const double h = g.h;
  const double dt = cfg.dt > 0.0 ? cfg.dt : 0.4 * h * h;
  const double h2 = h * h;
  const ArrayXd& w = g.quad_weights;

  // Interior stencil: lap_i = cl_i u_{i-1} - (2/h^2) u_i + cu_i u_{i+1}.
  const ArrayXd first = ((g.dim - 1) / (2.0 * h)) / g.nodes.segment(1, m - 1);
  const ArrayXd cl = 1.0 / h2 - first;
  const ArrayXd cu = 1.0 / h2 + first;

  ArrayXd u = std::move(start.values);
  ArrayXd unew(m + 1), sabs(m + 1), dwo(m + 1), wbuf(m + 1), deriv(m + 1);

  QBallSolution sol;
  sol.sigma = sigma;
  sol.lambda_history.reserve(64);

  double omega_prev = 0.0, lambda_prev = 0.0;
  bool stopped = false;
  long steps_done = 0;

  for (long step = 0; step < cfg.max_steps; ++step) {
    const double nrm2 = (w * u.square()).sum();
    if (!(nrm2 > 0.0))
      throw instability_error("flow collapsed to the zero profile");
    const double omega = sigma / nrm2;

    deriv(0) = (u(1) - u(0)) / h;
    deriv.segment(1, m - 1) = (u.segment(2, m - 1) - u.segment(0, m - 1)) / (2.0 * h);
    deriv(m) = (u(m) - u(m - 1)) / h;
    const double grad2 = (w * deriv.square()).sum();

    sabs = u.abs();
    eval_W_into(p, sabs, wbuf);
    const double wint = (w * wbuf).sum();
    const double lambda = (0.5 * grad2 + wint) / sigma + sigma / (2.0 * nrm2);

    if (step > 0 && std::abs(omega - omega_prev) < cfg.tol_omega * std::abs(omega_prev) &&
        std::abs(lambda - lambda_prev) < cfg.tol_lambda * std::abs(lambda_prev)) {
      stopped = true;
      break;
    }
    if (step % cfg.history_stride == 0) sol.lambda_history.push_back(lambda);

    eval_dW_into(p, sabs, dwo);
    dwo *= u.sign();

    const double omega2 = omega * omega;
    unew(0) = u(0) + dt * ((2.0 * g.dim / h2) * (u(1) - u(0)) - dwo(0) + omega2 * u(0));
    unew.segment(1, m - 1) =
        u.segment(1, m - 1) * (1.0 + dt * (omega2 - 2.0 / h2)) +
        dt * (cl * u.segment(0, m - 1) + cu * u.segment(2, m - 1) -
              dwo.segment(1, m - 1));
    unew(m) = 0.0;

    if (!unew.allFinite())
      throw instability_error("gradient flow went unstable; reduce dt");
    u.swap(unew);
    omega_prev = omega;
    lambda_prev = lambda;
    steps_done = step + 1;
  }

  sol.profile = make_profile(g, std::move(u));
  sol.omega = omega_from_charge(sol.profile, sigma);
  sol.steps = steps_done;
  sol.tolerance_stop = stopped;
  sol.static_residual = static_residual(sol.profile, sol.omega, p);
  sol.tail_artifact = detect_boundary_artifact(sol.profile, cfg.tail_tol);
  sol.converged = stopped && !sol.tail_artifact && sol.static_residual < cfg.residual_tol;
  const double sup = sol.profile.values.abs().maxCoeff();
  sol.nonphysical = sol.profile.values.minCoeff() < -cfg.residual_tol * sup;
  sol.diagnostics = compute_diagnostics(sol.profile, sol.omega, p);
  sol.lambda_history.push_back(hylomorphy_sigma(sol.profile, sigma, p));
  return sol;
}

}  // namespace qball
