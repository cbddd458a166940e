#include "qball/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

namespace qball {

double consistency_lambda(const RadialProfile& u, double omega, const PotentialSpec& p) {
  const double lam = hylomorphy(u, omega, p);
  const double gam = gamma_ratio(u);
  return std::abs(lam - (gam / (u.grid.dim * omega) + omega));
}

FrequencyWindow frequency_window(const RadialProfile& u, const PotentialSpec& p,
                                 double lambda0_value) {
  (void)p;
  const int n = u.grid.dim;
  const double gam = gamma_ratio(u);
  FrequencyWindow w;
  w.gamma_ok = gam < 0.25 * n;
  const double disc = std::sqrt(std::max(0.0, 1.0 - 4.0 * gam / n));
  w.lo = std::max(1.0 - std::sqrt(std::max(0.0, 1.0 - lambda0_value)),
                  0.5 - 0.5 * disc);
  w.hi = 0.5 + 0.5 * disc;
  return w;
}

SolitonChecks verify_soliton(const QBallSolution& sol, const PotentialSpec& p,
                             double lambda0_value, double pohozaev_tol) {
  SolitonChecks c;
  const QBallDiagnostics& d = sol.diagnostics;
  c.hylomorphic = d.lambda < 1.0;
  c.window = frequency_window(sol.profile, p, lambda0_value);
  c.gamma_ok = c.window.gamma_ok;
  c.omega_in_window = sol.omega > c.window.lo && sol.omega < c.window.hi;
  c.omega_above_half_lambda0 = sol.omega > 0.5 * lambda0_value;
  c.pohozaev = d.pohozaev_residual;
  c.pohozaev_ok = c.pohozaev < pohozaev_tol;

  const DensityProfiles dens = densities(sol.profile, sol.omega, p);
  c.support_nonempty = !dens.support.empty();
  c.binding_integral = integrate_radial(sol.profile.grid, dens.rho_B);
  const double bound = std::abs(d.charge) * (1.0 - d.lambda);
  c.binding_integral_ok =
      c.binding_integral >= bound - 1e-10 * std::max(1.0, std::abs(d.charge));
  return c;
}

namespace {

RadialProfile rescale_charge(const RadialProfile& u, double sigma_from, double sigma_to) {
  ArrayXd scaled = u.values * std::sqrt(sigma_to / sigma_from);
  return make_profile(u.grid, std::move(scaled));
}

}  // namespace

SweepResult sweep_charges(const PotentialSpec& p, std::vector<double> sigmas,
                          const FlowConfig& cfg, const RadialGrid& grid,
                          bool warm_start, int jobs) {
  if (sigmas.empty()) throw std::invalid_argument("sweep needs at least one charge");
  for (double s : sigmas)
    if (!(s > 0.0)) throw std::invalid_argument("sweep charges must be positive");
  if (!std::is_sorted(sigmas.begin(), sigmas.end()))
    throw std::invalid_argument("sweep charges must be sorted ascending");

  SweepResult out;
  out.potential_label = p.label();
  out.charge_grid = sigmas;
  out.entries.resize(sigmas.size());

  if (warm_start || jobs <= 1) {
    const QBallSolution* prev = nullptr;
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
      if (warm_start && prev) {
        out.entries[i] = minimize(cfg, p, sigmas[i],
                                  rescale_charge(prev->profile, prev->sigma, sigmas[i]));
      } else {
        out.entries[i] = minimize(cfg, p, sigmas[i], grid);
      }
      if (warm_start && out.entries[i].converged) prev = &out.entries[i];
    }
  } else {
    // Cold starts are independent; fan out over a small worker pool.
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= sigmas.size()) return;
        out.entries[i] = minimize(cfg, p, sigmas[i], grid);
      }
    };
    std::vector<std::thread> pool;
    const int count = std::min<int>(jobs, static_cast<int>(sigmas.size()));
    pool.reserve(count);
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

ThresholdBracket find_min_charge(const PotentialSpec& p, const FlowConfig& cfg,
                                 const RadialGrid& grid, double sigma_lo,
                                 double sigma_hi, double tol) {
  if (!(sigma_lo > 0.0 && sigma_hi > sigma_lo))
    throw std::invalid_argument("threshold bracket must satisfy 0 < sigma_lo < sigma_hi");
  if (!(tol > 0.0)) throw std::invalid_argument("threshold tolerance must be positive");

  std::map<double, QBallSolution> cache;
  auto solve_at = [&](double sigma) -> const QBallSolution& {
    auto it = cache.find(sigma);
    if (it != cache.end()) return it->second;
    // Warm-start from the nearest cached profile.
    const QBallSolution* nearest = nullptr;
    double best = 0.0;
    for (const auto& [s, sol] : cache) {
      const double dist = std::abs(std::log(s / sigma));
      if (!nearest || dist < best) {
        nearest = &sol;
        best = dist;
      }
    }
    QBallSolution sol =
        nearest ? minimize(cfg, p, sigma,
                           rescale_charge(nearest->profile, nearest->sigma, sigma))
                : minimize(cfg, p, sigma, grid);
    return cache.emplace(sigma, std::move(sol)).first->second;
  };

  if (!solve_at(sigma_hi).converged)
    throw std::invalid_argument("threshold bracket: no soliton found at sigma_hi");
  if (solve_at(sigma_lo).converged) {
    ThresholdBracket none;
    none.found = false;
    none.lo = sigma_lo;
    none.hi = sigma_lo;
    return none;  // converges already at sigma_lo
  }

  double lo = sigma_lo, hi = sigma_hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (solve_at(mid).converged)
      hi = mid;
    else
      lo = mid;
  }
  ThresholdBracket b;
  b.found = true;
  b.lo = lo;
  b.hi = hi;
  return b;
}

namespace {

// Largest root above which f stays nonnegative, scanned on a log grid and
// refined by bisection on the last sign change.
double last_sign_change(const std::function<double(double)>& f, double s_lo, double s_hi,
                        bool* sign_ok_beyond) {
  const int samples = 4096;
  const double factor = std::pow(s_hi / s_lo, 1.0 / (samples - 1));
  double s = s_lo;
  double last_neg = 0.0;
  bool any_neg = false;
  for (int j = 0; j < samples; ++j, s *= factor) {
    if (f(s) < 0.0) {
      last_neg = s;
      any_neg = true;
    }
  }
  *sign_ok_beyond = !any_neg || last_neg < s_hi / factor;
  if (!any_neg) return 0.0;
  double a = last_neg, b = std::min(s_hi, last_neg * factor);
  for (int it = 0; it < 80; ++it) {
    const double midpoint = 0.5 * (a + b);
    if (f(midpoint) < 0.0)
      a = midpoint;
    else
      b = midpoint;
  }
  return 0.5 * (a + b);
}

}  // namespace

double analytic_beta0(const PotentialSpec& p, bool* finite) {
  const auto& params = p.params();
  const double a = params.count("a") ? params.at("a") : 0.0;

  if (p.name() == "alpha_beta") {
    // N' = s^2 (1 - a s + s^2); nonnegative beyond the larger root.
    if (a < 2.0) {
      *finite = true;
      return 0.0;
    }
    *finite = true;
    return 0.5 * (a + std::sqrt(a * a - 4.0));
  }
  if (p.name() == "nonalpha_beta") {
    // N' = s^2 (s - a).
    *finite = true;
    return a;
  }
  if (p.name() == "gamma" || p.name() == "alpha_nonbeta") {
    // N' = -s^2/(1+s) resp. s^2 (1-s)/(1-s+s^2): negative for all large s.
    *finite = false;
    return 0.0;
  }
  return last_sign_change([&](double s) { return eval_dN(p, s); }, 1e-4, 1e4, finite);
}

double analytic_alpha0(const PotentialSpec& p, bool* positive_near_zero) {
  // Sign of N just above zero decides; then the first root of N bounds the
  // interval where N stays positive.
  const double probe = 1e-3;
  *positive_near_zero = eval_N(p, probe) > 0.0;
  if (!*positive_near_zero) return 0.0;
  const int samples = 4096;
  const double s_lo = probe, s_hi = 1e4;
  const double factor = std::pow(s_hi / s_lo, 1.0 / (samples - 1));
  double s = s_lo;
  for (int j = 0; j < samples; ++j, s *= factor) {
    if (eval_N(p, s) <= 0.0) {
      double a = s / factor, b = s;
      for (int it = 0; it < 80; ++it) {
        const double midpoint = 0.5 * (a + b);
        if (eval_N(p, midpoint) > 0.0)
          a = midpoint;
        else
          b = midpoint;
      }
      return 0.5 * (a + b);
    }
  }
  return s_hi;  // N positive over the whole scan
}

namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

}  // namespace

ClassificationReport classify(const PotentialSpec& p, const SweepResult& sweep,
                              const std::optional<ThresholdBracket>& threshold) {
  if (sweep.entries.empty()) throw std::invalid_argument("classify: empty sweep");
  const double span = sweep.charge_grid.back() / sweep.charge_grid.front();
  if (span < 10.0)
    throw std::invalid_argument("classify: sweep must span at least one decade of charge");

  ClassificationReport rep;
  rep.potential_label = sweep.potential_label;
  rep.threshold = threshold;
  rep.beta0 = analytic_beta0(p, &rep.beta0_finite);
  rep.alpha0 = analytic_alpha0(p, &rep.alpha0_positive);

  for (std::size_t i = 0; i < sweep.entries.size(); ++i) {
    const QBallSolution& sol = sweep.entries[i];
    if (sol.converged)
      rep.sup_norm_trend.emplace_back(sweep.charge_grid[i], sol.diagnostics.sup_norm);
  }
  if (rep.sup_norm_trend.size() < 3) {
    rep.evidence.push_back("fewer than 3 converged entries; no trend verdicts");
    return rep;
  }

  const auto& trend = rep.sup_norm_trend;
  const double sup_min_sigma = trend.front().second;
  const double sup_max_sigma = trend.back().second;
  const double sup_mid = trend[trend.size() / 2].second;

  const bool threshold_found = threshold && threshold->found;
  const bool converges_at_small = !threshold_found &&
                                  trend.front().first <= sweep.charge_grid.front();

  // type (alpha): a positive minimal charge plus sup norms bounded away from 0.
  const double min_sup =
      std::min_element(trend.begin(), trend.end(), [](const auto& x, const auto& y) {
        return x.second < y.second;
      })->second;
  if (threshold_found && min_sup >= 0.2) {
    rep.type_alpha = TypeVerdict::positive;
    rep.evidence.push_back("alpha: minimal charge bracketed in [" + fmt(threshold->lo) +
                           ", " + fmt(threshold->hi) + "] and min ||u||_inf = " +
                           fmt(min_sup) + " stays away from 0");
  } else if (converges_at_small && sup_min_sigma <= 0.6 * sup_max_sigma) {
    bool declining = true;
    for (std::size_t i = 1; i < std::min<std::size_t>(4, trend.size()); ++i)
      declining = declining && trend[i - 1].second <= trend[i].second * 1.05;
    if (declining) {
      rep.type_alpha = TypeVerdict::negative;
      rep.evidence.push_back(
          "non-alpha: solitons exist down to sigma = " + fmt(trend.front().first) +
          " with ||u||_inf declining to " + fmt(sup_min_sigma));
    }
  }
  if (rep.type_alpha == TypeVerdict::inconclusive)
    rep.evidence.push_back("alpha verdict inconclusive on this sweep");

  // type (beta): sup norms plateau below the analytic bound when it is finite.
  if (rep.beta0_finite && rep.beta0 > 0.0) {
    const bool bounded = std::all_of(trend.begin(), trend.end(), [&](const auto& e) {
      return e.second <= 1.05 * rep.beta0;
    });
    const bool plateau = sup_max_sigma <= 1.10 * sup_mid;
    if (bounded && plateau) {
      rep.type_beta = TypeVerdict::positive;
      rep.evidence.push_back("beta: ||u||_inf plateaus at " + fmt(sup_max_sigma) +
                             " below the N' bound beta0 = " + fmt(rep.beta0));
    }
  }
  if (rep.type_beta == TypeVerdict::inconclusive) {
    bool increasing_tail = true;
    for (std::size_t i = trend.size() - 3; i + 1 < trend.size(); ++i)
      increasing_tail = increasing_tail && trend[i + 1].second > trend[i].second;
    if (increasing_tail && sup_max_sigma >= 1.25 * sup_mid) {
      rep.type_beta = TypeVerdict::negative;
      rep.evidence.push_back("non-beta: ||u||_inf grows through " + fmt(sup_max_sigma) +
                             " with no sign of a bound" +
                             (rep.beta0_finite ? "" : "; N' < 0 for all large s"));
    } else {
      rep.evidence.push_back("beta verdict inconclusive on this sweep");
    }
  }

  rep.type_gamma = rep.type_alpha == TypeVerdict::negative &&
                   rep.type_beta == TypeVerdict::negative;
  return rep;
}

std::string to_string(TypeVerdict v, const char* positive_name, const char* negative_name) {
  switch (v) {
    case TypeVerdict::positive: return positive_name;
    case TypeVerdict::negative: return negative_name;
    case TypeVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string format_report(const ClassificationReport& rep) {
  std::ostringstream out;
  out << "potential = " << rep.potential_label << "\n";
  if (rep.threshold && rep.threshold->found)
    out << "min charge threshold in [" << rep.threshold->lo << ", " << rep.threshold->hi
        << "]\n";
  else if (rep.threshold)
    out << "min charge threshold: none found >= " << rep.threshold->lo << "\n";
  else
    out << "min charge threshold: not probed\n";
  out << "type alpha: " << to_string(rep.type_alpha, "alpha", "non-alpha") << "\n";
  out << "type beta: " << to_string(rep.type_beta, "beta", "non-beta") << "\n";
  if (rep.type_gamma) out << "class: gamma (non-alpha and non-beta)\n";
  if (rep.beta0_finite) out << "analytic beta0 = " << rep.beta0 << "\n";
  if (rep.alpha0_positive) out << "analytic alpha0 = " << rep.alpha0 << "\n";
  out << "sup-norm trend (sigma, ||u||_inf):\n";
  for (const auto& [sigma, sup] : rep.sup_norm_trend)
    out << "  " << sigma << "  " << sup << "\n";
  for (const auto& e : rep.evidence) out << "evidence: " << e << "\n";
  return out.str();
}

}  // namespace qball
