#include "qball/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "qball/analysis.hpp"
#include "qball/boost.hpp"
#include "qball/evolve.hpp"
#include "qball/io.hpp"

namespace qball::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

// Options shared by every compute subcommand.
struct CommonOpts {
  std::string potential = "gamma";
  std::vector<std::string> terms;  // custom potential term lines
  std::string config_file;
  int dim = 2;
  double rmax = 40.0;
  long nodes = 2000;
  double dt = 0.0;
  double tol_omega = 1e-11;
  double tol_lambda = 1e-13;
  long max_steps = 5'000'000;
  double residual_tol = 1e-5;
  double tail_tol = 1e-6;
  std::string guess = "gaussian";
  double guess_width = 5.0;
  double guess_radius = 5.0;
  double omega_init = 0.7;
  std::string out;
};

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--potential", o.potential,
                  "potential name[:a=<val>] or 'custom' with --term lines");
  sub->add_option("--term", o.terms,
                  "custom potential term, e.g. \"0.5 * s^2\" (repeatable)");
  sub->add_option("--dim", o.dim, "spatial dimension (>= 2)");
  sub->add_option("--rmax", o.rmax, "radial domain extreme");
  sub->add_option("--nodes", o.nodes, "radial segments (>= 64)");
  sub->add_option("--dt", o.dt, "flow pseudo-time step (0 = 0.4 h^2)");
  sub->add_option("--tol-omega", o.tol_omega, "relative per-step frequency tolerance");
  sub->add_option("--tol-lambda", o.tol_lambda, "relative per-step Lambda tolerance");
  sub->add_option("--max-steps", o.max_steps, "flow step budget");
  sub->add_option("--residual-tol", o.residual_tol, "static-equation residual gate");
  sub->add_option("--tail-tol", o.tail_tol, "boundary-artifact threshold");
  sub->add_option("--guess", o.guess, "initial profile: gaussian | plateau");
  sub->add_option("--guess-width", o.guess_width, "gaussian guess width");
  sub->add_option("--guess-radius", o.guess_radius, "plateau guess radius");
  sub->add_option("--omega-init", o.omega_init, "initial slaved frequency of the guess");
  sub->add_option("--out", o.out, "output directory (default $QBALL_OUT_DIR or .)");
  sub->add_option("--config", o.config_file,
                  "plain-text config file (key = value, # comments); flags win");
}

// Expands `--config file` into the equivalent flag list, inserted right after
// the subcommand so explicit flags override file values. Unknown keys surface
// as parse errors.
std::vector<std::string> expand_config_args(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  if (args.empty() || args[0].empty() || args[0][0] == '-')
    throw config_error("--config requires a subcommand");

  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);

  std::set<std::string> given;
  for (const auto& a : args)
    if (a.rfind("--", 0) == 0) given.insert(a.substr(0, a.find('=')));

  std::vector<std::string> injected;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    auto strip = [](std::string t) {
      const auto b = t.find_first_not_of(" \t\r");
      const auto e = t.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
    };
    const std::string text = strip(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw config_error(path + ":" + std::to_string(lineno) +
                         ": expected 'key = value'");
    std::string key = strip(text.substr(0, eq));
    std::string value = strip(text.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (key.empty() || value.empty())
      throw config_error(path + ":" + std::to_string(lineno) +
                         ": expected 'key = value'");
    if (key == "config")
      throw config_error(path + ": config files cannot nest");
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string flag = "--" + key;
    if (given.count(flag)) continue;  // explicit flag wins
    injected.push_back(flag);
    injected.push_back(value);
  }

  std::vector<std::string> out;
  out.reserve(args.size() + injected.size());
  out.push_back(args[0]);
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), args.begin() + 1, args.end());
  return out;
}

PotentialSpec build_potential(const CommonOpts& o) {
  std::string name = o.potential;
  std::map<std::string, double> params;
  if (const auto colon = name.find(':'); colon != std::string::npos) {
    std::string plist = name.substr(colon + 1);
    name = name.substr(0, colon);
    std::istringstream ss(plist);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw config_error("malformed potential parameter: " + item);
      params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
  }
  if (name == "custom") {
    if (o.terms.empty())
      throw config_error("custom potential needs at least one --term / term line");
    return custom_potential("custom", o.terms);
  }
  return builtin_potential(name, params);
}

RadialGrid build_grid(const CommonOpts& o) { return make_grid(o.dim, o.rmax, o.nodes); }

FlowConfig build_flow(const CommonOpts& o) {
  FlowConfig cfg;
  cfg.dt = o.dt;
  cfg.tol_omega = o.tol_omega;
  cfg.tol_lambda = o.tol_lambda;
  cfg.max_steps = o.max_steps;
  cfg.residual_tol = o.residual_tol;
  cfg.tail_tol = o.tail_tol;
  if (o.guess == "gaussian")
    cfg.guess.kind = GuessSpec::Kind::gaussian;
  else if (o.guess == "plateau")
    cfg.guess.kind = GuessSpec::Kind::plateau;
  else
    throw config_error("unknown guess kind: " + o.guess);
  cfg.guess.width = o.guess_width;
  cfg.guess.radius = o.guess_radius;
  cfg.guess.omega_init = o.omega_init;
  return cfg;
}

fs::path out_dir(const CommonOpts& o) {
  fs::path dir = o.out;
  if (dir.empty()) {
    if (const char* env = std::getenv("QBALL_OUT_DIR")) dir = env;
    else dir = ".";
  }
  fs::create_directories(dir);
  return dir;
}

std::vector<double> parse_charges(const std::string& text) {
  std::vector<double> out;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw config_error("empty charge list");
  return out;
}

Vector2d parse_velocity(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw config_error("velocity must be two comma-separated components");
  return Vector2d(std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)));
}

void manifest_common(io::Manifest& m, const std::string& subcommand, const CommonOpts& o,
                     const PotentialSpec& p, const FlowConfig& cfg, const RadialGrid& g) {
  m.add("tool", std::string("qball ") + kVersion);
  m.add("subcommand", subcommand);
  m.add("potential", p.label());
  m.add("dim", static_cast<long>(g.dim));
  m.add("rmax", g.r_max);
  m.add("nodes", static_cast<long>(g.segments));
  m.add("h", g.h);
  m.add("dt", cfg.dt > 0.0 ? cfg.dt : 0.4 * g.h * g.h);
  m.add("tol_omega", cfg.tol_omega);
  m.add("tol_lambda", cfg.tol_lambda);
  m.add("max_steps", cfg.max_steps);
  m.add("residual_tol", cfg.residual_tol);
  m.add("tail_tol", cfg.tail_tol);
  m.add("guess", o.guess);
  m.add("guess_width", o.guess_width);
  m.add("guess_radius", o.guess_radius);
  m.add("omega_init", o.omega_init);
  m.note("frequency is slaved to the charge before each step (pre-step update)");
  m.note("stopping needs both the omega and the Lambda tolerances per step");
}

void manifest_solution(io::Manifest& m, const std::string& prefix, const QBallSolution& s) {
  m.add(prefix + ".sigma", s.sigma);
  m.add(prefix + ".omega", s.omega);
  m.add(prefix + ".energy", s.diagnostics.energy);
  m.add(prefix + ".charge", s.diagnostics.charge);
  m.add(prefix + ".lambda", s.diagnostics.lambda);
  m.add(prefix + ".alpha", s.diagnostics.alpha);
  m.add(prefix + ".gamma", s.diagnostics.gamma);
  m.add(prefix + ".sup_norm", s.diagnostics.sup_norm);
  m.add(prefix + ".pohozaev_residual", s.diagnostics.pohozaev_residual);
  m.add(prefix + ".static_residual", s.static_residual);
  m.add(prefix + ".steps", s.steps);
  m.add(prefix + ".converged", s.converged);
  m.add(prefix + ".tail_artifact", s.tail_artifact);
  m.add(prefix + ".nonphysical", s.nonphysical);
}

void write_profile_csv(const fs::path& path, const RadialProfile& u, double omega,
                       const PotentialSpec& p) {
  const DensityProfiles d = densities(u, omega, p);
  io::write_csv(path, {"r", "u", "rho_E", "rho_H", "rho_B"},
                {u.grid.nodes, u.values, d.rho_E, d.rho_H, d.rho_B});
}

std::string sigma_tag(double sigma) {
  std::ostringstream out;
  out << "s" << sigma;
  return out.str();
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

// ---------------------------------------------------------------- solve ----

int cmd_solve(const CommonOpts& o, double sigma, bool strict) {
  Timer timer;
  const PotentialSpec p = build_potential(o);
  const RadialGrid g = build_grid(o);
  const FlowConfig cfg = build_flow(o);
  const QBallSolution sol = minimize(cfg, p, sigma, g);

  const fs::path dir = out_dir(o);
  write_profile_csv(dir / "profile.csv", sol.profile, sol.omega, p);

  io::Manifest m;
  manifest_common(m, "solve", o, p, cfg, g);
  m.add("charge", sigma);
  manifest_solution(m, "solution", sol);
  m.add("wall_time_s", timer.seconds());
  m.add_file(dir / "profile.csv");
  m.write(dir / "manifest.txt");

  std::cout << "sigma = " << sigma << "  omega = " << sol.omega
            << "  Lambda = " << sol.diagnostics.lambda
            << "  sup|u| = " << sol.diagnostics.sup_norm
            << "  converged = " << (sol.converged ? "yes" : "no") << "\n";
  if (strict && !sol.converged)
    throw nonconvergence_error("no converged soliton at sigma = " +
                               io::format_double(sigma));
  return 0;
}

// ---------------------------------------------------------------- sweep ----

void write_sweep_csv(const fs::path& path, const SweepResult& sweep) {
  const Index n = static_cast<Index>(sweep.entries.size());
  ArrayXd sigma(n), omega(n), lambda(n), energy(n), charge_col(n), gamma(n), alpha(n),
      sup(n), poho(n), conv(n);
  for (Index i = 0; i < n; ++i) {
    const QBallSolution& s = sweep.entries[i];
    sigma(i) = sweep.charge_grid[i];
    omega(i) = s.omega;
    lambda(i) = s.diagnostics.lambda;
    energy(i) = s.diagnostics.energy;
    charge_col(i) = s.diagnostics.charge;
    gamma(i) = s.diagnostics.gamma;
    alpha(i) = s.diagnostics.alpha;
    sup(i) = s.diagnostics.sup_norm;
    poho(i) = s.diagnostics.pohozaev_residual;
    conv(i) = s.converged ? 1.0 : 0.0;
  }
  io::write_csv(path,
                {"sigma", "omega", "Lambda", "E", "H", "Gamma", "alpha", "sup_norm",
                 "pohozaev_residual", "converged"},
                {sigma, omega, lambda, energy, charge_col, gamma, alpha, sup, poho, conv});
}

int cmd_sweep(const CommonOpts& o, const std::string& charges_text, bool cold, int jobs) {
  Timer timer;
  const PotentialSpec p = build_potential(o);
  const RadialGrid g = build_grid(o);
  const FlowConfig cfg = build_flow(o);
  std::vector<double> charges = parse_charges(charges_text);

  const SweepResult sweep = sweep_charges(p, charges, cfg, g, !cold, jobs);

  const fs::path dir = out_dir(o);
  write_sweep_csv(dir / "sweep.csv", sweep);

  io::Manifest m;
  manifest_common(m, "sweep", o, p, cfg, g);
  m.add("charges", charges_text);
  m.add("warm_start", !cold);
  m.add("jobs", static_cast<long>(jobs));
  m.add_file(dir / "sweep.csv");
  for (std::size_t i = 0; i < sweep.entries.size(); ++i) {
    const QBallSolution& s = sweep.entries[i];
    manifest_solution(m, "entry." + sigma_tag(sweep.charge_grid[i]), s);
    if (s.converged) {
      const fs::path prof = dir / ("profile_" + sigma_tag(sweep.charge_grid[i]) + ".csv");
      write_profile_csv(prof, s.profile, s.omega, p);
      m.add_file(prof);
    }
  }
  m.add("wall_time_s", timer.seconds());
  m.write(dir / "manifest.txt");

  for (std::size_t i = 0; i < sweep.entries.size(); ++i)
    std::cout << "sigma = " << sweep.charge_grid[i]
              << "  omega = " << sweep.entries[i].omega
              << "  Lambda = " << sweep.entries[i].diagnostics.lambda
              << "  converged = " << (sweep.entries[i].converged ? "yes" : "no") << "\n";
  return 0;
}

// ------------------------------------------------------------- classify ----

int cmd_classify(const CommonOpts& o, const std::string& charges_text, double sigma_lo,
                 double sigma_hi, double threshold_tol) {
  Timer timer;
  const PotentialSpec p = build_potential(o);
  const RadialGrid g = build_grid(o);
  const FlowConfig cfg = build_flow(o);
  std::vector<double> charges = parse_charges(charges_text);

  const SweepResult sweep = sweep_charges(p, charges, cfg, g, true, 1);
  std::optional<ThresholdBracket> threshold;
  try {
    threshold = find_min_charge(p, cfg, g, sigma_lo, sigma_hi, threshold_tol);
  } catch (const std::invalid_argument& e) {
    std::cerr << "threshold search skipped: " << e.what() << "\n";
  }
  const ClassificationReport rep = classify(p, sweep, threshold);
  const std::string text = format_report(rep);

  const fs::path dir = out_dir(o);
  write_sweep_csv(dir / "sweep.csv", sweep);
  {
    std::ofstream rf(dir / "report.txt");
    rf << text;
  }

  io::Manifest m;
  manifest_common(m, "classify", o, p, cfg, g);
  m.add("charges", charges_text);
  m.add("sigma_lo", sigma_lo);
  m.add("sigma_hi", sigma_hi);
  m.add("threshold_tol", threshold_tol);
  m.add("type_alpha", to_string(rep.type_alpha, "alpha", "non-alpha"));
  m.add("type_beta", to_string(rep.type_beta, "beta", "non-beta"));
  m.add("type_gamma", rep.type_gamma);
  m.add("wall_time_s", timer.seconds());
  m.add_file(dir / "sweep.csv");
  m.add_file(dir / "report.txt");
  m.write(dir / "manifest.txt");

  std::cout << text;
  return 0;
}

// ---------------------------------------------------------------- boost ----

int cmd_boost(const CommonOpts& o, double sigma, const std::string& v_text,
              double extent_x, double extent_y, double spacing, double t_sample,
              double dt_probe, double drift_dt, bool with_residual) {
  Timer timer;
  const PotentialSpec p = build_potential(o);
  const RadialGrid g = build_grid(o);
  const FlowConfig cfg = build_flow(o);
  const Vector2d v = parse_velocity(v_text);

  const QBallSolution sol = minimize(cfg, p, sigma, g);
  if (!sol.converged)
    throw nonconvergence_error("no converged soliton to boost at sigma = " +
                               io::format_double(sigma));
  const BoostSpec b = make_boost(v, sol.omega);

  const BoostedField f = sample_boosted(sol.profile, b, t_sample, extent_x, extent_y,
                                        spacing);
  const fs::path dir = out_dir(o);
  {
    const Index count = f.nx() * f.ny();
    ArrayXd x1(count), x2(count), re(count), im(count), abs_col(count);
    Index row = 0;
    for (Index j = 0; j < f.ny(); ++j)
      for (Index i = 0; i < f.nx(); ++i, ++row) {
        x1(row) = f.x1(i);
        x2(row) = f.x2(j);
        re(row) = f.values(i, j).real();
        im(row) = f.values(i, j).imag();
        abs_col(row) = std::abs(f.values(i, j));
      }
    io::write_csv(dir / "field.csv", {"x1", "x2", "re", "im", "abs"},
                  {x1, x2, re, im, abs_col});
  }

  const WidthMeasurement w = half_max_widths(f);
  const BoostedField f2 = sample_boosted(sol.profile, b, t_sample + drift_dt, extent_x,
                                         extent_y, spacing);
  const Vector2d q1 = barycenter(f), q2 = barycenter(f2);
  const Vector2d rate = (q2 - q1) / drift_dt;

  io::Manifest m;
  manifest_common(m, "boost", o, p, cfg, g);
  m.add("charge", sigma);
  manifest_solution(m, "solution", sol);
  m.add("v", v_text);
  m.add("boost.gamma", b.gamma);
  m.add("boost.omega0", b.omega0);
  m.add("boost.omega", b.omega);
  m.add("boost.k1", b.k.x());
  m.add("boost.k2", b.k.y());
  m.add("sample.time", t_sample);
  m.add("sample.extent_x", extent_x);
  m.add("sample.extent_y", extent_y);
  m.add("sample.spacing", spacing);
  m.add("sample.tail_warning", f.tail_warning);
  m.add("width.parallel", w.parallel);
  m.add("width.perp", w.perp);
  m.add("width.ratio", w.perp / w.parallel);
  m.add("barycenter.x1", q1.x());
  m.add("barycenter.x2", q1.y());
  m.add("barycenter.drift_rate_x1", rate.x());
  m.add("barycenter.drift_rate_x2", rate.y());
  if (with_residual) {
    const double r1 =
        pde_residual(sol.profile, b, p, t_sample, extent_x, extent_y, spacing, dt_probe);
    const double r2 = pde_residual(sol.profile, b, p, t_sample, extent_x, extent_y,
                                   0.5 * spacing, 0.5 * dt_probe);
    m.add("pde_residual.coarse", r1);
    m.add("pde_residual.fine", r2);
    m.add("pde_residual.ratio", r1 / r2);
  }
  m.add("wall_time_s", timer.seconds());
  m.add_file(dir / "field.csv");
  m.write(dir / "manifest.txt");

  std::cout << "gamma = " << b.gamma << "  width ratio = " << w.perp / w.parallel
            << "  drift rate = (" << rate.x() << ", " << rate.y() << ")\n";
  return 0;
}

// --------------------------------------------------------------- evolve ----

int cmd_evolve(const CommonOpts& o, double sigma, double periods, double perturbation,
               double dt_evolve) {
  Timer timer;
  const PotentialSpec p = build_potential(o);
  const RadialGrid g = build_grid(o);
  const FlowConfig cfg = build_flow(o);

  const QBallSolution sol = minimize(cfg, p, sigma, g);
  if (!sol.converged)
    throw nonconvergence_error("no converged soliton to evolve at sigma = " +
                               io::format_double(sigma));
  const double T = periods * kTwoPi / sol.omega;
  const StabilityReport rep =
      stability_run(sol.profile, sol.omega, p, perturbation, T, dt_evolve);

  const fs::path dir = out_dir(o);
  {
    const Index n = static_cast<Index>(rep.ledger.size());
    ArrayXd t(n), e(n), h(n), dev(n), loc(n);
    for (Index i = 0; i < n; ++i) {
      t(i) = rep.ledger[i].t;
      e(i) = rep.ledger[i].energy;
      h(i) = rep.ledger[i].charge;
      dev(i) = rep.ledger[i].deviation;
      loc(i) = rep.ledger[i].localization_radius;
    }
    io::write_csv(dir / "ledger.csv", {"t", "E", "H", "deviation", "localization_radius"},
                  {t, e, h, dev, loc});
  }

  io::Manifest m;
  manifest_common(m, "evolve", o, p, cfg, g);
  m.add("charge", sigma);
  manifest_solution(m, "solution", sol);
  m.add("periods", periods);
  m.add("perturbation", perturbation);
  m.add("dt_evolve", dt_evolve > 0.0 ? dt_evolve : 0.5 * g.h);
  m.add("max_modulus_deviation", rep.max_modulus_deviation);
  m.add("energy_drift", rep.energy_drift);
  m.add("charge_drift", rep.charge_drift);
  m.add("boundary_warning", rep.boundary_warning);
  m.add("wall_time_s", timer.seconds());
  m.add_file(dir / "ledger.csv");
  m.write(dir / "manifest.txt");

  std::cout << "deviation = " << rep.max_modulus_deviation
            << "  E drift = " << rep.energy_drift
            << "  H drift = " << rep.charge_drift << "\n";
  return 0;
}

// -------------------------------------------------------------- lambda0 ----

int cmd_lambda0(const CommonOpts& o, double smax, int samples) {
  Timer timer;
  const PotentialSpec p = build_potential(o);
  const HylomorphyConstant hc = lambda0(p, smax, samples);

  const fs::path dir = out_dir(o);
  io::Manifest m;
  m.add("tool", std::string("qball ") + kVersion);
  m.add("subcommand", std::string("lambda0"));
  m.add("potential", p.label());
  m.add("smax", smax);
  m.add("samples", static_cast<long>(samples));
  m.add("lambda0", hc.lambda0);
  m.add("argmin_s", hc.argmin_s);
  m.add("at_infinity", hc.at_infinity);
  m.add("wall_time_s", timer.seconds());
  m.write(dir / "manifest.txt");

  std::cout << "lambda0 = " << hc.lambda0 << "  argmin_s = "
            << (hc.at_infinity ? "at infinity" : io::format_double(hc.argmin_s)) << "\n";
  return 0;
}

}  // namespace

std::string figure_scripts() {
  std::ostringstream out;
  out << "# travelling 2D soliton surface/contour data (field.csv)\n"
      << "qball boost --potential gamma --charge 300 --v 0.9,0 --out fig1\n\n"
      << "# frequency and hylomorphy ratio against charge (sweep.csv)\n"
      << "qball sweep --potential gamma "
         "--charges 5,10,20,30,40,50,60,70,80,90,100,200,300,400,500 --out fig2\n\n"
      << "# radial profiles per potential class (profile_s*.csv)\n"
      << "qball sweep --potential alpha_beta:a=2.5 --charges 30,50,100,300 "
         "--out fig3_alpha_beta\n"
      << "qball sweep --potential alpha_nonbeta --charges 30,50,100,300 "
         "--out fig3_alpha_nonbeta\n"
      << "qball sweep --potential nonalpha_beta:a=1 --charges 5,30,100,300 "
         "--out fig3_nonalpha_beta\n"
      << "qball sweep --potential gamma --charges 5,30,100,300 --out fig3_gamma\n\n"
      << "# energy / charge / binding densities along r (profile.csv)\n"
      << "qball solve --potential alpha_beta:a=2.5 --charge 300 --out fig4_alpha_beta\n"
      << "qball solve --potential alpha_nonbeta --charge 300 --out fig4_alpha_nonbeta\n"
      << "qball solve --potential nonalpha_beta:a=1 --charge 300 "
         "--out fig4_nonalpha_beta\n"
      << "qball solve --potential gamma --charge 300 --out fig4_gamma\n";
  return out.str();
}

int run_main(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? argc - 1 : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_main(args);
}

int run_main(const std::vector<std::string>& args) {
  CLI::App app{"construction and verification of hylomorphic Q-ball solitons"};
  app.require_subcommand(1);

  CommonOpts o;

  double sigma = 300.0;
  bool strict = false;
  auto* solve = app.add_subcommand("solve", "minimize at one fixed charge");
  add_common(solve, o);
  solve->add_option("--charge", sigma, "hylomorphic charge sigma (> 0)");
  solve->add_flag("--strict", strict, "exit 3 when the flow does not converge");

  std::string charges = "5,10,20,30,40,50,60,70,80,90,100,200,300,400,500";
  bool cold = false;
  int jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "minimize over a list of charges");
  add_common(sweep, o);
  sweep->add_option("--charges", charges, "comma-separated ascending charge list");
  sweep->add_flag("--cold", cold, "independent cold starts instead of warm starts");
  sweep->add_option("--jobs", jobs, "worker pool size for cold sweeps");

  double sigma_lo = 5.0, sigma_hi = 500.0, threshold_tol = 2.0;
  auto* classify_cmd = app.add_subcommand("classify", "sweep + threshold + type report");
  add_common(classify_cmd, o);
  classify_cmd->add_option("--charges", charges, "comma-separated ascending charge list");
  classify_cmd->add_option("--sigma-lo", sigma_lo, "lower threshold probe");
  classify_cmd->add_option("--sigma-hi", sigma_hi, "upper threshold probe");
  classify_cmd->add_option("--threshold-tol", threshold_tol, "bracket width");

  std::string v_text = "0.9,0";
  double extent_x = 12.0, extent_y = 12.0, spacing = 0.05, t_sample = 0.0;
  double dt_probe = 0.05, drift_dt = 5.0;
  bool with_residual = false;
  auto* boost_cmd = app.add_subcommand("boost", "Lorentz-boost a standing wave");
  add_common(boost_cmd, o);
  boost_cmd->add_option("--charge", sigma, "hylomorphic charge sigma (> 0)");
  boost_cmd->add_option("--v", v_text, "boost velocity components, |v| < 1");
  boost_cmd->add_option("--extent-x", extent_x, "window half-width along x1");
  boost_cmd->add_option("--extent-y", extent_y, "window half-width along x2");
  boost_cmd->add_option("--spacing", spacing, "sample spacing");
  boost_cmd->add_option("--time", t_sample, "sample time");
  boost_cmd->add_option("--dt-probe", dt_probe, "time step of the residual probe");
  boost_cmd->add_option("--drift-dt", drift_dt, "time separation of the drift samples");
  boost_cmd->add_flag("--residual", with_residual, "also verify the field equation");

  double periods = 50.0, perturbation = 0.0, dt_evolve = 0.0;
  auto* evolve_cmd = app.add_subcommand("evolve", "radial time evolution with ledger");
  add_common(evolve_cmd, o);
  evolve_cmd->add_option("--charge", sigma, "hylomorphic charge sigma (> 0)");
  evolve_cmd->add_option("--periods", periods, "horizon in periods (<= 100)");
  evolve_cmd->add_option("--perturbation", perturbation, "relative bump amplitude");
  evolve_cmd->add_option("--dt-evolve", dt_evolve, "evolution time step (0 = h/2)");

  double smax = 1e3;
  int samples = 512;
  auto* lam = app.add_subcommand("lambda0", "hylomorphy constant of the potential");
  add_common(lam, o);
  lam->add_option("--smax", smax, "amplitude scan bound");
  lam->add_option("--samples", samples, "scan sample count (>= 100)");

  auto* figures = app.add_subcommand("figures", "print figure reproduction recipes");

  try {
    std::vector<std::string> expanded = expand_config_args(args);
    std::reverse(expanded.begin(), expanded.end());
    app.parse(std::move(expanded));
    if (solve->parsed()) {
      if (!(sigma > 0.0)) throw config_error("charge must be positive");
      return cmd_solve(o, sigma, strict);
    }
    if (sweep->parsed()) return cmd_sweep(o, charges, cold, jobs);
    if (classify_cmd->parsed())
      return cmd_classify(o, charges, sigma_lo, sigma_hi, threshold_tol);
    if (boost_cmd->parsed()) {
      if (!(sigma > 0.0)) throw config_error("charge must be positive");
      return cmd_boost(o, sigma, v_text, extent_x, extent_y, spacing, t_sample, dt_probe,
                       drift_dt, with_residual);
    }
    if (evolve_cmd->parsed()) {
      if (!(sigma > 0.0)) throw config_error("charge must be positive");
      return cmd_evolve(o, sigma, periods, perturbation, dt_evolve);
    }
    if (lam->parsed()) return cmd_lambda0(o, smax, samples);
    if (figures->parsed()) {
      std::cout << figure_scripts();
      return 0;
    }
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const nonconvergence_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const instability_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 5;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qball::cli
