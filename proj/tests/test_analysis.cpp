#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "qball/analysis.hpp"

using namespace qball;

namespace {

const QBallSolution& gamma_solution() {
  static const QBallSolution sol = [] {
    return minimize(test::coarse_flow(), builtin_potential("gamma"), 300.0,
                    test::coarse_grid());
  }();
  return sol;
}

// Synthetic sweep entries for exercising the classification logic without
// running flows.
SweepResult synthetic_sweep(const std::vector<double>& sigmas,
                            const std::vector<double>& sup_norms,
                            const std::vector<bool>& converged) {
  SweepResult sweep;
  sweep.potential_label = "synthetic";
  sweep.charge_grid = sigmas;
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    QBallSolution sol;
    sol.sigma = sigmas[i];
    sol.converged = converged[i];
    sol.diagnostics.sup_norm = sup_norms[i];
    sweep.entries.push_back(std::move(sol));
  }
  return sweep;
}

}  // namespace

TEST_CASE("frequency window limiting algebra") {
  const RadialProfile u = test::gaussian_profile(8.0, 512);
  const PotentialSpec gamma = builtin_potential("gamma");

  // With lambda0 = 0 and Gamma -> 0 the window opens to (0, 1). A very wide
  // profile makes Gamma small.
  RadialGrid g = make_grid(2, 400.0, 4000);
  ArrayXd wide_vals = (-(g.nodes / 60.0).square()).exp();
  const RadialProfile wide = make_profile(g, std::move(wide_vals));
  const FrequencyWindow w = frequency_window(wide, gamma, 0.0);
  CHECK(w.gamma_ok);
  CHECK(w.lo == doctest::Approx(0.0).epsilon(1e-2));
  CHECK(w.hi == doctest::Approx(1.0).epsilon(1e-2));

  // Gamma = n/4 degenerates the window to the single point 1/2. Dilating
  // u(r) -> u(r/s) scales Gamma by 1/s^2, so pick s to land on n/4 exactly.
  const double target = 0.5;  // n/4 for n = 2
  const double s = std::sqrt(gamma_ratio(u) / target);
  RadialGrid g3 = make_grid(2, 8.0 * s, 512);
  ArrayXd scaled_vals = (-(g3.nodes / s).square()).exp();
  const RadialProfile scaled = make_profile(g3, std::move(scaled_vals));
  const FrequencyWindow wd = frequency_window(scaled, gamma, 0.0);
  CHECK(wd.lo == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(wd.hi == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("converged soliton passes every theoretical check") {
  const QBallSolution& sol = gamma_solution();
  REQUIRE(sol.converged);
  const PotentialSpec gamma = builtin_potential("gamma");
  const double l0 = lambda0(gamma).lambda0;

  const SolitonChecks c = verify_soliton(sol, gamma, l0);
  CHECK(c.hylomorphic);
  CHECK(c.gamma_ok);
  CHECK(c.omega_in_window);
  CHECK(c.omega_above_half_lambda0);
  CHECK(c.pohozaev_ok);
  CHECK(c.support_nonempty);
  CHECK(c.binding_integral_ok);
  CHECK(c.all());

  // Lambda = Gamma/(n omega) + omega holds only through the virial identity.
  const double consistency = consistency_lambda(sol.profile, sol.omega, gamma);
  CHECK(consistency < 1e-2 * sol.diagnostics.lambda);

  // Off criticality the same combination is O(1).
  const RadialProfile g = test::gaussian_profile(30.0, 750);
  CHECK(consistency_lambda(g, 0.3, gamma) > 0.05);
}

TEST_CASE("single-sigma sweep equals a direct minimize") {
  const PotentialSpec gamma = builtin_potential("gamma");
  const RadialGrid g = test::coarse_grid();
  FlowConfig cfg;
  const SweepResult sweep = sweep_charges(gamma, {300.0}, cfg, g);
  REQUIRE(sweep.entries.size() == 1);
  const QBallSolution direct = minimize(cfg, gamma, 300.0, g);
  CHECK(sweep.entries[0].omega == doctest::Approx(direct.omega).epsilon(1e-14));
  CHECK(sweep.entries[0].diagnostics.lambda ==
        doctest::Approx(direct.diagnostics.lambda).epsilon(1e-14));
}

TEST_CASE("warm and cold starts agree along a short sweep") {
  const PotentialSpec gamma = builtin_potential("gamma");
  const RadialGrid g = test::coarse_grid();
  FlowConfig cfg;
  const std::vector<double> sigmas{50.0, 100.0, 200.0};
  const SweepResult warm = sweep_charges(gamma, sigmas, cfg, g, true);
  const SweepResult cold = sweep_charges(gamma, sigmas, cfg, g, false);
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    REQUIRE(warm.entries[i].converged);
    REQUIRE(cold.entries[i].converged);
    CHECK(std::abs(warm.entries[i].omega - cold.entries[i].omega) <=
          1e-3 * cold.entries[i].omega);
    CHECK(std::abs(warm.entries[i].diagnostics.lambda -
                   cold.entries[i].diagnostics.lambda) <=
          1e-3 * cold.entries[i].diagnostics.lambda);
  }
}

TEST_CASE("cold sweeps fan out over a worker pool deterministically") {
  const PotentialSpec gamma = builtin_potential("gamma");
  const RadialGrid g = test::coarse_grid();
  FlowConfig cfg;
  const std::vector<double> sigmas{100.0, 200.0, 300.0};
  const SweepResult serial = sweep_charges(gamma, sigmas, cfg, g, false, 1);
  const SweepResult pooled = sweep_charges(gamma, sigmas, cfg, g, false, 2);
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    CHECK(pooled.entries[i].omega == serial.entries[i].omega);
    CHECK((pooled.entries[i].profile.values == serial.entries[i].profile.values).all());
  }
}

TEST_CASE("sweep input validation") {
  const PotentialSpec gamma = builtin_potential("gamma");
  const RadialGrid g = test::coarse_grid();
  FlowConfig cfg;
  CHECK_THROWS_AS(sweep_charges(gamma, {}, cfg, g), std::invalid_argument);
  CHECK_THROWS_AS(sweep_charges(gamma, {10.0, 5.0}, cfg, g), std::invalid_argument);
  CHECK_THROWS_AS(sweep_charges(gamma, {-1.0, 5.0}, cfg, g), std::invalid_argument);
}

TEST_CASE("find_min_charge argument and bracket errors") {
  const PotentialSpec gamma = builtin_potential("gamma");
  const RadialGrid g = test::coarse_grid();
  FlowConfig cfg;
  CHECK_THROWS_AS(find_min_charge(gamma, cfg, g, 100.0, 5.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(find_min_charge(gamma, cfg, g, 5.0, 100.0, 0.0), std::invalid_argument);
}

TEST_CASE("gamma potential has no minimal charge down to sigma = 5") {
  const PotentialSpec gamma = builtin_potential("gamma");
  // Small charges have omega near 1 and slowly decaying tails; the domain
  // must be wide enough for the a-posteriori boundary check to stay quiet.
  const RadialGrid g = make_grid(2, 60.0, 1000);
  FlowConfig cfg;
  const ThresholdBracket b = find_min_charge(gamma, cfg, g, 5.0, 100.0, 5.0);
  CHECK(!b.found);
  CHECK(b.lo == 5.0);
}

TEST_CASE("analytic alpha0/beta0 from the nonlinear-term root structure") {
  bool finite = false;
  CHECK(analytic_beta0(builtin_potential("alpha_beta", {{"a", 2.5}}), &finite) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(finite);
  CHECK(analytic_beta0(builtin_potential("nonalpha_beta", {{"a", 1.0}}), &finite) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(finite);
  analytic_beta0(builtin_potential("gamma"), &finite);
  CHECK(!finite);
  analytic_beta0(builtin_potential("alpha_nonbeta"), &finite);
  CHECK(!finite);

  bool positive = false;
  const double a0 = analytic_alpha0(builtin_potential("alpha_beta", {{"a", 2.5}}), &positive);
  CHECK(positive);
  // First positive root of 1/3 - (a/4) s + s^2/5 with a = 2.5.
  CHECK(a0 == doctest::Approx(0.682344).epsilon(1e-4));
  analytic_alpha0(builtin_potential("gamma"), &positive);
  CHECK(!positive);
  const double a0_anb = analytic_alpha0(builtin_potential("alpha_nonbeta"), &positive);
  CHECK(positive);
  CHECK(a0_anb > 1.0);
  CHECK(a0_anb < 2.0);
}

TEST_CASE("classification verdicts on synthetic sweeps") {
  const PotentialSpec nab = builtin_potential("nonalpha_beta", {{"a", 1.0}});
  const PotentialSpec gam = builtin_potential("gamma");

  SUBCASE("beta plateau under the analytic bound") {
    const auto sweep = synthetic_sweep({5, 10, 50, 100, 200, 500},
                                       {0.35, 0.5, 0.85, 0.92, 0.96, 0.97},
                                       {true, true, true, true, true, true});
    ThresholdBracket none;
    none.found = false;
    none.lo = 5.0;
    const ClassificationReport rep = classify(nab, sweep, none);
    CHECK(rep.type_alpha == TypeVerdict::negative);
    CHECK(rep.type_beta == TypeVerdict::positive);
    CHECK(!rep.type_gamma);
  }

  SUBCASE("gamma growth pattern") {
    const auto sweep = synthetic_sweep({5, 10, 50, 100, 200, 500},
                                       {0.4, 0.6, 1.2, 1.6, 2.1, 2.9},
                                       {true, true, true, true, true, true});
    ThresholdBracket none;
    none.found = false;
    none.lo = 5.0;
    const ClassificationReport rep = classify(gam, sweep, none);
    CHECK(rep.type_alpha == TypeVerdict::negative);
    CHECK(rep.type_beta == TypeVerdict::negative);
    CHECK(rep.type_gamma);
  }

  SUBCASE("alpha threshold with bounded norms") {
    const PotentialSpec ab = builtin_potential("alpha_beta", {{"a", 2.5}});
    const auto sweep = synthetic_sweep({5, 10, 30, 100, 200, 500},
                                       {0.0, 0.0, 1.2, 1.5, 1.6, 1.65},
                                       {false, false, true, true, true, true});
    ThresholdBracket bracket;
    bracket.found = true;
    bracket.lo = 22.0;
    bracket.hi = 26.0;
    const ClassificationReport rep = classify(ab, sweep, bracket);
    CHECK(rep.type_alpha == TypeVerdict::positive);
    CHECK(rep.type_beta == TypeVerdict::positive);
    CHECK(!rep.type_gamma);
  }

  SUBCASE("narrow sweeps are rejected") {
    const auto sweep = synthetic_sweep({5, 10}, {1.0, 1.0}, {true, true});
    CHECK_THROWS_AS(classify(gam, sweep), std::invalid_argument);
  }
}
