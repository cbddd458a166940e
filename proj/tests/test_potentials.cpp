#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "qball/potentials.hpp"

using namespace qball;

TEST_CASE("built-in closed forms at reference amplitudes") {
  const PotentialSpec gamma = builtin_potential("gamma");
  CHECK(eval_W(gamma, 0.0) == 0.0);
  CHECK(eval_W(gamma, 1.0) == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-14));
  CHECK(eval_dW(gamma, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(eval_dW(gamma, 0.0) == 0.0);

  const PotentialSpec nab = builtin_potential("nonalpha_beta", {{"a", 1.0}});
  CHECK(eval_W(nab, 1.0) == doctest::Approx(5.0 / 12.0).epsilon(1e-14));
  CHECK(eval_dN(nab, 2.0) == doctest::Approx(4.0).epsilon(1e-12));  // s^2 (s - a)

  const PotentialSpec ab = builtin_potential("alpha_beta", {{"a", 2.5}});
  CHECK(eval_dW(ab, 1.0) == doctest::Approx(0.5).epsilon(1e-14));  // 1 + 1 - 2.5 + 1

  const PotentialSpec anb = builtin_potential("alpha_nonbeta");
  CHECK(eval_W(anb, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
  // W' = s / (1 - s + s^2)
  CHECK(eval_dW(anb, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eval_dW(anb, 2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("negative amplitude is a domain error") {
  const PotentialSpec gamma = builtin_potential("gamma");
  CHECK_THROWS_AS(eval_W(gamma, -0.1), std::domain_error);
  CHECK_THROWS_AS(eval_dW(gamma, -1.0), std::domain_error);
}

TEST_CASE("N = W - s^2/2 pointwise and N < 0 near zero for the gamma potential") {
  const PotentialSpec gamma = builtin_potential("gamma");
  for (double s : {0.0, 1e-3, 0.1, 0.7, 2.0, 13.0}) {
    CHECK(eval_N(gamma, s) == doctest::Approx(eval_W(gamma, s) - 0.5 * s * s)
                                  .epsilon(1e-15));
  }
  CHECK(eval_N(gamma, 1e-2) < 0.0);
  CHECK(eval_N(gamma, 0.3) < 0.0);
}

TEST_CASE("odd/even extensions") {
  const PotentialSpec gamma = builtin_potential("gamma");
  CHECK(eval_W_even(gamma, -1.0) == eval_W(gamma, 1.0));
  CHECK(eval_dW_odd(gamma, -1.0) == -eval_dW(gamma, 1.0));
  CHECK(eval_dW_odd(gamma, 0.0) == 0.0);
}

TEST_CASE("vectorized evaluation agrees with the scalar path") {
  const PotentialSpec ab = builtin_potential("alpha_beta");
  ArrayXd s = ArrayXd::LinSpaced(101, 0.0, 3.0);
  const ArrayXd w = eval_W(ab, s);
  const ArrayXd dw = eval_dW(ab, s);
  ArrayXd wbuf, dwbuf;
  eval_W_into(ab, s, wbuf);
  eval_dW_into(ab, s, dwbuf);
  for (Index i = 0; i < s.size(); ++i) {
    CHECK(w(i) == doctest::Approx(eval_W(ab, s(i))).epsilon(1e-14));
    CHECK(dw(i) == doctest::Approx(eval_dW(ab, s(i))).epsilon(1e-14));
    CHECK(wbuf(i) == doctest::Approx(w(i)).epsilon(1e-14));
    CHECK(dwbuf(i) == doctest::Approx(dw(i)).epsilon(1e-14));
  }
}

TEST_CASE("derivative consistency by centered differences") {
  for (const char* name : {"alpha_beta", "alpha_nonbeta", "nonalpha_beta", "gamma"}) {
    const PotentialSpec p = builtin_potential(name);
    const double h = 1e-6;
    for (double s : {0.3, 1.0, 2.2}) {
      const double fd = (eval_W(p, s + h) - eval_W(p, s - h)) / (2.0 * h);
      CHECK(eval_dW(p, s) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("normalization report for every built-in") {
  for (const char* name : {"alpha_beta", "alpha_nonbeta", "nonalpha_beta", "gamma"}) {
    const NormalizationReport rep = check_normalization(builtin_potential(name));
    CAPTURE(name);
    CHECK(std::abs(rep.W0) < 1e-12);
    CHECK(std::abs(rep.dW0) < 1e-9);
    CHECK(std::abs(rep.ddW0 - 1.0) < 1e-6);
    CHECK(rep.positivity_violations.empty());
    CHECK(rep.passed());
  }
}

TEST_CASE("positivity scan flags W = s^2/2 - s^4") {
  const PotentialSpec bad("bad", {{PotentialTerm::Kind::power, 0.5, 2},
                                  {PotentialTerm::Kind::power, -1.0, 4}});
  const NormalizationReport rep = check_normalization(bad, 2.0);
  REQUIRE(!rep.positivity_violations.empty());
  // Sign change sits at s = 1/sqrt(2); every flagged sample lies above it.
  for (double s : rep.positivity_violations) CHECK(s > 1.0 / std::sqrt(2.0) - 1e-6);
  CHECK(rep.positivity_violations.front() < 2.0);
  CHECK(!rep.passed());
}

TEST_CASE("lambda0 oracle values") {
  const HylomorphyConstant quad = lambda0(test::pure_quadratic());
  CHECK(quad.lambda0 == 1.0);  // ratio identically one
  CHECK(!quad.at_infinity);

  // Closed form: ratio = 1 - (.2/3) s... for a = 1 the minimum of
  // 1 - (2/3) s + s^2/2 sits at s = 2/3 with value 7/9.
  const HylomorphyConstant nab = lambda0(builtin_potential("nonalpha_beta", {{"a", 1.0}}));
  CHECK(nab.lambda0 == doctest::Approx(7.0 / 9.0).epsilon(1e-10));
  CHECK(nab.argmin_s == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
  CHECK(!nab.at_infinity);

  const HylomorphyConstant gam = lambda0(builtin_potential("gamma"));
  CHECK(gam.at_infinity);
  CHECK(gam.lambda0 == 0.0);

  // Type (alpha,beta) with a = 2.5 has an interior minimum below one.
  const HylomorphyConstant ab = lambda0(builtin_potential("alpha_beta"));
  CHECK(!ab.at_infinity);
  CHECK(ab.lambda0 < 1.0);
  CHECK(ab.lambda0 > 0.0);
  CHECK(ab.lambda0 == doctest::Approx(0.48203).epsilon(1e-3));
}

TEST_CASE("lambda0 estimate is monotone under larger scans") {
  const PotentialSpec ab = builtin_potential("alpha_beta");
  double prev = 2.0;
  for (double smax : {10.0, 100.0, 1000.0}) {
    const double v = lambda0(ab, smax, 512).lambda0;
    CHECK(v <= prev + 1e-9);
    prev = v;
  }
  prev = 2.0;
  for (int samples : {128, 256, 1024}) {
    const double v = lambda0(ab, 1e3, samples).lambda0;
    CHECK(v <= prev + 1e-9);
    prev = v;
  }
}

TEST_CASE("lambda0 rejects a potential failing the normalization") {
  const PotentialSpec heavy("heavy", {{PotentialTerm::Kind::power, 1.0, 2}});  // W'' = 2
  CHECK_THROWS_AS(lambda0(heavy), std::invalid_argument);
}

TEST_CASE("N' sign pattern of the quintic with a = 2.5") {
  const PotentialSpec ab = builtin_potential("alpha_beta", {{"a", 2.5}});
  // N' = s^2 (1 - a s + s^2) with roots exactly at 0.5 and 2.
  CHECK(std::abs(eval_dN(ab, 0.5)) < 1e-12);
  CHECK(std::abs(eval_dN(ab, 2.0)) < 1e-12);
  CHECK(eval_dN(ab, 0.25) > 0.0);
  CHECK(eval_dN(ab, 1.0) < 0.0);
  CHECK(eval_dN(ab, 3.0) > 0.0);
}

TEST_CASE("builtin construction guards") {
  CHECK_THROWS_AS(builtin_potential("nonalpha_beta", {{"a", 3.0}}), std::invalid_argument);
  CHECK_THROWS_AS(builtin_potential("nonalpha_beta", {{"a", -1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(builtin_potential("does_not_exist"), std::invalid_argument);
  CHECK_THROWS_AS(builtin_potential("gamma", {{"a", 1.0}}), std::invalid_argument);
  // quintic loses positivity for large a
  CHECK_THROWS_AS(builtin_potential("alpha_beta", {{"a", 2.8}}), std::invalid_argument);
  CHECK_NOTHROW(builtin_potential("alpha_beta", {{"a", 2.5}}));
}

TEST_CASE("custom potential term grammar covers the built-ins") {
  const PotentialSpec gamma_custom =
      custom_potential("custom", {"1 * s", "-1 * log(1+s)"});
  const PotentialSpec gamma = builtin_potential("gamma");
  for (double s : {0.0, 0.4, 1.0, 6.0}) {
    CHECK(eval_W(gamma_custom, s) == doctest::Approx(eval_W(gamma, s)).epsilon(1e-14));
    CHECK(eval_dW(gamma_custom, s) == doctest::Approx(eval_dW(gamma, s)).epsilon(1e-14));
  }

  const PotentialSpec anb_custom = custom_potential(
      "custom", {"0.5 * log(1-s+s^2)", "0.57735026918962584 * atan((2s-1)/sqrt(3))"});
  const PotentialSpec anb = builtin_potential("alpha_nonbeta");
  for (double s : {0.0, 0.5, 1.3, 4.0}) {
    CHECK(eval_W(anb_custom, s) == doctest::Approx(eval_W(anb, s)).epsilon(1e-12));
    CHECK(eval_dW(anb_custom, s) == doctest::Approx(eval_dW(anb, s)).epsilon(1e-12));
  }

  CHECK_THROWS_AS(parse_term("0.5 + s^2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_term("x * s^2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_term("1 * s^0"), std::invalid_argument);
  CHECK_THROWS_AS(custom_potential("custom", {"1 * s"}), std::invalid_argument);  // W'' = 0
}
