#pragma once

#include <map>
#include <string>
#include <vector>

#include "qball/common.hpp"

namespace qball {

/// One additive term of a scalar potential W(s), s = |psi| >= 0.
///
/// Supported forms:
///   power      : c * s^k           (integer k >= 1)
///   log1p      : c * log(1 + s)
///   log_quad   : c * log(1 - s + s^2)
///   atan_shift : c * (atan((2s - 1)/sqrt(3)) + pi/6)
///
/// The atan form carries the pi/6 offset so the term vanishes at s = 0.
struct PotentialTerm {
  enum class Kind { power, log1p, log_quad, atan_shift };
  Kind kind = Kind::power;
  double coeff = 0.0;
  int exponent = 0;  // power terms only
};

/// A nonlinearity W with closed-form first derivative, represented as a sum
/// of terms. All evaluation rules are defined on s >= 0; the field equation
/// extends them to complex arguments through the modulus.
class PotentialSpec {
 public:
  PotentialSpec(std::string name, std::vector<PotentialTerm> terms,
                std::map<std::string, double> params = {});

  const std::string& name() const { return name_; }
  const std::vector<PotentialTerm>& terms() const { return terms_; }
  const std::map<std::string, double>& params() const { return params_; }

  /// "name" or "name:a=2.5" when an `a` parameter is present.
  std::string label() const;

 private:
  std::string name_;
  std::vector<PotentialTerm> terms_;
  std::map<std::string, double> params_;
};

// Pointwise evaluation on s >= 0 (negative s is a domain error).
double eval_W(const PotentialSpec& p, double s);
double eval_dW(const PotentialSpec& p, double s);
double eval_N(const PotentialSpec& p, double s);   // N = W - s^2/2
double eval_dN(const PotentialSpec& p, double s);  // N' = W' - s

// Vectorized variants over node arrays (all entries must be >= 0).
ArrayXd eval_W(const PotentialSpec& p, const ArrayXd& s);
ArrayXd eval_dW(const PotentialSpec& p, const ArrayXd& s);

// Even/odd extensions W(x) = F(|x|), W'(x) = F'(|x|) sign(x). The gradient
// flow may produce transient sign changes; these keep it well defined.
double eval_W_even(const PotentialSpec& p, double x);
double eval_dW_odd(const PotentialSpec& p, double x);
ArrayXd eval_W_even(const PotentialSpec& p, const ArrayXd& x);
ArrayXd eval_dW_odd(const PotentialSpec& p, const ArrayXd& x);

/// W'(s)/s with its s -> 0 limit W''(0); finite at the origin for any
/// potential passing the normalization check.
double dW_over_s(const PotentialSpec& p, double s);
ArrayXd dW_over_s(const PotentialSpec& p, const ArrayXd& s);

// Allocation-free accumulating variants for hot loops. Entries of s must be
// nonnegative; out is overwritten.
void eval_W_into(const PotentialSpec& p, const ArrayXd& s, ArrayXd& out);
void eval_dW_into(const PotentialSpec& p, const ArrayXd& s, ArrayXd& out);

/// Estimate of lambda0 = inf_s W(s) / (s^2/2).
struct HylomorphyConstant {
  double lambda0 = 1.0;
  double argmin_s = 0.0;     // amplitude where the infimum is approached
  bool at_infinity = false;  // minimum sits at s_max with the ratio still decreasing
  int samples_used = 0;
};

/// Log-uniform sampling of W(s)/(s^2/2) on (1e-4, s_max], refined by
/// golden-section search around the discrete argmin. When the minimum sits at
/// s_max and the ratio is still decreasing, probes a geometric extension and
/// reports the limiting value with the at_infinity flag set.
HylomorphyConstant lambda0(const PotentialSpec& p, double s_max = 1e3,
                           int samples = 512);

struct NormalizationReport {
  double W0 = 0.0;
  double dW0 = 0.0;
  double ddW0 = 0.0;
  std::vector<double> positivity_violations;  // sampled s with W(s) < 0
  bool passed(double tol = 1e-6) const;
};

/// Finite-difference estimates of W(0), W'(0), W''(0) with a step-halving
/// Richardson table, plus a sampled positivity scan on a log grid up to s_max.
/// Report-only; never throws.
NormalizationReport check_normalization(const PotentialSpec& p,
                                        double s_max = 1e3);

/// Built-in example potentials:
///   alpha_beta    : W = s^2/2 + s^3/3 - a s^4/4 + s^5/5   (default a = 2.5)
///   alpha_nonbeta : W = log(1 - s + s^2)/2
///                       + (atan((2s-1)/sqrt(3)) + pi/6)/sqrt(3)
///   nonalpha_beta : W = s^2/2 - a s^3/3 + s^4/4           (a in (0,2), default 1)
///   gamma         : W = s - log(1 + s)
PotentialSpec builtin_potential(const std::string& name,
                                const std::map<std::string, double>& params = {});

/// Parses one custom-potential term, e.g. "0.5 * s^2", "-1 * log(1+s)",
/// "0.5 * log(1-s+s^2)", "0.577 * atan((2s-1)/sqrt(3))".
PotentialTerm parse_term(const std::string& text);

/// Builds a potential from config-file term lines and validates it against
/// the normalization checks.
PotentialSpec custom_potential(const std::string& name,
                               const std::vector<std::string>& term_texts);

}  // namespace qball
