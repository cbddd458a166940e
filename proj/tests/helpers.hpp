#pragma once

#include <cmath>

#include "qball/flow.hpp"

namespace qball::test {

// e^{-r^2} sampled on an n=2 grid; the closed-form Gaussian integrals make it
// the standard oracle profile.
inline RadialProfile gaussian_profile(double r_max = 10.0, Index segments = 2000,
                                      int dim = 2) {
  RadialGrid g = make_grid(dim, r_max, segments);
  ArrayXd u = (-g.nodes.square()).exp();
  return make_profile(std::move(g), std::move(u));
}

inline PotentialSpec pure_quadratic() {
  return PotentialSpec("quadratic", {{PotentialTerm::Kind::power, 0.5, 2}});
}

// Small grid + loose budget for unit-test minimizations.
inline RadialGrid coarse_grid(int dim = 2) { return make_grid(dim, 30.0, 750); }

inline FlowConfig coarse_flow() {
  FlowConfig cfg;
  return cfg;
}

}  // namespace qball::test
