#pragma once

#include "qsw/spectral.hpp"

// Shared test fixtures.  B and C start at the quasi-invariant law so that
// equilibrium identities apply exactly.
namespace qsw::fixtures {

inline Model model_a() { return Model(2, 0.0, Measure::uniform(2)); }

inline Model model_b() {
  Model tmp(3, 0.0, Measure::uniform(3));
  auto [pi, pi_phi] = quasi_stationary(tmp);
  return Model(3, 0.0, pi);
}

inline Model model_c() {
  Model tmp(3, 1.0, Measure::uniform(3));
  auto [pi, pi_phi] = quasi_stationary(tmp);
  return Model(3, 1.0, pi);
}

inline Model model_d() { return Model(4, 0.0, Measure::uniform(4)); }

} // namespace qsw::fixtures
