#pragma once

#include "qsw/model.hpp"

#include <utility>

namespace qsw {

// Closed-form eigensystem of Q (tridiagonal Toeplitz):
//   E_{i-1} = (θ + 2cos(iπ/(d+1))) / (θ + 2),
//   φ_{i-1}(x) = sqrt(2d/(d+1)) sin(i x π/(d+1)),  L2(u)-normalized.
struct SpectralBasis {
  Vec eigenvalues;           // E_0 > E_1 > ... > E_{d-1}
  std::vector<Vec> phi;      // phi[i][x-1]
  double e1bar = 0.0;        // E_1 / E_0 (0 by convention at d = 1)
  double e1bar_closed = 0.0; // the direct closed form; must agree with e1bar
  double estar = 0.0;        // max_{i>=1} |E_i| / E_0 (0 at d = 1)
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
};

SpectralBasis eigensystem(const Model& m);

// Quasi-stationary pair: π = Ψ_{φ0}(u) (left eigenmeasure of Q) and
// π_φ = Ψ_{φ0}(π) (invariant law of the Doob-transformed chain).
std::pair<Measure, Measure> quasi_stationary(const Model& m);

// Doob transform M_φ(x,y) = Q(x,y)φ0(y) / (E_0 φ0(x)); stochastic and
// reversible w.r.t. π_φ.
Kernel doob_kernel(const Model& m);

// Spectral reconstruction Σ_i E_i^n φ_i(x) φ_i(y) u(y); cross-check for the
// iterated matrix power.
Kernel reconstruct_qn(const Model& m, int n);

// Spectrum of R = diag(√g) Q diag(√g) (same spectrum as Q̃ = diag(g)Q).
struct TildeSpectrum {
  double e0tilde = 0.0; // top eigenvalue of R
  Vec psi0;             // top eigenvector of R, positive, unit length
  double rho_psi0 = 0.0; // ρ(ψ̃0) where ψ̃0 = √g·ψ0 is the Q̃ eigenvector
};

TildeSpectrum tilde_spectrum(const Model& m); // requires d >= 2

// All eigenvalues of an unsymmetric tridiagonal matrix with
// lower[i] * upper[i] >= 0 (symmetrized by the standard similarity
// b_i -> sqrt(lower_i upper_i), then QL with implicit shifts).
// diag has size n, lower/upper size n-1.  Ascending order.
Vec tridiagonal_spectrum(const Vec& diag, const Vec& lower, const Vec& upper);

} // namespace qsw
