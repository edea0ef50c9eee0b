#pragma once

#include "qsw/model.hpp"

#include <map>
#include <utility>

namespace qsw {

// Deterministic evolution of both conditional flows:
//   soft: η_{p+1} = Ψ_g(η_p)M,     Z_{p+1} = Z_p · η_p(g)
//   hard: η̂_{p+1} = η_p K  (probability on S ∪ {c}),  η̂_0 = η_0.
// Z_n = Π_{p<n} η_p(g) = Π_{1<=p<=n} η̂_p(1_S) = η_0 Q^n(1).
struct FlowTrace {
  std::vector<Measure> etas;     // η_0..η_n (on S)
  std::vector<Measure> eta_hats; // η̂_0..η̂_n (on S ∪ {c})
  Vec z;                         // Z_0 = 1, ..., Z_n
  Vec logz;                      // running sum of log η_p(g) (underflow-safe)
  Vec eta_g;                     // η_p(g), p = 0..n
  std::vector<Measure> gammas;   // γ_p = Z_p · η_p
};

FlowTrace evolve(const Model& m, int n);
FlowTrace evolve(const Model& m, const Measure& eta0, int n);

// Q_{p,n} = Q^{n-p} / η_p Q^{n-p}(1);  η_p Q_{p,n} = η_n.
Kernel normalized_semigroup(const Model& m, int p, int n, const Measure& eta_p);

// Hat version: denominators of Q̂_{p,n} = Q̂^{n-p} / η̂_p Q̂^{n-p}(1) where the
// "1" is the constant one on S ∪ {c}.  Since Q̂^m(1) = 1_S · Q^{m-1}(1):
//   D_p = η_{p-1}(Q^{n-p}(1)) for p >= 1,  D_0 = η_0(Q^{n-1}(1)),  D_n = 1.
double hat_normalized_denominator(const Model& m, const FlowTrace& flow, int p, int n);

// Q̂^m applied to a function on S ∪ {c} given by (f on S, value at c);
// result is supported on S (rows of Q̂ at c vanish).  m >= 1.
Vec qhat_power_apply(const Model& m, int power, const Vec& f_s, double f_c);

// P_n: row x = δ_x Q^n normalized (law of X_n given survival from x).
Kernel conditioned_operator_pn(const Model& m, int n);

// Absorption-time laws: hard P(T_X = k) = Z_{k-1} - Z_k (T_X >= 1 a.s.),
// soft P(T_Y = k) = Z_k (1 - η_k(g)); both with survival mass.
struct AbsorptionLaw {
  Vec hard_pmf;         // index k = 0..nmax
  double hard_survival; // P(T_X > nmax)
  Vec soft_pmf;
  double soft_survival; // P(T_Y > nmax)
};

AbsorptionLaw absorption_law(const Model& m, int nmax);

// Exact path measure of the soft model: atoms η_0(y_0) Π M(y_p, y_{p+1})
// weighted by Π_{p<n} g(y_p); normalization = Z_n.
struct PathMeasure {
  int n = 0;
  std::map<std::vector<int>, double> atoms; // path (states 1..d) -> weight
  double normalization = 0.0;
};

PathMeasure exact_path_measure(const Model& m, int n);

// (TV of images, Lipschitz bound ρ(Q^n 1) β(P_n) TV(μ1, μ2)).
std::pair<double, double> lipschitz_bound(const Model& m, int n, const Measure& mu1,
                                          const Measure& mu2);

} // namespace qsw
