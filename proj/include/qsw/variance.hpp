#pragma once

#include "qsw/samplers.hpp"
#include "qsw/semigroup.hpp"

namespace qsw {

// Closed-form asymptotic variances (limits of N times the mean-square error
// as the population size N grows).  Every evaluator has an overload taking a
// FlowTrace so arbitrary initial laws are supported; the convenience
// overloads evolve from the model's own η0.
//
// Conventions: f is given by its values on S and is null at the cemetery;
// v-variances concern Zᵃ/Z · ηᵃ(f), w-variances concern ηᵃ(f).

// Doob-twisted sampler.  Second moment uses f²/φ0 (the dimensionally
// consistent form forced by the derivation).
double v_dp(const Model& m, const FlowTrace& flow, int n, const Vec& f);
double w_dp(const Model& m, const FlowTrace& flow, int n, const Vec& f);

// Reflected-walk importance sampler, via η̃_n = η0 Q̃^n / η0 Q̃^n(1).
double v_is(const Model& m, const FlowTrace& flow, int n, const Vec& f);
double w_is(const Model& m, const FlowTrace& flow, int n, const Vec& f);

// Soft particle sampler: two-sum form, plus an independent telescoping
// implementation built from the local fluctuation terms.
double v_soft(const Model& m, const FlowTrace& flow, int n, const Vec& f);
double v_soft_telescoping(const Model& m, const FlowTrace& flow, int n, const Vec& f);
double w_soft(const Model& m, const FlowTrace& flow, int n, const Vec& f);
// Direct form: η_n(f̄²) + Σ_{p<n} (1-η_p(g)²) η_p([Q_{p,n}(f̄)]²).
double w_soft_direct(const Model& m, const FlowTrace& flow, int n, const Vec& f);

// One-step particle fluctuation E(U_{n+1}(f)²) given η_n; full formula and
// the η_{n+1}-centered reduction (they agree for every f since U(1) = 0).
double local_fluctuation(const Model& m, const Measure& eta_n, const Vec& f);
double local_fluctuation_centered(const Model& m, const Measure& eta_n, const Vec& f);

// Hard sampler, pre-killing.  General evaluator accepts a function on
// S ∪ {c} as (values on S, value at c).
double vhat_hard(const Model& m, const FlowTrace& flow, int n, const Vec& f_s, double f_c);
double v_hard_prekill(const Model& m, const FlowTrace& flow, int n, const Vec& f);
double w_hard_prekill(const Model& m, const FlowTrace& flow, int n, const Vec& f);
// Direct (1-η̂_p(1_S)²)-sum form of ŵ, for cross-checking.
double w_hard_prekill_direct(const Model& m, const FlowTrace& flow, int n, const Vec& f);

/// Hard sampler at killing times: v_n(f) = v̂_n(f·1_S),
// w_n(f) = v_n((f - η_n(f)) / η_{n-1}(g)).  w_hard_display is the expanded
// sum for η_{n-1}(g)·w_n(f), with each term normalized by the predicted-flow
// denominator η_{p-1}(Q^{n-p}(1)); at stationarity this coincides with the
// updated-flow normalization η_p(Q^{n-p}(1)).
double v_hard(const Model& m, const FlowTrace& flow, int n, const Vec& f);
double w_hard(const Model& m, const FlowTrace& flow, int n, const Vec& f);
double w_hard_display(const Model& m, const FlowTrace& flow, int n, const Vec& f);

// Convenience overloads (η0 = model.eta0).
double v_dp(const Model& m, int n, const Vec& f);
double w_dp(const Model& m, int n, const Vec& f);
double v_is(const Model& m, int n, const Vec& f);
double w_is(const Model& m, int n, const Vec& f);
double v_soft(const Model& m, int n, const Vec& f);
double w_soft(const Model& m, int n, const Vec& f);
double v_hard_prekill(const Model& m, int n, const Vec& f);
double w_hard_prekill(const Model& m, int n, const Vec& f);
double v_hard(const Model& m, int n, const Vec& f);
double w_hard(const Model& m, int n, const Vec& f);

// Equilibrium specializations for f = φ0 (η0 = π):
//   v_soft = (n+1)V - n·π([Q(φ0 - π(φ0))]²)  with V = Var_π(φ0)
//   v_hard = E0·{[1+(n-1)(1-E0²)]V + n(1-E0)π(φ0)²}.
double v_soft_equilibrium_phi0(const Model& m, int n);
double v_hard_equilibrium_phi0(const Model& m, int n);

// Path-space bound 1 + (2n/(1+θ)) (1-e^{-1})^{-1} sin^{-1}(π/(d+1)) for
// unit-oscillation path functionals.
double w_soft_path_bound(const Model& m, int n);

// Empirical N·variance estimates from a replicate table, with jackknife
// standard errors; degenerate for R < 2.
struct EmpiricalVariance {
  double v = 0.0, v_se = 0.0;
  double w = 0.0, w_se = 0.0;
};

EmpiricalVariance empirical_variance(const std::vector<ReplicateRow>& rows, int N, double true_z,
                                     double true_eta_f);

// N·mean((x_i - center)²) with jackknife SE; building block for variance
// studies of individual estimator coordinates.
struct ScaledMse {
  double value = 0.0, se = 0.0;
};
ScaledMse scaled_mse(const Vec& samples, double center, int N);

} // namespace qsw
