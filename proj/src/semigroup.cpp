#include "qsw/semigroup.hpp"

#include <cmath>

namespace qsw {

FlowTrace evolve(const Model& m, const Measure& eta0, int n) {
  if (n < 0) throw std::invalid_argument("evolve: n must be >= 0");
  SoftDecomposition sd = soft_decomposition(m);
  AbsorbingKernel ak = kernel_K(m);

  FlowTrace t;
  t.etas.reserve(n + 1);
  t.eta_hats.reserve(n + 1);
  t.etas.push_back(eta0);
  t.eta_hats.push_back(eta0); // η̂_0 := η_{-1}K = η_0
  t.z.push_back(1.0);
  t.logz.push_back(0.0);
  t.gammas.push_back(eta0);

  for (int p = 0; p < n; ++p) {
    const Measure& eta = t.etas.back();
    double eg = eta(sd.g);
    if (eg <= 0.0) throw std::runtime_error("evolve: total absorption (eta_p(g) = 0)");
    t.eta_g.push_back(eg);
    // hard flow: η̂_{p+1} = η_p K on S ∪ {c}
    Measure hat = ak.on_s.apply_left(eta);
    hat.cemetery = eta(ak.exit);
    t.eta_hats.push_back(hat);
    // soft flow
    t.etas.push_back(sd.m.apply_left(boltzmann_gibbs(sd.g, eta)));
    t.z.push_back(t.z.back() * eg);
    t.logz.push_back(t.logz.back() + std::log(eg));
    Measure gamma = t.etas.back();
    for (double& wv : gamma.w) wv *= t.z.back();
    t.gammas.push_back(gamma);
  }
  t.eta_g.push_back(t.etas.back()(sd.g));
  return t;
}

FlowTrace evolve(const Model& m, int n) { return evolve(m, m.eta0, n); }

Kernel normalized_semigroup(const Model& m, int p, int n, const Measure& eta_p) {
  if (p > n) throw std::invalid_argument("normalized_semigroup: requires p <= n");
  Kernel qnp = matrix_Q(m).power(n - p);
  double denom = eta_p(qnp.apply(Vec(m.d, 1.0)));
  Kernel out = qnp;
  for (double& v : out.a) v /= denom;
  out.kind = KernelKind::generic;
  return out;
}

double hat_normalized_denominator(const Model& m, const FlowTrace& flow, int p, int n) {
  if (p > n || p < 0) throw std::invalid_argument("hat_normalized_denominator: bad indices");
  if (p == n) return 1.0;
  Kernel q = matrix_Q(m);
  int power = (p == 0) ? n - 1 : n - p;
  Vec qpow1 = q.power(power).apply(Vec(m.d, 1.0));
  const Measure& base = (p == 0) ? flow.etas[0] : flow.etas[p - 1];
  return base(qpow1);
}

Vec qhat_power_apply(const Model& m, int power, const Vec& f_s, double f_c) {
  if (power < 1) throw std::invalid_argument("qhat_power_apply: power must be >= 1");
  AbsorbingKernel ak = kernel_K(m);
  // Q̂(f)|_S = Q(f_S) + exit·f(c); subsequent applications stay null at c.
  Vec cur = ak.on_s.apply(f_s);
  for (int i = 0; i < m.d; ++i) cur[i] += ak.exit[i] * f_c;
  for (int k = 1; k < power; ++k) cur = ak.on_s.apply(cur);
  return cur;
}

Kernel conditioned_operator_pn(const Model& m, int n) {
  Kernel qn = matrix_Q(m).power(n);
  Kernel out(m.d, KernelKind::stochastic);
  for (int x = 0; x < m.d; ++x) {
    double s = 0.0;
    for (int y = 0; y < m.d; ++y) s += qn.at(x, y);
    for (int y = 0; y < m.d; ++y) out.at(x, y) = qn.at(x, y) / s;
  }
  return out;
}

AbsorptionLaw absorption_law(const Model& m, int nmax) {
  FlowTrace t = evolve(m, nmax + 1);
  AbsorptionLaw law;
  law.hard_pmf.assign(nmax + 1, 0.0);
  law.soft_pmf.assign(nmax + 1, 0.0);
  for (int k = 1; k <= nmax; ++k) law.hard_pmf[k] = t.z[k - 1] - t.z[k];
  law.hard_survival = t.z[nmax];
  for (int k = 0; k <= nmax; ++k) law.soft_pmf[k] = t.z[k] * (1.0 - t.eta_g[k]);
  double s = 0.0;
  for (double v : law.soft_pmf) s += v;
  law.soft_survival = 1.0 - s;
  return law;
}

PathMeasure exact_path_measure(const Model& m, int n) {
  double states = std::pow(static_cast<double>(m.d), n + 1);
  if (states > 1e7) throw std::runtime_error("exact_path_measure: d^(n+1) exceeds guard");
  SoftDecomposition sd = soft_decomposition(m);
  PathMeasure pm;
  pm.n = n;
  std::vector<int> path(n + 1, 1);
  // Iterate over all paths in S^{n+1} via odometer increments.
  for (;;) {
    double w = m.eta0.w[path[0] - 1];
    for (int p = 0; p < n && w > 0.0; ++p) w *= sd.m.at(path[p] - 1, path[p + 1] - 1);
    if (w > 0.0) {
      for (int p = 0; p < n; ++p) w *= sd.g[path[p] - 1];
      if (w > 0.0) pm.atoms[path] = w;
      pm.normalization += w;
    }
    int i = n;
    while (i >= 0 && path[i] == m.d) path[i--] = 1;
    if (i < 0) break;
    ++path[i];
  }
  return pm;
}

std::pair<double, double> lipschitz_bound(const Model& m, int n, const Measure& mu1,
                                          const Measure& mu2) {
  Kernel qn = matrix_Q(m).power(n);
  Vec qn1 = qn.apply(Vec(m.d, 1.0));
  auto image = [&](const Measure& mu) {
    Measure g = qn.apply_left(mu);
    return g.normalized();
  };
  double lhs = tv_distance(image(mu1), image(mu2));
  double rhs = rho_ratio(qn1) * dobrushin_beta(conditioned_operator_pn(m, n)) * tv_distance(mu1, mu2);
  return {lhs, rhs};
}

} // namespace qsw
