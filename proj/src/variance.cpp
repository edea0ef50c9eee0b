#include "qsw/variance.hpp"

#include "qsw/spectral.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace qsw {

namespace {

constexpr double kPi = std::numbers::pi;

// Asymptotic variances are nonnegative; tiny negative round-off is clamped
// (noisily), anything worse is a cancellation bug and must surface.
double clamp_variance(double v, const char* what) {
  if (v >= 0.0) return v;
  if (v >= -1e-10) {
    std::fprintf(stderr, "qsw: clamping tiny negative %s = %.3e to 0\n", what, v);
    return 0.0;
  }
  throw std::runtime_error(std::string("negative variance from ") + what);
}

Vec centered(const Vec& f, double c) {
  Vec out = f;
  for (double& v : out) v -= c;
  return out;
}

Vec pointwise_sq(const Vec& f) {
  Vec out = f;
  for (double& v : out) v *= v;
  return out;
}

// Q^k for k = 0..n, computed once.
std::vector<Kernel> q_powers(const Model& m, int n) {
  std::vector<Kernel> out;
  out.reserve(n + 1);
  out.push_back(Kernel::identity(m.d));
  Kernel q = matrix_Q(m);
  for (int k = 1; k <= n; ++k) out.push_back(out.back().multiply(q));
  return out;
}

} // namespace

double v_dp(const Model& m, const FlowTrace& flow, int n, const Vec& f) {
  SpectralBasis sb = eigensystem(m);
  const Vec& phi0 = sb.phi[0];
  Kernel qn = matrix_Q(m).power(n);
  double denom = flow.etas[0](qn.apply(Vec(m.d, 1.0)));
  double pref = std::pow(sb.eigenvalues[0], n) * flow.etas[0](phi0) / denom;
  Vec f2_over_phi(m.d);
  for (int i = 0; i < m.d; ++i) f2_over_phi[i] = f[i] * f[i] / phi0[i];
  double enf = flow.etas[n](f);
  return clamp_variance(pref * flow.etas[n](f2_over_phi) - enf * enf, "v_dp");
}

double w_dp(const Model& m, const FlowTrace& flow, int n, const Vec& f) {
  SpectralBasis sb = eigensystem(m);
  const Vec& phi0 = sb.phi[0];
  Kernel qn = matrix_Q(m).power(n);
  double denom = flow.etas[0](qn.apply(Vec(m.d, 1.0)));
  double pref = std::pow(sb.eigenvalues[0], n) * flow.etas[0](phi0) / denom;
  double enf = flow.etas[n](f);
  Vec arg(m.d);
  for (int i = 0; i < m.d; ++i) {
    double c = f[i] - enf;
    arg[i] = c * c / phi0[i];
  }
  return clamp_variance(pref * flow.etas[n](arg), "w_dp");
}

namespace {
struct IsPieces {
  double ratio; // η0 Q̃^n(1) / [η0 Q^n(1)]²
  Measure eta_tilde;
};
IsPieces is_pieces(const Model& m, const FlowTrace& flow, int n) {
  Kernel qt = matrix_Qtilde(m);
  Measure gt = flow.etas[0];
  for (int k = 0; k < n; ++k) gt = qt.apply_left(gt);
  double zt = gt.mass_s();
  double z = flow.z[n]; // η0 Q^n(1)
  IsPieces out{zt / (z * z), gt.normalized()};
  return out;
}
} // namespace

double v_is(const Model& m, const FlowTrace& flow, int n, const Vec& f) {
  IsPieces p = is_pieces(m, flow, n);
  double enf = flow.etas[n](f);
  return clamp_variance(p.ratio * p.eta_tilde(pointwise_sq(f)) - enf * enf, "v_is");
}

double w_is(const Model& m, const FlowTrace& flow, int n, const Vec& f) {
  IsPieces p = is_pieces(m, flow, n);
  double etf = p.eta_tilde(f);
  double enf = flow.etas[n](f);
  double inner = p.eta_tilde(pointwise_sq(centered(f, etf))) + (etf - enf) * (etf - enf);
  return clamp_variance(p.ratio * inner, "w_is");
}

double v_soft(const Model& m, const FlowTrace& flow, int n, const Vec& f) {
  SoftDecomposition sd = soft_decomposition(m);
  std::vector<Kernel> qp = q_powers(m, n);
  const Vec ones(m.d, 1.0);
  double enf = flow.etas[n](f);
  double first = 0.0, second = 0.0;
  for (int p = 0; p <= n; ++p) {
    Vec qf = qp[n - p].apply(f);
    double denom = flow.etas[p](qp[n - p].apply(ones));
    Vec qpn(m.d);
    for (int i = 0; i < m.d; ++i) qpn[i] = qf[i] / denom;
    first += flow.etas[p](pointwise_sq(centered(qpn, enf)));
    if (p < n) {
      double eg = flow.eta_g[p];
      Vec diff(m.d);
      for (int i = 0; i < m.d; ++i) {
        double t = qpn[i] - sd.g[i] / eg * enf;
        diff[i] = t * t;
      }
      second += eg * eg * flow.etas[p](diff);
    }
  }
  return clamp_variance(first - second, "v_soft");
}

double local_fluctuation(const Model& m, const Measure& eta_n, const Vec& f) {
  SoftDecomposition sd = soft_decomposition(m);
  Kernel q = matrix_Q(m);
  Measure eta_next = sd.m.apply_left(boltzmann_gibbs(sd.g, eta_n));
  Vec qf = q.apply(f);
  Vec one_minus_g(m.d);
  for (int i = 0; i < m.d; ++i) one_minus_g[i] = 1.0 - sd.g[i];
  double next_f = eta_next(f);
  double t1 = eta_next(pointwise_sq(f)) - eta_n(pointwise_sq(qf));
  Vec omg_qf(m.d);
  for (int i = 0; i < m.d; ++i) omg_qf[i] = one_minus_g[i] * qf[i];
  double t2 = eta_n(pointwise_sq(one_minus_g)) * next_f + 2.0 * eta_n(omg_qf);
  return t1 - next_f * t2;
}

double local_fluctuation_centered(const Model& m, const Measure& eta_n, const Vec& f) {
  SoftDecomposition sd = soft_decomposition(m);
  Kernel q = matrix_Q(m);
  Measure eta_next = sd.m.apply_left(boltzmann_gibbs(sd.g, eta_n));
  Vec fb = centered(f, eta_next(f));
  return eta_next(pointwise_sq(fb)) - eta_n(pointwise_sq(q.apply(fb)));
}

double v_soft_telescoping(const Model& m, const FlowTrace& flow, int n, const Vec& f) {
  std::vector<Kernel> qp = q_powers(m, n);
  const Vec ones(m.d, 1.0);
  double enf = flow.etas[n](f);
  auto qpn_centered = [&](int p) {
    Vec qf = qp[n - p].apply(f);
    double denom = flow.etas[p](qp[n - p].apply(ones));
    Vec out(m.d);
    for (int i = 0; i < m.d; ++i) out[i] = qf[i] / denom - enf;
    return out;
  };
  double acc = flow.etas[0](pointwise_sq(qpn_centered(0)));
  for (int p = 1; p <= n; ++p)
    acc += local_fluctuation(m, flow.etas[p - 1], qpn_centered(p));
  return clamp_variance(acc, "v_soft_telescoping");
}

double w_soft(const Model& m, const FlowTrace& flow, int n, const Vec& f) {
  return v_soft(m, flow, n, centered(f, flow.etas[n](f)));
}

double w_soft_direct(const Model& m, const FlowTrace& flow, int n, const Vec& f) {
  std::vector<Kernel> qp = q_powers(m, n);
  const Vec ones(m.d, 1.0);
  Vec fb = centered(f, flow.etas[n](f));
  double acc = flow.etas[n](pointwise_sq(fb));
  for (int p = 0; p < n; ++p) {
    Vec qf = qp[n - p].apply(fb);
    double denom = flow.etas[p](qp[n - p].apply(ones));
    for (double& v : qf) v /= denom;
    double eg = flow.eta_g[p];
    acc += (1.0 - eg * eg) * flow.etas[p](pointwise_sq(qf));
  }
  return clamp_variance(acc, "w_soft_direct");
}

double vhat_hard(const Model& m, const FlowTrace& flow, int n, const Vec& f_s, double f_c) {
  if (n < 1) throw std::invalid_argument("vhat_hard: requires n >= 1");
  AbsorbingKernel ak = kernel_K(m);
  const Measure& hat_n = flow.eta_hats[n];
  double mhat = hat_n(f_s, f_c);

  // Q̂_{p,n}(f) restricted to S (value at the cemetery is 0 for p < n).
  auto qhat_pn = [&](int p) {
    Vec v = qhat_power_apply(m, n - p, f_s, f_c);
    double denom = hat_normalized_denominator(m, flow, p, n);
    for (double& t : v) t /= denom;
    return v;
  };

  double first = 0.0, second = 0.0;
  for (int p = 0; p <= n; ++p) {
    const Measure& hat_p = flow.eta_hats[p];
    if (p < n) {
      Vec v = qhat_pn(p);
      double acc = hat_p(pointwise_sq(centered(v, mhat)));
      acc += hat_p.cemetery * mhat * mhat; // Q̂_{p,n}(f)(c) = 0
      first += acc;
    } else {
      double acc = hat_p(pointwise_sq(centered(f_s, mhat)));
      acc += hat_p.cemetery * (f_c - mhat) * (f_c - mhat);
      first += acc;
    }
    if (p < n) {
      // K Q̂_{p+1,n}(f) on S; Q̂_{n,n}(f) = f itself.
      Vec h_s;
      double h_c;
      if (p + 1 < n) {
        h_s = qhat_pn(p + 1);
        h_c = 0.0;
      } else {
        h_s = f_s;
        h_c = f_c;
      }
      Vec kh = ak.on_s.apply(h_s);
      for (int i = 0; i < m.d; ++i) kh[i] += ak.exit[i] * h_c;
      second += hat_p(pointwise_sq(centered(kh, mhat))); // 1_S factor: S only
    }
  }
  return first - second;
}

double v_hard_prekill(const Model& m, const FlowTrace& flow, int n, const Vec& f) {
  return clamp_variance(vhat_hard(m, flow, n, f, 0.0), "v_hard_prekill");
}

double w_hard_prekill(const Model& m, const FlowTrace& flow, int n, const Vec& f) {
  double mhat = flow.eta_hats[n](f);
  return clamp_variance(vhat_hard(m, flow, n, centered(f, mhat), -mhat), "w_hard_prekill");
}

double w_hard_prekill_direct(const Model& m, const FlowTrace& flow, int n, const Vec& f) {
  if (n < 1) throw std::invalid_argument("w_hard_prekill_direct: requires n >= 1");
  const Measure& hat_n = flow.eta_hats[n];
  double mhat = hat_n(f);
  Vec fb = centered(f, mhat);
  double acc = hat_n(pointwise_sq(fb)) + hat_n.cemetery * mhat * mhat;
  for (int p = 1; p < n; ++p) {
    Vec v = qhat_power_apply(m, n - p, fb, -mhat);
    double denom = hat_normalized_denominator(m, flow, p, n);
    for (double& t : v) t /= denom;
    double sp = flow.eta_hats[p].mass_s(); // η̂_p(1_S)
    acc += (1.0 - sp * sp) * flow.eta_hats[p](pointwise_sq(v));
  }
  return clamp_variance(acc, "w_hard_prekill_direct");
}

double v_hard(const Model& m, const FlowTrace& flow, int n, const Vec& f) {
  return clamp_variance(vhat_hard(m, flow, n, f, 0.0), "v_hard");
}

double w_hard(const Model& m, const FlowTrace& flow, int n, const Vec& f) {
  if (n < 1) throw std::invalid_argument("w_hard: requires n >= 1");
  double eg = flow.eta_g[n - 1];
  Vec arg = centered(f, flow.etas[n](f));
  for (double& v : arg) v /= eg;
  return clamp_variance(vhat_hard(m, flow, n, arg, 0.0), "w_hard");
}

double w_hard_display(const Model& m, const FlowTrace& flow, int n, const Vec& f) {
  if (n < 1) throw std::invalid_argument("w_hard_display: requires n >= 1");
  std::vector<Kernel> qp = q_powers(m, n);
  const Vec ones(m.d, 1.0);
  Vec fb = centered(f, flow.etas[n](f));
  double eg_last = flow.eta_g[n - 1];
  // Exact expanded form: the p-th term integrates [Q^{n-p}(f̄)]² against the
  // predicted measure η̂_p restricted to S (= η_{p-1}(g) η_p), normalized by
  // its own denominator η_{p-1}(Q^{n-p}(1)).  Normalizing by η_p(Q^{n-p}(1))
  // instead is equivalent only at stationarity, where the two coincide.
  double extra = 0.0;
  for (int p = 1; p < n; ++p) {
    Vec qf = qp[n - p].apply(fb);
    double denom = flow.etas[p - 1](qp[n - p].apply(ones));
    for (double& v : qf) v /= denom;
    double eg = flow.eta_g[p - 1];
    extra += (1.0 - eg * eg) * eg * flow.etas[p](pointwise_sq(qf));
  }
  double acc = flow.etas[n](pointwise_sq(fb)) + extra / eg_last;
  return clamp_variance(acc / eg_last, "w_hard_display");
}

// ---- convenience overloads -------------------------------------------------

#define QSW_CONV(name)                                            \
  double name(const Model& m, int n, const Vec& f) {              \
    FlowTrace flow = evolve(m, n);                                \
    return name(m, flow, n, f);                                   \
  }
QSW_CONV(v_dp)
QSW_CONV(w_dp)
QSW_CONV(v_is)
QSW_CONV(w_is)
QSW_CONV(v_soft)
QSW_CONV(w_soft)
QSW_CONV(v_hard_prekill)
QSW_CONV(w_hard_prekill)
QSW_CONV(v_hard)
QSW_CONV(w_hard)
#undef QSW_CONV

double v_soft_equilibrium_phi0(const Model& m, int n) {
  SpectralBasis sb = eigensystem(m);
  auto [pi, pi_phi] = quasi_stationary(m);
  const Vec& phi0 = sb.phi[0];
  double mean = pi(phi0);
  double V = pi(pointwise_sq(centered(phi0, mean)));
  Vec q_cent = matrix_Q(m).apply(centered(phi0, mean));
  double c2 = pi(pointwise_sq(q_cent));
  return (n + 1) * V - n * c2;
}

double v_hard_equilibrium_phi0(const Model& m, int n) {
  SpectralBasis sb = eigensystem(m);
  auto [pi, pi_phi] = quasi_stationary(m);
  const Vec& phi0 = sb.phi[0];
  double e0 = sb.eigenvalues[0];
  double mean = pi(phi0);
  double V = pi(pointwise_sq(centered(phi0, mean)));
  return e0 * ((1.0 + (n - 1) * (1.0 - e0 * e0)) * V + n * (1.0 - e0) * mean * mean);
}

double w_soft_path_bound(const Model& m, int n) {
  return 1.0 + (2.0 * n / (1.0 + m.theta)) * (1.0 / (1.0 - std::exp(-1.0))) /
                   std::sin(kPi / (m.d + 1));
}

ScaledMse scaled_mse(const Vec& samples, double center, int N) {
  int R = static_cast<int>(samples.size());
  if (R < 2) throw std::invalid_argument("scaled_mse: need at least 2 replicates");
  Vec y(R);
  double mean = 0.0;
  for (int i = 0; i < R; ++i) {
    double dlt = samples[i] - center;
    y[i] = N * dlt * dlt;
    mean += y[i];
  }
  mean /= R;
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  // jackknife SE of the mean statistic reduces to sd/sqrt(R)
  return {mean, std::sqrt(ss / (static_cast<double>(R) * (R - 1)))};
}

EmpiricalVariance empirical_variance(const std::vector<ReplicateRow>& rows, int N, double true_z,
                                     double true_eta_f) {
  Vec a(rows.size()), b(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    a[i] = rows[i].z / true_z * rows[i].eta_f;
    b[i] = rows[i].eta_f;
  }
  ScaledMse va = scaled_mse(a, true_eta_f, N);
  ScaledMse wb = scaled_mse(b, true_eta_f, N);
  return {va.value, va.se, wb.value, wb.se};
}

} // namespace qsw
