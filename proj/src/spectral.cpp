#include "qsw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qsw {

namespace {
constexpr double kPi = std::numbers::pi;
} // namespace

SpectralBasis eigensystem(const Model& m) {
  const int d = m.d;
  SpectralBasis sb;
  sb.eigenvalues.resize(d);
  sb.phi.assign(d, Vec(d, 0.0));
  const double norm = std::sqrt(2.0 * d / (d + 1.0));
  for (int i = 1; i <= d; ++i) {
    sb.eigenvalues[i - 1] = (m.theta + 2.0 * std::cos(i * kPi / (d + 1))) / (m.theta + 2.0);
    for (int x = 1; x <= d; ++x)
      sb.phi[i - 1][x - 1] = norm * std::sin(i * x * kPi / (d + 1));
  }
  const double e0 = sb.eigenvalues[0];
  if (d >= 2) {
    sb.e1bar = sb.eigenvalues[1] / e0;
    sb.e1bar_closed =
        1.0 - 4.0 * std::sin(1.5 * kPi / (d + 1)) * std::sin(0.5 * kPi / (d + 1)) /
                  (m.theta + 2.0 * std::cos(kPi / (d + 1)));
    for (int i = 1; i < d; ++i)
      sb.estar = std::max(sb.estar, std::abs(sb.eigenvalues[i]) / e0);
  }
  const double s = std::sin(kPi / (d + 1));
  const double c = std::sqrt((d + 1) / 2.0);
  sb.s1 = c / s;
  sb.s2 = sb.s1 / s;
  sb.s3 = sb.s2 / s;
  return sb;
}

std::pair<Measure, Measure> quasi_stationary(const Model& m) {
  const int d = m.d;
  Measure pi{Vec(d, 0.0)}, pi_phi{Vec(d, 0.0)};
  const double t = std::tan(0.5 * kPi / (d + 1));
  for (int x = 1; x <= d; ++x) {
    double s = std::sin(x * kPi / (d + 1));
    pi.w[x - 1] = t * s;
    pi_phi.w[x - 1] = 2.0 / (d + 1) * s * s;
  }
  return {pi, pi_phi};
}

Kernel doob_kernel(const Model& m) {
  SpectralBasis sb = eigensystem(m);
  Kernel q = matrix_Q(m);
  const double e0 = sb.eigenvalues[0];
  const Vec& phi0 = sb.phi[0];
  Kernel out(m.d, KernelKind::stochastic);
  for (int i = 0; i < m.d; ++i)
    for (int j = 0; j < m.d; ++j)
      out.at(i, j) = q.at(i, j) * phi0[j] / (e0 * phi0[i]);
  return out;
}

Kernel reconstruct_qn(const Model& m, int n) {
  SpectralBasis sb = eigensystem(m);
  const int d = m.d;
  Kernel out(d, KernelKind::generic);
  for (int i = 0; i < d; ++i) {
    double en = std::pow(sb.eigenvalues[i], n);
    const Vec& phi = sb.phi[i];
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y)
        out.at(x, y) += en * phi[x] * phi[y] / d; // u(y) = 1/d
  }
  return out;
}

Vec tridiagonal_spectrum(const Vec& diag, const Vec& lower, const Vec& upper) {
  const int n = static_cast<int>(diag.size());
  if (static_cast<int>(lower.size()) != n - 1 || static_cast<int>(upper.size()) != n - 1)
    throw std::invalid_argument("tridiagonal_spectrum: off-diagonal size mismatch");
  Vec d = diag;
  Vec e(n, 0.0); // e[0..n-2] symmetrized off-diagonals
  for (int i = 0; i + 1 < n; ++i) {
    double p = lower[i] * upper[i];
    if (p < 0.0)
      throw std::domain_error("tridiagonal_spectrum: lower*upper must be nonnegative");
    e[i] = std::sqrt(p);
  }
  // QL with implicit shifts on the symmetric tridiagonal (d, e).
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    for (;;) {
      int mm;
      for (mm = l; mm + 1 < n; ++mm) {
        double dd = std::abs(d[mm]) + std::abs(d[mm + 1]);
        if (std::abs(e[mm]) <= 1e-300 + 1e-16 * dd) break;
      }
      if (mm == l) break;
      if (++iter > 60) throw std::runtime_error("tridiagonal_spectrum: QL failed to converge");
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[mm] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (int i = mm - 1; i >= l; --i) {
        double f = s * e[i];
        double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[mm] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[mm] = 0.0;
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

TildeSpectrum tilde_spectrum(const Model& m) {
  if (m.d < 2) throw std::invalid_argument("tilde_spectrum: requires d >= 2");
  SoftDecomposition sd = soft_decomposition(m);
  Kernel q = matrix_Q(m);
  const int d = m.d;
  // R = diag(√g) Q diag(√g): symmetric tridiagonal.
  Vec rdiag(d), roff(d - 1);
  for (int i = 0; i < d; ++i) rdiag[i] = sd.g[i] * q.at(i, i);
  for (int i = 0; i + 1 < d; ++i)
    roff[i] = std::sqrt(sd.g[i]) * q.at(i, i + 1) * std::sqrt(sd.g[i + 1]);

  TildeSpectrum out;
  Vec spec = tridiagonal_spectrum(rdiag, roff, roff);
  out.e0tilde = spec.back();

  // Top eigenvector by power iteration on R + I (shift keeps the iteration
  // convergent in the θ = 0 case, where the spectrum of R is symmetric).
  Vec v(d, 1.0 / std::sqrt(static_cast<double>(d)));
  auto apply_r = [&](const Vec& x) {
    Vec y(d, 0.0);
    for (int i = 0; i < d; ++i) {
      y[i] = rdiag[i] * x[i];
      if (i > 0) y[i] += roff[i - 1] * x[i - 1];
      if (i + 1 < d) y[i] += roff[i] * x[i + 1];
    }
    return y;
  };
  double lambda = 0.0;
  const int iter_cap = 200000;
  int it = 0;
  for (; it < iter_cap; ++it) {
    Vec y = apply_r(v);
    for (int i = 0; i < d; ++i) y[i] += v[i]; // shift by +1
    double nrm = 0.0;
    for (double t : y) nrm += t * t;
    nrm = std::sqrt(nrm);
    for (double& t : y) t /= nrm;
    v = y;
    Vec rv = apply_r(v);
    lambda = 0.0;
    for (int i = 0; i < d; ++i) lambda += v[i] * rv[i];
    double res = 0.0;
    for (int i = 0; i < d; ++i) res = std::max(res, std::abs(rv[i] - lambda * v[i]));
    if (res <= 1e-13) break;
  }
  if (it == iter_cap) throw std::runtime_error("tilde_spectrum: power iteration did not converge");
  if (v[0] < 0.0)
    for (double& t : v) t = -t;
  out.psi0 = v;
  out.e0tilde = lambda; // Rayleigh quotient; agrees with QL value to 1e-12

  Vec psi_tilde(d);
  for (int i = 0; i < d; ++i) psi_tilde[i] = std::sqrt(sd.g[i]) * v[i];
  out.rho_psi0 = rho_ratio(psi_tilde);
  return out;
}

} // namespace qsw
