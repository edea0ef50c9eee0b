#include "qsw/kernel.hpp"

#include <cmath>

namespace qsw {

Vec Kernel::apply(const Vec& f) const {
  if (static_cast<int>(f.size()) != d) throw std::invalid_argument("Kernel::apply: size mismatch");
  Vec out(d, 0.0);
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    const double* r = a.data() + static_cast<std::size_t>(i) * d;
    for (int j = 0; j < d; ++j) s += r[j] * f[j];
    out[i] = s;
  }
  return out;
}

Measure Kernel::apply_left(const Measure& mu) const {
  if (mu.d() != d) throw std::invalid_argument("Kernel::apply_left: size mismatch");
  Measure out{Vec(d, 0.0)};
  for (int i = 0; i < d; ++i) {
    double m = mu.w[i];
    if (m == 0.0) continue;
    const double* r = a.data() + static_cast<std::size_t>(i) * d;
    for (int j = 0; j < d; ++j) out.w[j] += m * r[j];
  }
  return out;
}

Kernel Kernel::multiply(const Kernel& o) const {
  if (o.d != d) throw std::invalid_argument("Kernel::multiply: size mismatch");
  Kernel out(d, KernelKind::generic);
  for (int i = 0; i < d; ++i) {
    const double* ri = a.data() + static_cast<std::size_t>(i) * d;
    double* ro = out.a.data() + static_cast<std::size_t>(i) * d;
    for (int k = 0; k < d; ++k) {
      double v = ri[k];
      if (v == 0.0) continue;
      const double* rk = o.a.data() + static_cast<std::size_t>(k) * d;
      for (int j = 0; j < d; ++j) ro[j] += v * rk[j];
    }
  }
  return out;
}

Kernel Kernel::identity(int d) {
  Kernel out(d, KernelKind::stochastic);
  for (int i = 0; i < d; ++i) out.at(i, i) = 1.0;
  return out;
}

Kernel Kernel::power(int n) const {
  if (n < 0) throw std::invalid_argument("Kernel::power: negative exponent");
  Kernel out = identity(d);
  // Iterated multiplication on purpose: matrix powers are the authoritative
  // values here, with spectral reconstruction only a cross-check.
  for (int k = 0; k < n; ++k) out = out.multiply(*this);
  if (n > 0) out.kind = kind;
  return out;
}

Vec Kernel::row_sums() const {
  Vec out(d, 0.0);
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += at(i, j);
    out[i] = s;
  }
  return out;
}

double Kernel::max_abs_diff(const Kernel& o) const {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - o.a[i]));
  return m;
}

double dobrushin_beta(const Kernel& m) {
  double best = 0.0;
  for (int x = 0; x < m.d; ++x)
    for (int y = x + 1; y < m.d; ++y) {
      double s = 0.0;
      for (int j = 0; j < m.d; ++j) s += std::abs(m.at(x, j) - m.at(y, j));
      best = std::max(best, 0.5 * s);
    }
  return best;
}

} // namespace qsw
