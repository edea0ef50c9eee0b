#include "qsw/measure.hpp"

#include <cmath>

namespace qsw {

double tv_distance(const Measure& mu1, const Measure& mu2) {
  if (mu1.d() != mu2.d()) throw std::invalid_argument("tv_distance: dimension mismatch");
  double s = std::abs(mu1.cemetery - mu2.cemetery);
  for (int i = 0; i < mu1.d(); ++i) s += std::abs(mu1.w[i] - mu2.w[i]);
  return 0.5 * s;
}

Measure boltzmann_gibbs(const Vec& g, const Measure& mu) {
  if (static_cast<int>(g.size()) != mu.d())
    throw std::invalid_argument("boltzmann_gibbs: size mismatch");
  double z = mu(g);
  if (z <= 0.0) throw std::runtime_error("boltzmann_gibbs: zero mass (total absorption)");
  Measure out{Vec(mu.d(), 0.0)};
  for (int i = 0; i < mu.d(); ++i) out.w[i] = g[i] * mu.w[i] / z;
  return out;
}

double rho_ratio(const Vec& f) {
  if (f.empty()) throw std::invalid_argument("rho_ratio: empty function");
  double lo = f[0], hi = f[0];
  for (double v : f) {
    if (!(v > 0.0)) throw std::domain_error("rho_ratio: function must be strictly positive");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi / lo;
}

} // namespace qsw
