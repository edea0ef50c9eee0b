#include "qsw/model.hpp"

#include <cmath>

namespace qsw {

Model::Model(int d_, double theta_, Measure eta0_) : d(d_), theta(theta_), eta0(std::move(eta0_)) {
  if (d < 1) throw std::invalid_argument("Model: d must be >= 1");
  if (theta < 0.0) throw std::invalid_argument("Model: theta must be >= 0");
  if (eta0.d() != d) throw std::invalid_argument("Model: eta0 dimension mismatch");
  if (eta0.cemetery != 0.0) throw std::invalid_argument("Model: eta0 must be supported on S");
  if (std::abs(eta0.mass_s() - 1.0) > 1e-12)
    throw std::invalid_argument("Model: eta0 must be a probability measure");
}

AbsorbingKernel kernel_K(const Model& m) {
  const double step = 1.0 / (2.0 + m.theta);
  const double lazy = m.theta / (2.0 + m.theta);
  AbsorbingKernel out{Kernel(m.d, KernelKind::substochastic), Vec(m.d, 0.0)};
  for (int x = 1; x <= m.d; ++x) {
    out.on_s.at(x - 1, x - 1) = lazy;
    if (x - 1 >= 1)
      out.on_s.at(x - 1, x - 2) = step;
    else
      out.exit[x - 1] += step;
    if (x + 1 <= m.d)
      out.on_s.at(x - 1, x) = step;
    else
      out.exit[x - 1] += step;
  }
  return out;
}

Kernel matrix_Q(const Model& m) {
  Kernel q = kernel_K(m).on_s;
  q.kind = KernelKind::substochastic;
  return q;
}

AbsorbingKernel matrix_Qhat(const Model& m) { return kernel_K(m); }

SoftDecomposition soft_decomposition(const Model& m) {
  SoftDecomposition out;
  if (m.d == 1) {
    // Single-state chain: Q = [θ/(2+θ)] forces g = θ/(2+θ), M = [1].
    out.g = Vec{m.theta / (2.0 + m.theta)};
    out.m = Kernel(1, KernelKind::stochastic);
    out.m.at(0, 0) = 1.0;
    out.degenerate = true;
    return out;
  }
  const double gb = (1.0 + m.theta) / (2.0 + m.theta);
  out.g.assign(m.d, 1.0);
  out.g.front() = gb;
  out.g.back() = gb;
  out.m = Kernel(m.d, KernelKind::stochastic);
  const double step = 1.0 / (2.0 + m.theta);
  const double lazy = m.theta / (2.0 + m.theta);
  for (int x = 2; x < m.d; ++x) {
    out.m.at(x - 1, x - 2) = step;
    out.m.at(x - 1, x) = step;
    out.m.at(x - 1, x - 1) = lazy;
  }
  const double refl = m.theta / (1.0 + m.theta);
  out.m.at(0, 0) = refl;
  out.m.at(0, 1) = 1.0 - refl;
  out.m.at(m.d - 1, m.d - 1) = refl;
  out.m.at(m.d - 1, m.d - 2) = 1.0 - refl;
  return out;
}

Kernel matrix_Qtilde(const Model& m) {
  SoftDecomposition sd = soft_decomposition(m);
  Kernel out(m.d, KernelKind::generic);
  for (int i = 0; i < m.d; ++i) {
    double g2 = sd.g[i] * sd.g[i];
    for (int j = 0; j < m.d; ++j) out.at(i, j) = g2 * sd.m.at(i, j);
  }
  return out;
}

} // namespace qsw
