#pragma once

#include "qsw/measure.hpp"

namespace qsw {

enum class KernelKind { stochastic, substochastic, generic };

// Dense d×d kernel, row-indexed by source state (0-based storage for
// states 1..d).  Small d makes dense storage the right choice.
struct Kernel {
  int d = 0;
  KernelKind kind = KernelKind::generic;
  Vec a; // row-major, a[i*d + j]

  Kernel() = default;
  Kernel(int dim, KernelKind k) : d(dim), kind(k), a(static_cast<std::size_t>(dim) * dim, 0.0) {}

  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * d + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * d + j]; }

  Vec row(int i) const { return Vec(a.begin() + static_cast<std::ptrdiff_t>(i) * d, a.begin() + static_cast<std::ptrdiff_t>(i + 1) * d); }

  // (K f)(x) for f on S.
  Vec apply(const Vec& f) const;
  // μK as a measure on S (any cemetery mass of μ is dropped: kernels here
  // act on S only).
  Measure apply_left(const Measure& mu) const;

  Kernel multiply(const Kernel& o) const;
  Kernel power(int n) const;
  static Kernel identity(int d);

  Vec row_sums() const;
  double max_abs_diff(const Kernel& o) const;
};

// Dobrushin ergodic coefficient: max over state pairs of the TV distance
// between rows of a stochastic kernel.
double dobrushin_beta(const Kernel& m);

} // namespace qsw
