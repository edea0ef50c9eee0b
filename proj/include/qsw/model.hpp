#pragma once

#include "qsw/kernel.hpp"
#include "qsw/measure.hpp"

namespace qsw {

// The lazy symmetric random walk on S = {1,...,d} with absorbing barriers
// {0, d+1}: one-step kernel K(i,i±1) = 1/(2+θ), K(i,i) = θ/(2+θ).
struct Model {
  int d = 1;
  double theta = 0.0;
  Measure eta0; // probability on S, no cemetery mass

  Model(int d_, double theta_, Measure eta0_);
};

// The walk kernel restricted to rows in S: on_s(x,y) = K(x,y)1_S(y), and
// exit[x-1] = mass leaving S from x (the cemetery column of the extended
// kernel).  Row sums over S plus exit equal 1.
struct AbsorbingKernel {
  Kernel on_s;
  Vec exit;
};

AbsorbingKernel kernel_K(const Model& m);

// Q(x,y) = K(x,y)1_S(y): symmetric substochastic.
Kernel matrix_Q(const Model& m);

// Q̂ rows on S equal K rows; exit mass goes to the explicit cemetery column.
// Same numbers as kernel_K — kept as a distinct entry point because the two
// objects play different roles (walk restriction vs. hard-obstacle kernel).
AbsorbingKernel matrix_Qhat(const Model& m);

// Q = diag(g)·M with g ≡ 1 in the interior, g = (1+θ)/(2+θ) at the
// boundary, and M the walk reflected at the boundaries
// (M(1,1) = θ/(1+θ)).  For d = 1 the decomposition is forced:
// g = θ/(2+θ), M = [1]; flagged degenerate.
struct SoftDecomposition {
  Vec g;
  Kernel m; // stochastic
  bool degenerate = false;
};

SoftDecomposition soft_decomposition(const Model& m);

// Q̃ = diag(g²)·M = diag(g)·Q.
Kernel matrix_Qtilde(const Model& m);

} // namespace qsw
