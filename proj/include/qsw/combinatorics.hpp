#pragma once

#include "qsw/model.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace qsw {

using BigInt = boost::multiprecision::cpp_int;

// Exact counts of length-n nearest-neighbour paths confined to {1,...,d}:
// C[n](x-1, y-1 flattened) with row sums C_n(x) = Σ_y C_n(x,y).
// 2^{-n} C_n(x,y) is the n-step kernel of the θ = 0 walk.
struct PathCountTable {
  int d = 0, nmax = 0;
  std::vector<std::vector<BigInt>> counts; // counts[n][x*d + y], 0-based
  std::vector<std::vector<BigInt>> rows;   // rows[n][x-1] = C_n(x)

  const BigInt& at(int n, int x, int y) const { // x, y in 1..d
    return counts[n][static_cast<std::size_t>(x - 1) * d + (y - 1)];
  }
  const BigInt& row(int n, int x) const { return rows[n][x - 1]; }
};

PathCountTable count_paths(int d, int nmax);

// Trigonometric closed form of the θ = 0 kernel power:
//   Q0^n(x,y) = (2/(d+1)) Σ_i cos^n(iπ/(d+1)) sin(ixπ/(d+1)) sin(iyπ/(d+1)).
double spectral_count(int d, int n, int x, int y);

// Row-sum closed form via the cotangent identity (odd i only); the half-angle
// argument iπ/(2(d+1)) is required — the full-angle version annihilates the
// sum term-by-term against the counts.
double spectral_row_count(int d, int n, int x);

// C_n(x) = Σ_l (-1)^l binom((x-1)-l, l) C_{n+(x-1)-2l}(1), from the sine
// multiple-angle expansion.  Requires the table to extend to n + x - 1.
BigInt multiple_angle_recurrence(const PathCountTable& t, int n, int x);

// Q^n = (1+θ/2)^{-n} Σ_m binom(n,m) (θ/2)^{n-m} Q0^m.  (The exponent on θ/2
// pairs with the identity part: the n = 1 case K = (1+θ/2)^{-1}[(θ/2)I + K0]
// fixes it.)
Kernel binomial_theta_relation(const Model& m, int n);

} // namespace qsw
