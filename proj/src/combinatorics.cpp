#include "qsw/combinatorics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qsw {

namespace {
constexpr double kPi = std::numbers::pi;

BigInt binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 0; i < k; ++i) {
    r *= n - i;
    r /= i + 1;
  }
  return r;
}
} // namespace

PathCountTable count_paths(int d, int nmax) {
  if (d < 1 || nmax < 0) throw std::invalid_argument("count_paths: d >= 1, nmax >= 0");
  PathCountTable t;
  t.d = d;
  t.nmax = nmax;
  t.counts.resize(nmax + 1, std::vector<BigInt>(static_cast<std::size_t>(d) * d, 0));
  t.rows.resize(nmax + 1, std::vector<BigInt>(d, 0));
  for (int x = 0; x < d; ++x) t.counts[0][static_cast<std::size_t>(x) * d + x] = 1;
  for (int n = 1; n <= nmax; ++n) {
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y) {
        BigInt acc = 0;
        if (y > 0) acc += t.counts[n - 1][static_cast<std::size_t>(x) * d + (y - 1)];
        if (y + 1 < d) acc += t.counts[n - 1][static_cast<std::size_t>(x) * d + (y + 1)];
        t.counts[n][static_cast<std::size_t>(x) * d + y] = acc;
      }
  }
  for (int n = 0; n <= nmax; ++n)
    for (int x = 0; x < d; ++x) {
      BigInt acc = 0;
      for (int y = 0; y < d; ++y) acc += t.counts[n][static_cast<std::size_t>(x) * d + y];
      t.rows[n][x] = acc;
    }
  return t;
}

double spectral_count(int d, int n, int x, int y) {
  double acc = 0.0;
  for (int i = 1; i <= d; ++i) {
    double a = i * kPi / (d + 1);
    acc += std::pow(std::cos(a), n) * std::sin(a * x) * std::sin(a * y);
  }
  return 2.0 / (d + 1) * acc;
}

double spectral_row_count(int d, int n, int x) {
  double acc = 0.0;
  for (int i = 1; i <= d; i += 2) {
    double a = i * kPi / (d + 1);
    acc += std::pow(std::cos(a), n) * std::sin(a * x) / std::tan(a / 2.0);
  }
  return 2.0 / (d + 1) * acc;
}

BigInt multiple_angle_recurrence(const PathCountTable& t, int n, int x) {
  if (x < 1 || x > t.d) throw std::invalid_argument("multiple_angle_recurrence: x out of range");
  if (n + (x - 1) > t.nmax)
    throw std::invalid_argument("multiple_angle_recurrence: table too short");
  BigInt acc = 0;
  for (int l = 0; 2 * l <= x - 1; ++l) {
    BigInt term = binom((x - 1) - l, l) * t.row(n + (x - 1) - 2 * l, 1);
    if (l % 2 == 0)
      acc += term;
    else
      acc -= term;
  }
  return acc;
}

Kernel binomial_theta_relation(const Model& m, int n) {
  Model m0(m.d, 0.0, Measure::uniform(m.d));
  Kernel q0 = matrix_Q(m0);
  Kernel q0m = Kernel::identity(m.d);
  Kernel acc(m.d, KernelKind::generic);
  double half_theta = m.theta / 2.0;
  for (int k = 0; k <= n; ++k) {
    // binom(n,k) (θ/2)^{n-k} in floating point: exact for the sizes used
    double coef = std::pow(half_theta, n - k);
    BigInt b = binom(n, k);
    coef *= b.convert_to<double>();
    for (std::size_t idx = 0; idx < acc.a.size(); ++idx) acc.a[idx] += coef * q0m.a[idx];
    if (k < n) q0m = q0m.multiply(q0);
  }
  double scale = std::pow(1.0 + half_theta, -n);
  for (double& v : acc.a) v *= scale;
  acc.kind = KernelKind::substochastic;
  return acc;
}

} // namespace qsw
