#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qsw {

using Vec = std::vector<double>;

// A nonnegative measure on the state space S = {1,...,d}, plus an optional
// mass on the cemetery (coffin) state c.  May be a probability measure or an
// unnormalized one; callers that need normalization say so explicitly.
struct Measure {
  Vec w;                 // w[x-1] = mass at state x in S
  double cemetery = 0.0; // mass at the coffin state

  Measure() = default;
  explicit Measure(Vec weights, double cem = 0.0)
      : w(std::move(weights)), cemetery(cem) {}

  int d() const { return static_cast<int>(w.size()); }

  double mass_s() const {
    double s = 0.0;
    for (double v : w) s += v;
    return s;
  }
  double total() const { return mass_s() + cemetery; }

  // Integral of a function given by its values on S; functions are null at
  // the cemetery unless integrated via operator()(f, fc).
  double operator()(const Vec& f) const {
    if (f.size() != w.size()) throw std::invalid_argument("measure/function size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * f[i];
    return s;
  }
  double operator()(const Vec& f, double fc) const { return (*this)(f) + cemetery * fc; }

  Measure normalized() const {
    double t = total();
    if (t <= 0.0) throw std::runtime_error("cannot normalize a zero measure");
    Measure out = *this;
    for (double& v : out.w) v /= t;
    out.cemetery /= t;
    return out;
  }

  static Measure uniform(int d) { return Measure(Vec(d, 1.0 / d)); }
  static Measure dirac(int d, int x) { // x in 1..d
    Measure m{Vec(d, 0.0)};
    m.w.at(x - 1) = 1.0;
    return m;
  }
  static Measure dirac_cemetery(int d) {
    Measure m{Vec(d, 0.0)};
    m.cemetery = 1.0;
    return m;
  }
};

// Total variation distance between two probability measures on S ∪ {c}:
// half the L1 distance, cemetery included as an extra point.
double tv_distance(const Measure& mu1, const Measure& mu2);

// Boltzmann-Gibbs transformation Ψ_g(μ)(x) = g(x)μ(x)/μ(g).
// Throws if μ(g) = 0 (total absorption).  g is given by its values on S;
// the result carries no cemetery mass.
Measure boltzmann_gibbs(const Vec& g, const Measure& mu);

// ρ(f) = max f / min f for strictly positive f; throws otherwise.
double rho_ratio(const Vec& f);

} // namespace qsw
