#include "qsw/samplers.hpp"

#include "qsw/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace qsw {

namespace {

// Per-row CDF sampling in natural state order (targets ascending).
struct RowSampler {
  std::vector<Vec> rows; // rows[x-1] = probabilities over states 1..d
  int draw(int x, RngStream& rng) const { return rng.sample(rows[x - 1]) + 1; }
};

RowSampler make_row_sampler(const Kernel& k) {
  RowSampler rs;
  rs.rows.reserve(k.d);
  for (int i = 0; i < k.d; ++i) rs.rows.push_back(k.row(i));
  return rs;
}

int draw_initial(const Measure& mu, RngStream& rng) { return rng.sample(mu.w) + 1; }

Measure weighted_empirical(int d, const std::vector<int>& states, const Vec& weights) {
  Measure out{Vec(d, 0.0)};
  double tot = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    out.w[states[i] - 1] += weights[i];
    tot += weights[i];
  }
  for (double& v : out.w) v /= tot;
  return out;
}

} // namespace

EstimatorOutput sample_doob_is(const Model& m, int n, int N, RngStream& rng, bool keep_paths) {
  SpectralBasis sb = eigensystem(m);
  const Vec& phi0 = sb.phi[0];
  const double e0 = sb.eigenvalues[0];
  Measure init = boltzmann_gibbs(phi0, m.eta0);
  RowSampler mphi = make_row_sampler(doob_kernel(m));

  EstimatorOutput out;
  out.tag = "dp";
  out.n = n;
  out.N = N;
  std::vector<int> terminal(N);
  Vec weights(N);
  if (keep_paths) out.paths.reserve(N);
  for (int i = 0; i < N; ++i) {
    int x = draw_initial(init, rng);
    std::vector<int> line;
    if (keep_paths) line.push_back(x);
    for (int p = 0; p < n; ++p) {
      x = mphi.draw(x, rng);
      if (keep_paths) line.push_back(x);
    }
    terminal[i] = x;
    weights[i] = 1.0 / phi0[x - 1];
    if (keep_paths) out.paths.push_back(std::move(line));
  }
  double mean_w = 0.0;
  for (double w : weights) mean_w += w;
  mean_w /= N;
  out.z = std::pow(e0, n) * m.eta0(phi0) * mean_w;
  out.eta = weighted_empirical(m.d, terminal, weights);
  if (keep_paths) {
    out.has_paths = true;
    out.path_weights = weights;
    double s = mean_w * N;
    for (double& w : out.path_weights) w /= s;
  }
  return out;
}

EstimatorOutput sample_reflected_is(const Model& m, int n, int N, RngStream& rng,
                                    bool keep_paths) {
  SoftDecomposition sd = soft_decomposition(m);
  RowSampler mk = make_row_sampler(sd.m);

  EstimatorOutput out;
  out.tag = "is";
  out.n = n;
  out.N = N;
  std::vector<int> terminal(N);
  Vec weights(N);
  if (keep_paths) out.paths.reserve(N);
  for (int i = 0; i < N; ++i) {
    int x = draw_initial(m.eta0, rng);
    double w = 1.0;
    std::vector<int> line;
    if (keep_paths) line.push_back(x);
    for (int p = 0; p < n; ++p) {
      w *= sd.g[x - 1];
      x = mk.draw(x, rng);
      if (keep_paths) line.push_back(x);
    }
    terminal[i] = x;
    weights[i] = w;
    if (keep_paths) out.paths.push_back(std::move(line));
  }
  double mean_w = 0.0;
  for (double w : weights) mean_w += w;
  mean_w /= N;
  out.z = mean_w;
  out.eta = weighted_empirical(m.d, terminal, weights);
  if (keep_paths) {
    out.has_paths = true;
    out.path_weights = weights;
    double s = mean_w * N;
    for (double& w : out.path_weights) w /= s;
  }
  return out;
}

EstimatorOutput sample_soft_smc(const Model& m, int n, int N, RngStream& rng, bool keep_paths) {
  SoftDecomposition sd = soft_decomposition(m);
  RowSampler mk = make_row_sampler(sd.m);

  EstimatorOutput out;
  out.tag = "soft";
  out.n = n;
  out.N = N;
  std::vector<int> cur(N);
  std::vector<std::vector<int>> lines;
  for (int i = 0; i < N; ++i) cur[i] = draw_initial(m.eta0, rng);
  if (keep_paths) {
    lines.resize(N);
    for (int i = 0; i < N; ++i) lines[i].push_back(cur[i]);
  }

  double z = 1.0;
  std::vector<int> pre(N);
  Vec sel_probs(N);
  std::vector<std::vector<int>> pre_lines;
  for (int p = 0; p < n; ++p) {
    // pre-selection empirical mean of g
    double gbar = 0.0;
    for (int i = 0; i < N; ++i) gbar += sd.g[cur[i] - 1];
    gbar /= N;
    z *= gbar;
    // selection: survive w.p. g, else an independent draw proportional to g
    // over the full pre-killing ensemble
    pre = cur;
    double gsum = gbar * N;
    // Prefix sums of the selection law, accumulated left to right so that an
    // upper_bound lookup reproduces the sequential inverse-CDF draw exactly.
    double acc = 0.0;
    for (int i = 0; i < N; ++i) {
      acc += sd.g[pre[i] - 1] / gsum;
      sel_probs[i] = acc;
    }
    if (keep_paths) pre_lines = lines;
    for (int i = 0; i < N; ++i) {
      double u = rng.uniform();
      if (u < sd.g[pre[i] - 1]) continue;
      double v = rng.uniform();
      auto it = std::upper_bound(sel_probs.begin(), sel_probs.end(), v);
      int j = it == sel_probs.end() ? N - 1 : static_cast<int>(it - sel_probs.begin());
      cur[i] = pre[j];
      if (keep_paths) lines[i] = pre_lines[j];
    }
    // mutation
    for (int i = 0; i < N; ++i) {
      cur[i] = mk.draw(cur[i], rng);
      if (keep_paths) lines[i].push_back(cur[i]);
    }
  }
  out.z = z;
  out.eta = weighted_empirical(m.d, cur, Vec(N, 1.0));
  if (keep_paths) {
    out.has_paths = true;
    out.paths = std::move(lines);
    out.path_weights.assign(N, 1.0 / N);
  }
  return out;
}

EstimatorOutput sample_hard_smc(const Model& m, int n, int N, RngStream& rng, bool keep_paths) {
  const double lazy = m.theta / (2.0 + m.theta);
  const double step = 1.0 / (2.0 + m.theta);

  EstimatorOutput out;
  out.tag = "hard";
  out.n = n;
  out.N = N;
  std::vector<int> cur(N); // 1..d, 0 = cemetery
  std::vector<std::vector<int>> lines;
  for (int i = 0; i < N; ++i) cur[i] = draw_initial(m.eta0, rng);
  if (keep_paths) {
    lines.resize(N);
    for (int i = 0; i < N; ++i) lines[i].push_back(cur[i]);
  }

  double z = 1.0;
  std::vector<int> survivors;
  for (int p = 1; p <= n; ++p) {
    // move by K; outcomes ordered by target state (left, stay, right)
    for (int i = 0; i < N; ++i) {
      int x = cur[i];
      double u = rng.uniform();
      int y;
      if (u < step)
        y = x - 1;
      else if (u < step + lazy)
        y = x;
      else
        y = x + 1;
      if (y < 1 || y > m.d) y = 0;
      cur[i] = y;
      if (keep_paths) lines[i].push_back(y);
    }
    if (p == n) { // pre-killing empirical measure at the horizon
      out.eta_hat = Measure{Vec(m.d, 0.0)};
      for (int i = 0; i < N; ++i) {
        if (cur[i] == 0)
          out.eta_hat.cemetery += 1.0 / N;
        else
          out.eta_hat.w[cur[i] - 1] += 1.0 / N;
      }
    }
    survivors.clear();
    for (int i = 0; i < N; ++i)
      if (cur[i] != 0) survivors.push_back(i);
    z *= static_cast<double>(survivors.size()) / N;
    if (survivors.empty()) {
      out.extinction_step = p;
      break;
    }
    if (p == n) break; // outputs are pre-killing; no replacement needed
    // replace each dead particle by a uniform copy among survivors
    const double ns = static_cast<double>(survivors.size());
    for (int i = 0; i < N; ++i) {
      if (cur[i] != 0) continue;
      int j = survivors[static_cast<int>(rng.uniform() * ns)];
      cur[i] = cur[j];
      if (keep_paths) lines[i] = lines[j];
    }
  }

  out.z = (out.extinction_step >= 0) ? 0.0 : z;
  if (out.extinction_step >= 0 && out.extinction_step < n) {
    out.eta_hat = Measure::dirac_cemetery(m.d);
  }
  // post-killing law: Ψ_{1_S}(η̂_n), or δ_c when nothing survived
  if (out.eta_hat.mass_s() > 0.0) {
    out.eta = out.eta_hat;
    out.eta.cemetery = 0.0;
    out.eta = out.eta.normalized();
  } else {
    out.eta = Measure::dirac_cemetery(m.d);
  }
  if (keep_paths) {
    out.has_paths = true;
    out.paths = std::move(lines);
    out.path_weights.assign(N, 0.0);
    int alive = 0;
    for (int i = 0; i < N; ++i)
      if (cur[i] != 0) ++alive;
    if (alive > 0)
      for (int i = 0; i < N; ++i)
        if (cur[i] != 0) out.path_weights[i] = 1.0 / alive;
  }
  return out;
}

std::vector<ReplicateRow> run_replicates(const Model& m, const std::string& tag, int n, int N,
                                         int R, std::uint64_t master_seed, const Vec& f,
                                         const PathFunctional& f_path, int jobs) {
  if (R < 1) throw std::invalid_argument("run_replicates: R must be >= 1");
  const bool keep_paths = static_cast<bool>(f_path);
  std::vector<ReplicateRow> rows(R);

  auto one = [&](int r) {
    RngStream rng(master_seed, static_cast<std::uint64_t>(r));
    EstimatorOutput o;
    if (tag == "dp")
      o = sample_doob_is(m, n, N, rng, keep_paths);
    else if (tag == "is")
      o = sample_reflected_is(m, n, N, rng, keep_paths);
    else if (tag == "soft")
      o = sample_soft_smc(m, n, N, rng, keep_paths);
    else if (tag == "hard")
      o = sample_hard_smc(m, n, N, rng, keep_paths);
    else
      throw std::invalid_argument("run_replicates: unknown sampler tag " + tag);
    ReplicateRow row;
    row.r = r;
    row.z = o.z;
    row.eta_f = (o.eta.d() == m.d) ? o.eta(f) : 0.0;
    if (keep_paths) {
      row.has_path_f = true;
      double acc = 0.0;
      for (std::size_t i = 0; i < o.paths.size(); ++i)
        if (o.path_weights[i] > 0.0) acc += o.path_weights[i] * f_path(o.paths[i]);
      row.path_f = acc;
    }
    rows[r] = row;
  };

  if (jobs <= 1 || R == 1) {
    for (int r = 0; r < R; ++r) one(r);
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        int r = next.fetch_add(1);
        if (r >= R) return;
        one(r);
      }
    };
    int nthreads = std::min(jobs, R);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

} // namespace qsw
