#pragma once

#include "qsw/model.hpp"
#include "qsw/rng.hpp"

#include <functional>
#include <string>

namespace qsw {

// Output of one Monte Carlo run.  Paths use states 1..d with 0 standing for
// the cemetery; path weights are normalized to sum to 1 when present.
struct EstimatorOutput {
  std::string tag; // dp | is | soft | hard
  int n = 0, N = 0;
  double z = 0.0;       // normalizing-constant estimate
  Measure eta;          // terminal-law estimate (δ_c after hard extinction)
  Measure eta_hat;      // hard sampler only: pre-killing empirical at step n
  int extinction_step = -1;
  bool has_paths = false;
  std::vector<std::vector<int>> paths;
  Vec path_weights;
};

// Doob-twisted importance sampler: N chains with initial law Ψ_{φ0}(η0) and
// kernel M_φ; Z = E_0^n η_0(φ0) · mean(1/φ0(terminal)).
EstimatorOutput sample_doob_is(const Model& m, int n, int N, RngStream& rng,
                               bool keep_paths = false);

// Reflected-walk importance sampler: N M-chains from η0 weighted by
// Π_{p<n} g(Y_p); Z = mean weight.
EstimatorOutput sample_reflected_is(const Model& m, int n, int N, RngStream& rng,
                                    bool keep_paths = false);

// Soft-obstacle particle sampler: per step each particle survives w.p. g;
// each killed one is replaced by an independent draw proportional to g over
// the full pre-killing ensemble; then all mutate by M.
// Z = Π pre-selection empirical means of g.
EstimatorOutput sample_soft_smc(const Model& m, int n, int N, RngStream& rng,
                                bool keep_paths = false);

// Hard-obstacle particle sampler: particles move by K (possibly exiting to
// the cemetery); each dead particle is replaced by a uniform copy among the
// survivors; Z = Π surviving fractions.  After total extinction all outputs
// are δ_c and Z stays 0.
EstimatorOutput sample_hard_smc(const Model& m, int n, int N, RngStream& rng,
                                bool keep_paths = false);

struct ReplicateRow {
  int r = 0;
  double z = 0.0;
  double eta_f = 0.0;
  double path_f = 0.0;
  bool has_path_f = false;
};

using PathFunctional = std::function<double(const std::vector<int>&)>;

// Replicate r uses stream (master_seed, r); rows ordered by r and
// schedule-independent under jobs > 1.
std::vector<ReplicateRow> run_replicates(const Model& m, const std::string& tag, int n, int N,
                                         int R, std::uint64_t master_seed, const Vec& f,
                                         const PathFunctional& f_path = nullptr, int jobs = 1);

} // namespace qsw
