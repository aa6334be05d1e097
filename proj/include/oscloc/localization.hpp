#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oscloc/params.hpp"
#include "oscloc/reduction.hpp"
#include "oscloc/trajectory.hpp"

namespace oscloc {

/// Inclusive range of DFT bins.
struct BinRange {
  Index first = 1;
  Index last = 0;

  Index size() const { return last >= first ? last - first + 1 : 0; }
};

/// Every bin k with 0 < k < n/2.
BinRange full_bin_range(Index n);

/// Bins whose frequency k / (n dt) lies in [fmin, fmax], clipped to the full range.
BinRange band_bins(Index n, double dt, double fmin, double fmax);

/// Column-wise DFT with the positive-exponent convention
///   out(k, c) = n^{-1/2} sum_i exp(+2 pi j k i / n) series(i, c),   k = 0..n/2.
ComplexMatrix half_spectrum(const Matrix& series);

/// DFTs of the aligned state and finite-difference series of one trajectory.
///
/// X and Delta share the index range i = 0..N-2 (the last sample only enters
/// through Delta_{N-2}), so the analysis length is n = N - 1 and bin k sits at
/// frequency k / (n dt).
struct SpectralCache {
  Index n = 0;
  double dt = 0.0;
  double t0 = 0.0;
  BusIds gen_ids;
  BinRange bins;
  ComplexMatrix x_tilde;  // one row per bin, 2|G| columns
  ComplexMatrix d_tilde;
  Matrix sxx;  // sum_i X_i X_i^T
  Matrix sdx;  // sum_i Delta_i X_i^T
  Matrix sdd;  // sum_i Delta_i Delta_i^T
  std::string alignment = "drop_last";

  Index num_generators() const { return static_cast<Index>(gen_ids.size()); }
  double frequency(Index k) const { return static_cast<double>(k) / (static_cast<double>(n) * dt); }
  bool contains(Index k) const { return k >= bins.first && k <= bins.last; }
  Index row(Index k) const;

  Matrix e(Index k) const;  // Re[Delta~ X~^H]
  Matrix g(Index k) const;  // Re[X~ X~^H]
  Matrix h(Index k) const;  // Re[Delta~ Delta~^H]
};

SpectralCache spectral_stats(const Trajectory& traj, std::optional<BinRange> bins = std::nullopt);

struct Hypothesis {
  BusId source = 0;
  Index bin = 0;
};

struct HypothesisFit {
  double loglik = 0.0;     // per-sample normalized, maximized over gamma and phi
  double gamma_hat = 0.0;  // >= 0
  double phi_hat = 0.0;    // cycles in [0, 1), referenced to absolute time
  double score = 0.0;      // loglik * sigma^2 (independent of sigma)
};

/// Forced-oscillation likelihood with the amplitude and phase eliminated in
/// closed form.
///
/// With residual r_i = Delta_omega,i + M^-1 L^r theta_i + M^-1 D omega_i and
/// forcing direction w_l = M^-1 Gamma_l, the model r_i = s gamma w_l cos(2 pi (k i / n + phi))
/// + noise gives
///
///   L(gamma, phi) = -(1/n) sum_i v_i^T Sigma^-1 v_i,
///   z = w_l^T Sigma^-1 r~(k),   q = w_l^T Sigma^-1 w_l,
///   gamma_hat = 2 |z| / (sqrt(n) q),   phi_hat = -arg(z) / 2 pi  (+ 1/2 for loads),
///   max L = L(0, .) + gamma_hat^2 q / 2.
class LikelihoodModel {
 public:
  LikelihoodModel(const SpectralCache& cache, const ReducedModel& model, const DynParams& params);

  HypothesisFit evaluate(const Hypothesis& hyp) const;
  /// Column index into the model's bus order; `k` must lie in the cache's bins.
  HypothesisFit evaluate_column(Index column, Index k) const;

  /// Log-likelihood with no forcing.
  double baseline() const { return baseline_score_ / sigma2_; }

  /// r~(k), the DFT of the frequency-block residual.
  ComplexVector residual_spectrum(Index k) const;

  const SpectralCache& cache() const { return *cache_; }
  const ReducedModel& model() const { return *model_; }

 private:
  const SpectralCache* cache_;
  const ReducedModel* model_;
  double sigma2_;
  double baseline_score_;
  Matrix drift_;       // [M^-1 L^r, M^-1 D]
  Matrix projector_;   // sigma_shape^-1 M^-1 Gamma, |G| x |buses|
  Vector quad_;        // w_l^T sigma_shape^-1 w_l per bus
  ComplexMatrix residuals_;  // one row per cached bin
};

HypothesisFit likelihood_at(const SpectralCache& cache, const ReducedModel& model,
                            const DynParams& params, const Hypothesis& hyp);

struct ScanEntry {
  BusId source = 0;
  Index bin = 0;
  double frequency = 0.0;
  double loglik = 0.0;
  double gamma_hat = 0.0;
  double phi_hat = 0.0;
  double score = 0.0;
};

struct ScanResult {
  std::vector<ScanEntry> entries;    // ordered by (source, bin)
  std::vector<std::size_t> ranking;  // indices into entries, best first
  BusIds winner_group;
  double sigma = 0.0;

  bool empty() const { return entries.empty(); }
  const ScanEntry& top() const;
  /// Best entry that is not the winner's bin at a source degenerate with the winner.
  const ScanEntry* runner_up() const;
  double runner_up_gap() const;
  /// Highest-ranked entry for a given source, if scanned.
  const ScanEntry* best_for(BusId source) const;
};

struct ScanOptions {
  BusIds candidates;               // empty: every bus
  std::optional<BinRange> bins;    // default: all cached bins
  unsigned threads = 0;            // 0: hardware concurrency
  double degeneracy_tol = 1e-10;
};

/// Evaluates every (candidate, bin) hypothesis. Output is identical for any
/// thread count.
ScanResult scan(const SpectralCache& cache, const ReducedModel& model, const DynParams& params,
                const ScanOptions& options = {});

}  // namespace oscloc
