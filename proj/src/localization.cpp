#include "oscloc/localization.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <thread>

#include "oscloc/error.hpp"

namespace oscloc {

namespace {

using cd = std::complex<double>;

// FFTW's planner is not thread-safe.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

double wrap_cycles(double phi) {
  double w = phi - std::floor(phi);
  if (w >= 1.0) w = 0.0;
  return w;
}

}  // namespace

BinRange full_bin_range(Index n) {
  // 0 < k < n/2  <=>  1 <= k <= ceil(n/2) - 1.
  return BinRange{1, (n + 1) / 2 - 1};
}

BinRange band_bins(Index n, double dt, double fmin, double fmax) {
  if (!(fmin <= fmax)) throw ValidationError("band: fmin must not exceed fmax");
  const BinRange full = full_bin_range(n);
  const double span = static_cast<double>(n) * dt;
  const auto lo = static_cast<Index>(std::ceil(fmin * span - 1e-9));
  const auto hi = static_cast<Index>(std::floor(fmax * span + 1e-9));
  BinRange r{std::max(full.first, lo), std::min(full.last, hi)};
  if (r.size() == 0) throw ValidationError("band contains no frequency bin");
  return r;
}

ComplexMatrix half_spectrum(const Matrix& series) {
  const Index n = series.rows();
  const Index cols = series.cols();
  const Index half = n / 2 + 1;
  ComplexMatrix out(half, cols);
  if (n == 0 || cols == 0) return out;

  // Eigen is column-major: each column is a contiguous real series.
  Matrix in = series;
  std::vector<fftw_complex> buf(static_cast<std::size_t>(half * cols));
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    const int len = static_cast<int>(n);
    plan = fftw_plan_many_dft_r2c(1, &len, static_cast<int>(cols), in.data(), nullptr, 1,
                                  static_cast<int>(n), buf.data(), nullptr, 1,
                                  static_cast<int>(half), FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw NumericalError("FFTW planning failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  // FFTW uses exp(-2 pi j k i / n); the positive convention is its conjugate
  // for real input.
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (Index c = 0; c < cols; ++c) {
    for (Index k = 0; k < half; ++k) {
      const auto& v = buf[static_cast<std::size_t>(c * half + k)];
      out(k, c) = cd(v[0], -v[1]) * norm;
    }
  }
  return out;
}

Index SpectralCache::row(Index k) const {
  if (!contains(k)) throw ValidationError("bin " + std::to_string(k) + " is not in the cache");
  return k - bins.first;
}

Matrix SpectralCache::e(Index k) const {
  const Index r = row(k);
  return (d_tilde.row(r).transpose() * x_tilde.row(r).conjugate()).real();
}

Matrix SpectralCache::g(Index k) const {
  const Index r = row(k);
  return (x_tilde.row(r).transpose() * x_tilde.row(r).conjugate()).real();
}

Matrix SpectralCache::h(Index k) const {
  const Index r = row(k);
  return (d_tilde.row(r).transpose() * d_tilde.row(r).conjugate()).real();
}

SpectralCache spectral_stats(const Trajectory& traj, std::optional<BinRange> bins) {
  traj.validate();
  const Index ng = traj.num_generators();
  const Matrix x = traj.states();
  const Index n = traj.n_samples() - 1;
  const BinRange full = full_bin_range(n);
  const BinRange range = bins.value_or(full);
  if (range.size() == 0) throw ValidationError("empty bin range");
  if (range.first < full.first || range.last > full.last) {
    throw ValidationError("bins must lie strictly between 0 and n/2 (n = " + std::to_string(n) + ")");
  }

  SpectralCache c;
  c.n = n;
  c.dt = traj.dt;
  c.t0 = traj.t0;
  c.gen_ids = traj.gen_ids;
  c.bins = range;

  Matrix series(n, 4 * ng);
  series.leftCols(2 * ng) = x.topRows(n);
  series.rightCols(2 * ng) = (x.bottomRows(n) - x.topRows(n)) / traj.dt;
  if (!series.allFinite()) throw ValidationError("trajectory contains non-finite values");

  const auto head = series.leftCols(2 * ng);
  const auto delta = series.rightCols(2 * ng);
  c.sxx = head.transpose() * head;
  c.sdx = delta.transpose() * head;
  c.sdd = delta.transpose() * delta;

  const ComplexMatrix spec = half_spectrum(series);
  c.x_tilde = spec.block(range.first, 0, range.size(), 2 * ng);
  c.d_tilde = spec.block(range.first, 2 * ng, range.size(), 2 * ng);
  return c;
}

LikelihoodModel::LikelihoodModel(const SpectralCache& cache, const ReducedModel& model,
                                 const DynParams& params)
    : cache_(&cache), model_(&model) {
  params.validate();
  const Index ng = model.num_generators();
  if (params.size() != ng || cache.num_generators() != ng) {
    throw ValidationError("cache, model and params disagree on the number of generators");
  }
  if (cache.gen_ids != model.gen_ids) {
    throw ValidationError("trajectory generator ids do not match the case");
  }
  if (!(params.sigma > 0.0)) throw ValidationError("sigma must be positive for localization");
  sigma2_ = params.sigma * params.sigma;

  const Vector inv_m = params.inertia.cwiseInverse();
  drift_.resize(ng, 2 * ng);
  drift_.leftCols(ng) = inv_m.asDiagonal() * model.l_reduced;
  drift_.rightCols(ng) = (inv_m.cwiseProduct(params.damping)).asDiagonal();

  Eigen::LLT<Matrix> shape(model.sigma_shape);
  if (shape.info() != Eigen::Success) {
    throw NumericalError("effective noise covariance is not positive definite");
  }
  const Matrix directions = inv_m.asDiagonal() * model.gamma;
  projector_ = shape.solve(directions);
  quad_ = (directions.cwiseProduct(projector_)).colwise().sum().transpose();

  residuals_ = cache.d_tilde.rightCols(ng) +
               cache.x_tilde * drift_.transpose().cast<std::complex<double>>();

  // sum_i r_i r_i^T from the time-domain sums.
  const Matrix sdx2 = cache.sdx.bottomRows(ng);
  const Matrix r2 = cache.sdd.bottomRightCorner(ng, ng) + sdx2 * drift_.transpose() +
                    drift_ * sdx2.transpose() + drift_ * cache.sxx * drift_.transpose();
  baseline_score_ = -shape.solve(r2).trace() / static_cast<double>(cache.n);
}

ComplexVector LikelihoodModel::residual_spectrum(Index k) const {
  return residuals_.row(cache_->row(k)).transpose();
}

HypothesisFit LikelihoodModel::evaluate_column(Index column, Index k) const {
  const Index r = cache_->row(k);
  const Index ng = model_->num_generators();
  cd z(0.0, 0.0);
  for (Index g = 0; g < ng; ++g) z += projector_(g, column) * residuals_(r, g);

  const double n = static_cast<double>(cache_->n);
  const double q = quad_(column);
  HypothesisFit fit;
  double gain = 0.0;
  if (q > 0.0) {
    const double mag = std::abs(z);
    fit.gamma_hat = 2.0 * mag / (std::sqrt(n) * q);
    gain = 2.0 * mag * mag / (n * q);
  }
  fit.score = baseline_score_ + gain;
  fit.loglik = fit.score / sigma2_;

  const double sign_shift = column < ng ? 0.0 : 0.5;
  const double arg = (z == cd(0.0, 0.0)) ? 0.0 : std::arg(z);
  const double window_shift = static_cast<double>(k) / n * (cache_->t0 / cache_->dt);
  fit.phi_hat = wrap_cycles(-arg / (2.0 * std::numbers::pi) - sign_shift - window_shift);
  return fit;
}

HypothesisFit LikelihoodModel::evaluate(const Hypothesis& hyp) const {
  return evaluate_column(model_->column_of(hyp.source), hyp.bin);
}

HypothesisFit likelihood_at(const SpectralCache& cache, const ReducedModel& model,
                            const DynParams& params, const Hypothesis& hyp) {
  return LikelihoodModel(cache, model, params).evaluate(hyp);
}

const ScanEntry& ScanResult::top() const {
  if (entries.empty()) throw Error("empty scan");
  return entries[ranking.front()];
}

const ScanEntry* ScanResult::runner_up() const {
  if (entries.empty()) return nullptr;
  const ScanEntry& best = top();
  for (std::size_t i = 1; i < ranking.size(); ++i) {
    const ScanEntry& e = entries[ranking[i]];
    const bool degenerate_twin =
        e.bin == best.bin &&
        std::find(winner_group.begin(), winner_group.end(), e.source) != winner_group.end();
    if (!degenerate_twin) return &e;
  }
  return nullptr;
}

double ScanResult::runner_up_gap() const {
  const ScanEntry* second = runner_up();
  return second ? top().loglik - second->loglik : 0.0;
}

const ScanEntry* ScanResult::best_for(BusId source) const {
  for (std::size_t idx : ranking) {
    if (entries[idx].source == source) return &entries[idx];
  }
  return nullptr;
}

ScanResult scan(const SpectralCache& cache, const ReducedModel& model, const DynParams& params,
                const ScanOptions& options) {
  BusIds candidates = options.candidates.empty() ? model.bus_ids() : options.candidates;
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::vector<Index> columns;
  for (BusId id : candidates) columns.push_back(model.column_of(id));

  const BinRange bins = options.bins.value_or(cache.bins);
  if (bins.size() == 0) throw ValidationError("empty bin range");
  if (!cache.contains(bins.first) || !cache.contains(bins.last)) {
    throw ValidationError("scan bins exceed the cached bins");
  }

  const LikelihoodModel lik(cache, model, params);
  const std::size_t nb = static_cast<std::size_t>(bins.size());
  ScanResult out;
  out.sigma = params.sigma;
  out.entries.resize(candidates.size() * nb);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const Index k = bins.first + static_cast<Index>(r);
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        const HypothesisFit fit = lik.evaluate_column(columns[c], k);
        out.entries[c * nb + r] = ScanEntry{candidates[c], k, cache.frequency(k), fit.loglik,
                                            fit.gamma_hat, fit.phi_hat, fit.score};
      }
    }
  };

  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(nb)));
  if (threads == 1) {
    work(0, nb);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (nb + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(nb, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  out.ranking.resize(out.entries.size());
  for (std::size_t i = 0; i < out.ranking.size(); ++i) out.ranking[i] = i;
  // Entries are already in (source, bin) order, so a stable sort breaks ties by it.
  std::stable_sort(out.ranking.begin(), out.ranking.end(), [&](std::size_t a, std::size_t b) {
    return out.entries[a].score > out.entries[b].score;
  });

  const BusId winner = out.top().source;
  for (const BusIds& group : degeneracy_groups(model, options.degeneracy_tol)) {
    if (std::find(group.begin(), group.end(), winner) == group.end()) continue;
    for (BusId id : group) {
      if (std::binary_search(candidates.begin(), candidates.end(), id)) {
        out.winner_group.push_back(id);
      }
    }
  }
  return out;
}

}  // namespace oscloc
