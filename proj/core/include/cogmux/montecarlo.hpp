#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "cogmux/analytics.hpp"
#include "cogmux/config.hpp"
#include "cogmux/rng.hpp"

namespace cogmux::mc {

struct McEstimate {
  double value = 0.0;
  double std_err = 0.0;
  long n_trials = 0;
  std::uint64_t seed = 0;
};

enum class Metric { sinr_cdf, roc, auc, detection_vs_snr, outage, interference };

struct ExperimentSpec {
  SystemConfig config;
  Metric metric = Metric::sinr_cdf;
  std::vector<double> grid;
  long n_trials = 0;
  std::uint64_t seed = 0;

  /// Throws DomainError unless the grid is non-empty and strictly increasing and n_trials >= 1.
  void check() const;
};

struct McCurve {
  std::vector<double> x;
  std::vector<McEstimate> y;
  std::string metric;
  std::string config_digest;
};

/// Worker threads: COGMUX_WORKERS if set (>= 1), else hardware concurrency.
int worker_count();

/// Splits n_trials into a fixed number of chunks (independent of the worker
/// count). Chunk c draws from RngStream(seed, c) and accumulates into its own
/// Acc; accumulators are merged in chunk order, so results are bit-identical
/// for any number of workers.
template <class Acc, class Fn>
Acc run_chunked(long n_trials, std::uint64_t seed, const Acc& init, Fn&& fn) {
  const long n_chunks = std::max(1L, std::min(n_trials, 64L));
  std::vector<Acc> parts(static_cast<std::size_t>(n_chunks), init);
  std::atomic<long> next{0};
  auto work = [&] {
    for (long c; (c = next.fetch_add(1)) < n_chunks;) {
      const long count = n_trials / n_chunks + (c < n_trials % n_chunks ? 1 : 0);
      RngStream rng(seed, static_cast<std::uint64_t>(c));
      fn(rng, count, parts[static_cast<std::size_t>(c)]);
    }
  };
  const int workers = static_cast<int>(std::min<long>(worker_count(), n_chunks));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  Acc out = init;
  for (const Acc& p : parts) out.merge(p);
  return out;
}

/// Proportion estimate with binomial standard error.
McEstimate proportion(double hits, long n, std::uint64_t seed);

// ---- experiments -----------------------------------------------------------

struct SinrSamples {
  std::vector<double> exact;   // sorted
  std::vector<double> approx;  // sorted
  double kappa = 0.0;
};

/// All M transmitters active; stream cfg.stream_index. Samples of the exact
/// (first-line) SINR and the closed-form approximation per draw.
SinrSamples sample_sinr(const SystemConfig& cfg, long n_trials, std::uint64_t seed);

/// Empirical CDF of the exact SINR on the grid (absolute SINR values), with
/// std_err = DKW half-width at 95% / 1.96.
McCurve run_sinr_cdf(const ExperimentSpec& spec);
McCurve empirical_cdf(const std::vector<double>& sorted, const std::vector<double>& grid, std::uint64_t seed);

/// Kolmogorov distance between the empirical law of `sorted` and the CDF F.
template <class F>
double sup_distance(const std::vector<double>& sorted, F&& cdf) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const double f = cdf(sorted[k]);
    d = std::max({d, std::abs(f - (k + 1) / n), std::abs(f - k / n)});
  }
  return d;
}

struct RocResult {
  std::vector<double> lambda;
  std::vector<McEstimate> pf;
  std::vector<McEstimate> pd;
};

/// H0 and H1 windows (all m_p primaries active, cfg.sensing_model); the grid holds lambda values.
RocResult run_roc(const ExperimentSpec& spec);
RocResult run_roc(const ExperimentSpec& spec, SensingModel model);

/// Empirical Pr[T > lambda | H0] for each lambda.
std::vector<McEstimate> run_false_alarm(const SystemConfig& cfg, const std::vector<double>& lambdas, long n_trials,
                                        std::uint64_t seed);

/// Empirical Pr[T > lambda | H1] with every primary active.
McEstimate run_detection(const SystemConfig& cfg, double lambda, long n_trials, std::uint64_t seed);
McEstimate run_detection(const SystemConfig& cfg, double lambda, long n_trials, std::uint64_t seed,
                         SensingModel model);

/// Pd at lambda*(tau) for each SNR (dB) of the grid.
McCurve run_detection_vs_snr(const ExperimentSpec& spec);

/// Mann-Whitney AUC over n_trials independent (H1, H0) window pairs; ties count 1/2.
McEstimate run_auc(const ExperimentSpec& spec);

enum class OutageSinr { approx, exact };

/// End-to-end frames: activity, sensing (weakest-signal H1 window), transmission
/// when sensing says idle. Grid holds absolute SINR thresholds.
McCurve run_outage(const ExperimentSpec& spec, OutageSinr sinr = OutageSinr::approx);

/// Grid holds w_th in watts; powers follow plan_powers(cfg, w_th). Primary j (0-based).
McCurve run_interference(const ExperimentSpec& spec, int primary = 0);

/// Pr[sum of exponentials with the given means > w_th].
McEstimate run_exponential_sum(const std::vector<double>& scales, double w_th, long n_trials, std::uint64_t seed);

/// E[max_i b_i G_i], G_i ~ Gamma(N, 1).
McEstimate run_qmax(const std::vector<double>& b, int N, long n_trials, std::uint64_t seed);

}  // namespace cogmux::mc
