#include "cogmux/montecarlo.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "cogmux/channel_model.hpp"
#include "cogmux/errors.hpp"
#include "cogmux/mmse_detector.hpp"
#include "cogmux/power_control.hpp"
#include "cogmux/sensing.hpp"

namespace cogmux::mc {

void ExperimentSpec::check() const {
  if (n_trials < 1) throw DomainError("experiment: n_trials must be >= 1");
  if (grid.empty()) throw DomainError("experiment: grid must not be empty");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1])) throw DomainError("experiment: grid must be strictly increasing");
}

int worker_count() {
  if (const char* env = std::getenv("COGMUX_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min(v, 1024L));
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

McEstimate proportion(double hits, long n, std::uint64_t seed) {
  const double p = hits / static_cast<double>(n);
  return {p, std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n)), n, seed};
}

namespace {

struct Hits {
  std::vector<double> hits;
  long n = 0;
  void merge(const Hits& o) {
    if (hits.size() < o.hits.size()) hits.resize(o.hits.size(), 0.0);
    for (std::size_t k = 0; k < o.hits.size(); ++k) hits[k] += o.hits[k];
    n += o.n;
  }
};

struct Samples {
  std::vector<double> a, b;
  void merge(const Samples& o) {
    a.insert(a.end(), o.a.begin(), o.a.end());
    b.insert(b.end(), o.b.begin(), o.b.end());
  }
};

struct Moments {
  long double sum = 0.0L, sum2 = 0.0L;
  long n = 0;
  void merge(const Moments& o) {
    sum += o.sum;
    sum2 += o.sum2;
    n += o.n;
  }
  McEstimate estimate(std::uint64_t seed) const {
    const long double m = sum / n;
    const long double var = n > 1 ? (sum2 - n * m * m) / (n - 1) : 0.0L;
    return {static_cast<double>(m), std::sqrt(std::max(0.0, static_cast<double>(var / n))), n, seed};
  }
};

// 2 sum ||w||^2 for an H0 window with w ~ CN(0, N0-hat).
double h0_statistic(int N, int L, double n0, RngStream& rng) {
  double s = 0.0;
  for (int k = 0; k < 2 * N * L; ++k) {
    const double v = rng.normal();
    s += v * v;
  }
  return n0 * s;
}

double h1_statistic(const SystemConfig& cfg, const SystemBudgets& b, std::span<const int> active, RngStream& rng,
                    SensingModel model) {
  return detector_statistic(residual_signal(cfg, b, active, rng, model).r);
}

std::vector<int> all_primaries(const SystemConfig& cfg) {
  std::vector<int> v(cfg.n_primary());
  for (int k = 0; k < cfg.n_primary(); ++k) v[k] = k;
  return v;
}

// closed-form SINR of stream i for links with unit-variance normalized channel C
double sinr_approx_draw(const Eigen::MatrixXcd& C, std::span<const LinkBudget> links, double N0, int i) {
  const Eigen::Index N = C.rows();
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(N, N) * N0;
  for (Eigen::Index j = 0; j < C.cols(); ++j) A.noalias() += links[j].beta * C.col(j) * C.col(j).adjoint();
  Eigen::LLT<Eigen::MatrixXcd> llt(A);
  if (llt.info() != Eigen::Success) throw NumericalError("sinr draw: covariance not positive definite");
  const double q = C.col(i).dot(llt.solve(C.col(i))).real();
  return links[i].g_var * links[i].g_var / links[i].beta * q;
}

}  // namespace

SinrSamples sample_sinr(const SystemConfig& cfg, long n_trials, std::uint64_t seed) {
  if (n_trials < 1) throw DomainError("sample_sinr: n_trials must be >= 1");
  const SystemBudgets bud = compute_budgets(cfg);
  const int N = cfg.n_rx_antennas;
  const int i = cfg.stream_index - 1;
  const int M = cfg.n_total();
  Samples s = run_chunked(n_trials, seed, Samples{}, [&](RngStream& rng, long count, Samples& acc) {
    Eigen::MatrixXcd C(N, M);
    for (long t = 0; t < count; ++t) {
      fill_complex_normal(C, 1.0, rng);
      const StreamSinr v = stream_sinr(C, bud.links, cfg.noise_var, i);
      acc.a.push_back(v.exact);
      acc.b.push_back(v.approx);
    }
  });
  std::sort(s.a.begin(), s.a.end());
  std::sort(s.b.begin(), s.b.end());
  return {std::move(s.a), std::move(s.b), sinr_bound(bud.links[i])};
}

McCurve empirical_cdf(const std::vector<double>& sorted, const std::vector<double>& grid, std::uint64_t seed) {
  McCurve c;
  const long n = static_cast<long>(sorted.size());
  // DKW: P[sup |F_n - F| > eps] <= 2 exp(-2 n eps^2); 95% half-width
  const double eps95 = std::sqrt(std::log(2.0 / 0.05) / (2.0 * n));
  for (double x : grid) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
    c.x.push_back(x);
    c.y.push_back({static_cast<double>(it - sorted.begin()) / n, eps95 / 1.96, n, seed});
  }
  return c;
}

McCurve run_sinr_cdf(const ExperimentSpec& spec) {
  spec.check();
  const SinrSamples s = sample_sinr(spec.config, spec.n_trials, spec.seed);
  McCurve c = empirical_cdf(s.exact, spec.grid, spec.seed);
  c.metric = "sinr_cdf";
  c.config_digest = config_digest(spec.config);
  return c;
}

std::vector<McEstimate> run_false_alarm(const SystemConfig& cfg, const std::vector<double>& lambdas, long n_trials,
                                        std::uint64_t seed) {
  if (n_trials < 1) throw DomainError("run_false_alarm: n_trials must be >= 1");
  const int N = cfg.n_rx_antennas, L = cfg.samples;
  const double n0 = cfg.sensing_noise_var();
  Hits init;
  init.hits.assign(lambdas.size(), 0.0);
  const Hits h = run_chunked(n_trials, seed, init, [&](RngStream& rng, long count, Hits& acc) {
    for (long t = 0; t < count; ++t) {
      const double T = h0_statistic(N, L, n0, rng);
      for (std::size_t k = 0; k < lambdas.size(); ++k)
        if (ed_decide(T, lambdas[k]) == Hypothesis::H1) acc.hits[k] += 1.0;
    }
    acc.n += count;
  });
  std::vector<McEstimate> out;
  for (double v : h.hits) out.push_back(proportion(v, n_trials, seed));
  return out;
}

McEstimate run_detection(const SystemConfig& cfg, double lambda, long n_trials, std::uint64_t seed) {
  return run_detection(cfg, lambda, n_trials, seed, cfg.sensing_model);
}

McEstimate run_detection(const SystemConfig& cfg, double lambda, long n_trials, std::uint64_t seed,
                         SensingModel model) {
  if (n_trials < 1) throw DomainError("run_detection: n_trials must be >= 1");
  const SystemBudgets bud = compute_budgets(cfg);
  const std::vector<int> active = all_primaries(cfg);
  Hits init;
  init.hits.assign(1, 0.0);
  const Hits h = run_chunked(n_trials, seed, init, [&](RngStream& rng, long count, Hits& acc) {
    for (long t = 0; t < count; ++t)
      if (ed_decide(h1_statistic(cfg, bud, active, rng, model), lambda) == Hypothesis::H1) acc.hits[0] += 1.0;
    acc.n += count;
  });
  return proportion(h.hits[0], n_trials, seed);
}

RocResult run_roc(const ExperimentSpec& spec) { return run_roc(spec, spec.config.sensing_model); }

RocResult run_roc(const ExperimentSpec& spec, SensingModel model) {
  spec.check();
  const SystemConfig& cfg = spec.config;
  const SystemBudgets bud = compute_budgets(cfg);
  const std::vector<int> active = all_primaries(cfg);
  const int N = cfg.n_rx_antennas, L = cfg.samples;
  const double n0 = cfg.sensing_noise_var();
  const std::size_t G = spec.grid.size();
  Hits init;
  init.hits.assign(2 * G, 0.0);
  const Hits h = run_chunked(spec.n_trials, spec.seed, init, [&](RngStream& rng, long count, Hits& acc) {
    for (long t = 0; t < count; ++t) {
      const double t0 = h0_statistic(N, L, n0, rng);
      const double t1 = h1_statistic(cfg, bud, active, rng, model);
      for (std::size_t k = 0; k < G; ++k) {
        if (ed_decide(t0, spec.grid[k]) == Hypothesis::H1) acc.hits[k] += 1.0;
        if (ed_decide(t1, spec.grid[k]) == Hypothesis::H1) acc.hits[G + k] += 1.0;
      }
    }
    acc.n += count;
  });
  RocResult r;
  r.lambda = spec.grid;
  for (std::size_t k = 0; k < G; ++k) {
    r.pf.push_back(proportion(h.hits[k], spec.n_trials, spec.seed));
    r.pd.push_back(proportion(h.hits[G + k], spec.n_trials, spec.seed));
  }
  return r;
}

McCurve run_detection_vs_snr(const ExperimentSpec& spec) {
  spec.check();
  McCurve c;
  c.metric = "detection_vs_snr";
  c.config_digest = config_digest(spec.config);
  for (std::size_t k = 0; k < spec.grid.size(); ++k) {
    const SystemConfig cfg = with_snr_db(spec.config, spec.grid[k]);
    const double lam = analytics::threshold_for_target_pf(cfg.pf_target, cfg.n_rx_antennas, cfg.samples,
                                                          cfg.sensing_noise_var());
    c.x.push_back(spec.grid[k]);
    c.y.push_back(run_detection(cfg, lam, spec.n_trials, derive_stream_seed(spec.seed, 1000 + k)));
    c.y.back().seed = spec.seed;
  }
  return c;
}

McEstimate run_auc(const ExperimentSpec& spec) {
  if (spec.n_trials < 1) throw DomainError("run_auc: n_trials must be >= 1");
  const SystemConfig& cfg = spec.config;
  const SystemBudgets bud = compute_budgets(cfg);
  const std::vector<int> active = all_primaries(cfg);
  const int N = cfg.n_rx_antennas, L = cfg.samples;
  const double n0 = cfg.sensing_noise_var();
  Hits init;
  init.hits.assign(1, 0.0);
  const Hits h = run_chunked(spec.n_trials, spec.seed, init, [&](RngStream& rng, long count, Hits& acc) {
    for (long t = 0; t < count; ++t) {
      const double t1 = h1_statistic(cfg, bud, active, rng, cfg.sensing_model);
      const double t0 = h0_statistic(N, L, n0, rng);
      acc.hits[0] += t1 > t0 ? 1.0 : (t1 == t0 ? 0.5 : 0.0);
    }
    acc.n += count;
  });
  return proportion(h.hits[0], spec.n_trials, spec.seed);
}

McCurve run_outage(const ExperimentSpec& spec, OutageSinr which) {
  spec.check();
  const SystemConfig& cfg = spec.config;
  const SystemBudgets bud = compute_budgets(cfg);
  const int N = cfg.n_rx_antennas, L = cfg.samples;
  const int mc = cfg.n_secondary(), mp = cfg.n_primary();
  const int i = cfg.stream_index - 1;
  const double n0s = cfg.sensing_noise_var();
  const double lambda = analytics::threshold_for_target_pf(cfg.pf_target, N, L, n0s);
  const std::size_t G = spec.grid.size();
  Hits init;
  init.hits.assign(G, 0.0);
  const Hits h = run_chunked(spec.n_trials, spec.seed, init, [&](RngStream& rng, long count, Hits& acc) {
    std::vector<int> active;
    std::vector<LinkBudget> links;
    for (long t = 0; t < count; ++t) {
      active.clear();
      for (int k = 0; k < mp; ++k)
        if (rng.bernoulli(cfg.activity_prob)) active.push_back(k);
      const double T = active.empty() ? h0_statistic(N, L, n0s, rng)
                                      : h1_statistic(cfg, bud, active, rng, SensingModel::weakest);
      if (ed_decide(T, lambda) == Hypothesis::H1) continue;  // no transmission in this frame
      links.assign(bud.links.begin(), bud.links.begin() + mc);
      for (int k : active) links.push_back(bud.links[mc + k]);
      Eigen::MatrixXcd C(N, static_cast<Eigen::Index>(links.size()));
      fill_complex_normal(C, 1.0, rng);
      const double s = which == OutageSinr::approx ? sinr_approx_draw(C, links, cfg.noise_var, i)
                                                   : stream_sinr(C, links, cfg.noise_var, i).exact;
      for (std::size_t k = 0; k < G; ++k)
        if (s < spec.grid[k]) acc.hits[k] += 1.0;
    }
    acc.n += count;
  });
  McCurve c;
  c.metric = "outage";
  c.config_digest = config_digest(cfg);
  for (std::size_t k = 0; k < G; ++k) {
    c.x.push_back(spec.grid[k]);
    c.y.push_back(proportion(h.hits[k], spec.n_trials, spec.seed));
  }
  return c;
}

McEstimate run_exponential_sum(const std::vector<double>& scales, double w_th, long n_trials, std::uint64_t seed) {
  if (n_trials < 1) throw DomainError("run_exponential_sum: n_trials must be >= 1");
  Hits init;
  init.hits.assign(1, 0.0);
  const Hits h = run_chunked(n_trials, seed, init, [&](RngStream& rng, long count, Hits& acc) {
    for (long t = 0; t < count; ++t) {
      double s = 0.0;
      for (double v : scales) s += rng.exponential(v);
      if (s > w_th) acc.hits[0] += 1.0;
    }
    acc.n += count;
  });
  return proportion(h.hits[0], n_trials, seed);
}

McCurve run_interference(const ExperimentSpec& spec, int primary) {
  spec.check();
  McCurve c;
  c.metric = "interference";
  c.config_digest = config_digest(spec.config);
  for (std::size_t k = 0; k < spec.grid.size(); ++k) {
    const PowerPlan plan = plan_powers(spec.config, spec.grid[k]);
    const std::vector<double> s = interference_scales(spec.config, plan, primary);
    c.x.push_back(spec.grid[k]);
    c.y.push_back(run_exponential_sum(s, spec.grid[k], spec.n_trials, derive_stream_seed(spec.seed, 2000 + k)));
    c.y.back().seed = spec.seed;
  }
  return c;
}

McEstimate run_qmax(const std::vector<double>& b, int N, long n_trials, std::uint64_t seed) {
  if (n_trials < 1) throw DomainError("run_qmax: n_trials must be >= 1");
  if (N < 1) throw DomainError("run_qmax: N must be >= 1");
  const Moments m = run_chunked(n_trials, seed, Moments{}, [&](RngStream& rng, long count, Moments& acc) {
    for (long t = 0; t < count; ++t) {
      double best = 0.0;
      for (double bi : b) {
        double g = 0.0;
        for (int k = 0; k < N; ++k) g += rng.exponential(1.0);
        best = std::max(best, bi * g);
      }
      acc.sum += best;
      acc.sum2 += static_cast<long double>(best) * best;
    }
    acc.n += count;
  });
  return m.estimate(seed);
}

}  // namespace cogmux::mc
