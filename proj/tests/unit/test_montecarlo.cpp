#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cogmux/analytics.hpp"
#include "cogmux/errors.hpp"
#include "cogmux/mmse_detector.hpp"
#include "cogmux/montecarlo.hpp"
#include "cogmux/power_control.hpp"
#include "cogmux/validation.hpp"

using namespace cogmux;
namespace an = cogmux::analytics;

namespace {

class WorkersEnv {
 public:
  explicit WorkersEnv(const char* n) {
    if (const char* old = std::getenv("COGMUX_WORKERS")) saved_ = old;
    ::setenv("COGMUX_WORKERS", n, 1);
  }
  ~WorkersEnv() {
    if (saved_.empty())
      ::unsetenv("COGMUX_WORKERS");
    else
      ::setenv("COGMUX_WORKERS", saved_.c_str(), 1);
  }

 private:
  std::string saved_;
};

mc::ExperimentSpec spec_for(const std::string& preset, mc::Metric m, std::vector<double> grid, long n,
                            std::uint64_t seed = 7) {
  mc::ExperimentSpec s;
  s.config = load_preset(preset);
  s.metric = m;
  s.grid = std::move(grid);
  s.n_trials = n;
  s.seed = seed;
  return s;
}

}  // namespace

TEST(WorkerCount, ReadsEnvironment) {
  {
    WorkersEnv w("3");
    EXPECT_EQ(mc::worker_count(), 3);
  }
  {
    WorkersEnv w("zero");
    EXPECT_GE(mc::worker_count(), 1);
  }
}

TEST(ExperimentSpec, Check) {
  auto s = spec_for("fig2", mc::Metric::roc, {1.0, 2.0}, 10);
  EXPECT_NO_THROW(s.check());
  s.n_trials = 0;
  EXPECT_THROW(s.check(), DomainError);
  s.n_trials = 10;
  s.grid = {};
  EXPECT_THROW(s.check(), DomainError);
  s.grid = {2.0, 1.0};
  EXPECT_THROW(s.check(), DomainError);
  s.grid = {1.0, 1.0};
  EXPECT_THROW(s.check(), DomainError);
}

TEST(Proportion, BinomialError) {
  const mc::McEstimate e = mc::proportion(25.0, 100, 3);
  EXPECT_EQ(e.value, 0.25);
  EXPECT_NEAR(e.std_err, std::sqrt(0.25 * 0.75 / 100), 1e-15);
  EXPECT_EQ(e.n_trials, 100);
  EXPECT_EQ(e.seed, 3u);
}

TEST(Determinism, IndependentOfWorkerCount) {
  const auto spec = spec_for("fig2", mc::Metric::roc, {20.0, 80.0, 120.0}, 5000);
  mc::RocResult a, b;
  {
    WorkersEnv w("1");
    a = mc::run_roc(spec);
  }
  {
    WorkersEnv w("7");
    b = mc::run_roc(spec);
  }
  for (std::size_t k = 0; k < spec.grid.size(); ++k) {
    EXPECT_EQ(a.pf[k].value, b.pf[k].value);
    EXPECT_EQ(a.pd[k].value, b.pd[k].value);
  }
  const auto s1 = mc::sample_sinr(load_preset("fig6"), 3000, 11);
  mc::SinrSamples s2;
  {
    WorkersEnv w("5");
    s2 = mc::sample_sinr(load_preset("fig6"), 3000, 11);
  }
  EXPECT_EQ(s1.exact, s2.exact);
  EXPECT_EQ(s1.approx, s2.approx);
}

TEST(Determinism, SeedChangesResult) {
  const auto a = mc::sample_sinr(load_preset("fig6"), 500, 1);
  const auto b = mc::sample_sinr(load_preset("fig6"), 500, 2);
  EXPECT_NE(a.exact, b.exact);
}

TEST(SinrCdf, EdgesAndBounds) {
  const SystemConfig cfg = load_preset("fig6");
  const auto s = mc::sample_sinr(cfg, 2000, 5);
  ASSERT_EQ(s.exact.size(), 2000u);
  EXPECT_GT(s.kappa, 0.0);
  for (double v : s.approx) ASSERT_LT(v, s.kappa);
  auto spec = spec_for("fig6", mc::Metric::sinr_cdf, {-1.0, 0.5 * s.kappa, 10 * s.kappa}, 2000);
  const mc::McCurve c = mc::run_sinr_cdf(spec);
  EXPECT_EQ(c.y.front().value, 0.0);
  EXPECT_EQ(c.y.back().value, 1.0);
  EXPECT_NEAR(c.y[1].std_err, std::sqrt(std::log(2 / 0.05) / (2 * 2000.0)) / 1.96, 1e-15);
  EXPECT_EQ(c.metric, "sinr_cdf");
}

TEST(SupDistance, HandCase) {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  EXPECT_NEAR(mc::sup_distance(x, [](double v) { return v / 4.0; }), 0.25, 1e-15);
  EXPECT_NEAR(mc::sup_distance(x, [](double v) { return v < 2.5 ? 0.5 : 1.0; }), 0.5, 1e-15);
}

TEST(Roc, ZeroThresholdAlwaysDetects) {
  const mc::RocResult r = mc::run_roc(spec_for("fig2", mc::Metric::roc, {0.0, 1e9}, 1000));
  EXPECT_EQ(r.pf[0].value, 1.0);
  EXPECT_EQ(r.pd[0].value, 1.0);
  EXPECT_EQ(r.pf[1].value, 0.0);
  EXPECT_EQ(r.pd[1].value, 0.0);
}

TEST(FalseAlarm, MatchesClosedForm) {
  const SystemConfig cfg = load_preset("fig3");
  const an::EdParams ed = an::EdParams::from(cfg);
  std::vector<double> lam;
  for (double tau : {0.05, 0.2, 0.6}) lam.push_back(an::threshold_for_target_pf(tau, ed.N, ed.L, ed.noise_var));
  std::sort(lam.begin(), lam.end());
  const auto est = mc::run_false_alarm(cfg, lam, 100000, 13);
  for (std::size_t k = 0; k < lam.size(); ++k)
    EXPECT_LE(se_gap(est[k], an::pf(lam[k], ed.N, ed.L, ed.noise_var)), 4.0);
}

TEST(Detection, MatchesClosedForm) {
  const SystemConfig cfg = load_preset("fig5");
  const an::EdParams ed = an::EdParams::from(cfg);
  const double lam = an::threshold_for_target_pf(0.3, ed.N, ed.L, ed.noise_var);
  const auto betas = compute_budgets(cfg).primary_betas();
  SystemConfig low = with_snr_db(cfg, -10);
  const an::EdParams ed_low = an::EdParams::from(low);
  const double lam_low = an::threshold_for_target_pf(0.1, ed_low.N, ed_low.L, ed_low.noise_var);
  const double ref = an::pd_unconditional(ed_low, compute_budgets(low).primary_betas(), lam_low);
  const mc::McEstimate e = mc::run_detection(low, lam_low, 100000, 17, SensingModel::weakest);
  EXPECT_LE(se_gap(e, ref), 4.0) << e.value << " vs " << ref;
  EXPECT_GE(an::pd_unconditional(ed, betas, lam), 0.3);
}

TEST(Auc, NoSignalIsOneHalf) {
  auto spec = spec_for("fig4", mc::Metric::auc, {0.0}, 40000);
  spec.config.primary_signal_var = 0.0;
  const mc::McEstimate e = mc::run_auc(spec);
  EXPECT_LE(std::abs(e.value - 0.5), 4.0 * e.std_err);
}

TEST(Interference, ExponentialSumMatchesClosedForm) {
  const std::vector<double> s{0.02, 0.05};
  const mc::McEstimate e = mc::run_exponential_sum(s, 0.1, 200000, 19);
  EXPECT_LE(se_gap(e, interference_exceed_prob(s, 0.1)), 4.0);
}

TEST(Interference, QmaxMatchesQuadrature) {
  const std::vector<double> b{0.5, 1.0, 2.0};
  const mc::McEstimate e = mc::run_qmax(b, 2, 200000, 23);
  EXPECT_LE(std::abs(e.value - q_max_expectation(b, 2)), 4.0 * e.std_err);
}

TEST(Outage, RunsAndStaysBounded) {
  const SystemConfig cfg = load_preset("fig7");
  const double kappa = sinr_bound(compute_budgets(cfg).links[0]);
  auto spec = spec_for("fig7", mc::Metric::outage, {0.3 * kappa, 0.7 * kappa, 2 * kappa}, 20000);
  const mc::McCurve c = mc::run_outage(spec);
  ASSERT_EQ(c.y.size(), 3u);
  EXPECT_LE(c.y[0].value, c.y[1].value);
  EXPECT_LE(c.y[1].value, c.y[2].value);
  EXPECT_LE(se_gap(c.y[1], an::outage_probability(cfg, compute_budgets(cfg), 0.7 * kappa)), 4.0);
}
