#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include "cogmux/analytics.hpp"
#include "cogmux/errors.hpp"
#include "cogmux/montecarlo.hpp"
#include "cogmux/sensing.hpp"
#include "cogmux/validation.hpp"

using namespace cogmux;

TEST(EnergyStatistic, Examples) {
  EXPECT_EQ(energy_statistic(Eigen::MatrixXcd::Zero(3, 4)), 0.0);
  Eigen::MatrixXcd r(1, 1);
  r(0, 0) = {3.0, 4.0};
  EXPECT_EQ(energy_statistic(r), 25.0);
  EXPECT_EQ(detector_statistic(r), 50.0);
}

TEST(EdDecide, StrictThreshold) {
  EXPECT_EQ(ed_decide(0.0, 1.0), Hypothesis::H0);
  EXPECT_EQ(ed_decide(2.0, 1.0), Hypothesis::H1);
  EXPECT_EQ(ed_decide(1.5, 1.5), Hypothesis::H0);
  EXPECT_THROW(ed_decide(1.0, -1.0), DomainError);
}

TEST(ResidualSignal, NoiseOnlyMeanEnergy) {
  SystemConfig cfg = load_preset("fig4");
  cfg.residual_var = 0.5 * cfg.noise_var;
  const SystemBudgets b = compute_budgets(cfg);
  RngStream rng(9);
  const int n = 20000;
  double s = 0.0, s2 = 0.0;
  for (int t = 0; t < n; ++t) {
    const ResidualSignal r = residual_signal(cfg, b, {}, rng);
    EXPECT_EQ(r.noise_var_used, cfg.sensing_noise_var());
    const double e = energy_statistic(r.r) / cfg.samples;
    s += e;
    s2 += e * e;
  }
  const double m = s / n, se = std::sqrt((s2 / n - m * m) / n);
  EXPECT_LE(std::abs(m - cfg.n_rx_antennas * cfg.sensing_noise_var()), 3 * se);
}

TEST(ResidualSignal, OnePrimaryMeanEnergy) {
  SystemConfig cfg = load_preset("fig4");
  const SystemBudgets b = compute_budgets(cfg);
  RngStream rng(10);
  const int n = 20000;
  const std::vector<int> one{0};
  double s = 0.0, s2 = 0.0;
  for (int t = 0; t < n; ++t) {
    const double e = energy_statistic(residual_signal(cfg, b, one, rng).r);
    s += e;
    s2 += e * e;
  }
  const double beta = b.primary()[0].beta;
  const double expect = cfg.samples * cfg.n_rx_antennas * (cfg.noise_var + cfg.primary_signal_var * beta);
  const double m = s / n, se = std::sqrt((s2 / n - m * m) / n);
  EXPECT_LE(std::abs(m - expect), 3 * se);
}

TEST(ResidualSignal, SeedReproducible) {
  const SystemConfig cfg = load_preset("fig2");
  const SystemBudgets b = compute_budgets(cfg);
  const std::vector<int> all{0, 1, 2, 3};
  RngStream r1(4), r2(4);
  EXPECT_EQ(residual_signal(cfg, b, all, r1).r, residual_signal(cfg, b, all, r2).r);
}

TEST(ResidualSignal, H0StatisticIsScaledChiSquare) {
  const SystemConfig cfg = load_preset("fig3");
  const SystemBudgets b = compute_budgets(cfg);
  RngStream rng(11);
  const int n = 100000;
  std::vector<double> t(n);
  for (double& v : t) v = detector_statistic(residual_signal(cfg, b, {}, rng).r) / cfg.sensing_noise_var();
  std::sort(t.begin(), t.end());
  const boost::math::chi_squared_distribution<double> chi(2.0 * cfg.n_rx_antennas * cfg.samples);
  const double ks = mc::sup_distance(t, [&](double x) { return boost::math::cdf(chi, x); });
  EXPECT_LT(ks, 1.628 / std::sqrt(double(n)));
}

TEST(FalseAlarm, MatchesAnalyticOnTwentyPointGrid) {
  const SystemConfig cfg = load_preset("fig2");
  const int N = cfg.n_rx_antennas, L = cfg.samples;
  const double n0 = cfg.sensing_noise_var();
  std::vector<double> lam;
  for (int k = 1; k <= 20; ++k) lam.push_back(analytics::threshold_for_target_pf(0.025 * k, N, L, n0));
  std::sort(lam.begin(), lam.end());
  const long n = 1000000;
  const auto est = mc::run_false_alarm(cfg, lam, n, 12);
  for (std::size_t k = 0; k < lam.size(); ++k) {
    const double p = analytics::pf(lam[k], N, L, n0);
    EXPECT_LE(se_gap(est[k], p), 3.0) << "lambda " << lam[k];
  }
}

TEST(ResidualSignal, WeakestModelCarriesLessEnergyThanSuperposition) {
  const SystemConfig cfg = load_preset("fig2");
  const SystemBudgets b = compute_budgets(cfg);
  const std::vector<int> all{0, 1, 2, 3};
  RngStream rng(13);
  double w = 0.0, s = 0.0;
  for (int t = 0; t < 2000; ++t) {
    w += energy_statistic(residual_signal(cfg, b, all, rng, SensingModel::weakest).r);
    s += energy_statistic(residual_signal(cfg, b, all, rng, SensingModel::superposed).r);
  }
  double sum_beta = 0.0;
  for (const auto& l : b.primary()) sum_beta += l.beta;
  const double superposed_mean = cfg.samples * cfg.n_rx_antennas * (cfg.sensing_noise_var() + sum_beta);
  EXPECT_NEAR(s / 2000 / superposed_mean, 1.0, 0.05);
  EXPECT_LT(w, 0.5 * s);
}
