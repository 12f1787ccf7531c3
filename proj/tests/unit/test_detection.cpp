#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "cogmux/analytics.hpp"
#include "cogmux/channel_model.hpp"
#include "cogmux/errors.hpp"
#include "cogmux/quadrature.hpp"
#include "generators.hpp"

using namespace cogmux;
namespace an = cogmux::analytics;
using cogmux::testing::for_all;
using cogmux::testing::Gen;

namespace {

// Independent route: Boost gamma functions and the non-central chi-square tail.
double oracle_min_pdf(double x, const std::vector<double>& b, int N) {
  double s = 0.0;
  for (std::size_t t = 0; t < b.size(); ++t) {
    double f = boost::math::gamma_p_derivative(static_cast<double>(N), x / b[t]) / b[t];
    for (std::size_t u = 0; u < b.size(); ++u)
      if (u != t) f *= boost::math::gamma_q(static_cast<double>(N), x / b[u]);
    s += f;
  }
  return s;
}

double oracle_pd_conditional(double y, const an::EdParams& ed, double lambda) {
  const double nc = 2.0 * ed.L * ed.signal_var * y / ed.noise_var;
  if (nc == 0.0) return boost::math::gamma_q(ed.N * ed.L, lambda / (2.0 * ed.noise_var));
  boost::math::non_central_chi_squared d(2.0 * ed.N * ed.L, nc);
  return boost::math::cdf(boost::math::complement(d, lambda / ed.noise_var));
}

double oracle_pd(const an::EdParams& ed, const std::vector<double>& b, double lambda) {
  double hi = 0.0;
  for (double v : b) hi = std::max(hi, v);
  hi *= 80.0 + 4.0 * ed.N;
  auto f = [&](double x) { return oracle_pd_conditional(x, ed, lambda) * oracle_min_pdf(x, b, ed.N); };
  double lo = 0.0, acc = 0.0;
  for (double edge : {hi / 400, hi / 100, hi / 25, hi / 6, hi})
    acc += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, std::exchange(lo, edge), edge, 12, 1e-13);
  return acc;
}

an::EdParams fig5_params(int N) {
  SystemConfig cfg = load_preset("fig5");
  cfg.n_rx_antennas = N;
  return an::EdParams::from(cfg);
}

}  // namespace

TEST(MinGainLaw, Golden) {
  const std::vector<double> b{1.0, 2.0};
  EXPECT_NEAR(an::min_gain_law(1.0, b, 2).cdf, 0.33060951955471051320, 1e-14);
  EXPECT_EQ(an::min_gain_law(0.0, b, 2).cdf, 0.0);
}

TEST(MinGainLaw, SingleAntennaIsExponential) {
  const std::vector<double> b{0.5, 2.0, 4.0};
  const double rate = 1 / 0.5 + 1 / 2.0 + 1 / 4.0;
  for (double x : {0.01, 0.3, 2.0}) {
    const an::GainLaw g = an::min_gain_law(x, b, 1);
    EXPECT_NEAR(g.cdf, -std::expm1(-rate * x), 1e-14);
    EXPECT_NEAR(g.pdf, rate * std::exp(-rate * x), 1e-13);
  }
}

TEST(MinGainLaw, PdfMatchesOracleAndIntegratesToOne) {
  for_all(40, 41, [](Gen& g, int) {
    const int N = g.integer(1, 6), m = g.integer(1, 4);
    const std::vector<double> b = g.positive_vector(m, 0.05, 5.0);
    for (double x : {0.01, 0.2, 1.0, 4.0})
      EXPECT_NEAR(an::min_gain_law(x, b, N).pdf, oracle_min_pdf(x, b, N), 1e-10 * (1.0 + oracle_min_pdf(x, b, N)));
    const double hi = an::min_gain_upper_quantile(b, N, 1e-16);
    const double total = quad::integrate([&](double x) { return an::min_gain_law(x, b, N).pdf; }, 0.0, hi).value;
    EXPECT_NEAR(total, 1.0, 1e-8) << cogmux::testing::show(b);
  });
}

TEST(MinGainLaw, MixtureAndExpansionAgree) {
  for_all(40, 42, [](Gen& g, int) {
    const int N = g.integer(1, 5), m = g.integer(1, 4);
    const std::vector<double> b = g.positive_vector(m, 0.1, 3.0);
    const an::GammaMixture mix = an::min_gain_mixture(b, N);
    double wsum = 0.0;
    for (const auto& t : mix.terms) wsum += t.second;
    EXPECT_NEAR(wsum, 1.0, 1e-10);
    for (double x : {0.05, 0.5, 2.0}) {
      const double ref = an::min_gain_law(x, b, N).pdf;
      EXPECT_NEAR(mix.pdf(x), ref, 1e-10 * (1.0 + ref));
      EXPECT_NEAR(an::min_gain_pdf_expanded(x, b, N), ref, 1e-10 * (1.0 + ref));
    }
  });
}

TEST(FalseAlarm, Examples) {
  EXPECT_EQ(an::pf(0.0, 3, 4, 1.0), 1.0);
  EXPECT_NEAR(an::pf(2 * std::log(100.0), 1, 1, 1.0), 0.01, 1e-15);
  EXPECT_NEAR(an::pf(25.0, 2, 5, 1.0), 0.20143110494553577128, 1e-14);
  EXPECT_THROW(an::pf(-1.0, 1, 1, 1.0), DomainError);
  EXPECT_THROW(an::pf(1.0, 0, 1, 1.0), DomainError);
}

TEST(Threshold, Examples) {
  EXPECT_EQ(an::threshold_for_target_pf(1.0, 2, 3, 1.0), 0.0);
  EXPECT_NEAR(an::threshold_for_target_pf(0.01, 1, 1, 1.0), 2 * std::log(100.0), 1e-12);
  EXPECT_NEAR(an::threshold_for_target_pf(0.1, 4, 10, 1.0), 96.578203615267015580, 1e-10);
  EXPECT_NEAR(an::threshold_for_target_pf(0.1, 2, 5, 1.0), 28.411980584305633252, 1e-11);
  EXPECT_THROW(an::threshold_for_target_pf(0.0, 1, 1, 1.0), DomainError);
  EXPECT_THROW(an::threshold_for_target_pf(1.5, 1, 1, 1.0), DomainError);
}

TEST(Threshold, RoundTripProperty) {
  for_all(300, 43, [](Gen& g, int) {
    const int N = g.integer(1, 8), L = g.integer(1, 10);
    const double tau = g.log_uniform(1e-4, 0.9), N0 = g.log_uniform(1e-6, 10.0);
    const double lam = an::threshold_for_target_pf(tau, N, L, N0);
    EXPECT_NEAR(an::pf(lam, N, L, N0), tau, 1e-10 * tau);
  });
}

TEST(PdConditional, Examples) {
  const an::EdParams ed{2, 5, 1.0, 1.0};
  const double lam = an::threshold_for_target_pf(0.1, 2, 5, 1.0);
  EXPECT_NEAR(an::pd_conditional(0.0, ed, lam), 0.1, 1e-12);
  EXPECT_EQ(an::pd_conditional(1.0, ed, 0.0), 1.0);
  EXPECT_NEAR(an::pd_conditional(1.0, ed, lam), 0.53432201859710551530, 1e-12);
}

TEST(PdConditional, MatchesNoncentralChiSquareOracle) {
  for_all(200, 44, [](Gen& g, int) {
    const an::EdParams ed{g.integer(1, 6), g.integer(1, 10), g.log_uniform(0.1, 10.0), g.log_uniform(0.1, 10.0)};
    const double y = g.log_uniform(1e-3, 10.0);
    const double lam = an::threshold_for_target_pf(g.log_uniform(1e-3, 0.5), ed.N, ed.L, ed.noise_var);
    const double ref = oracle_pd_conditional(y, ed, lam);
    EXPECT_NEAR(an::pd_conditional(y, ed, lam), ref, 1e-10);
  });
}

TEST(PdUnconditional, Limits) {
  const an::EdParams ed = fig5_params(2);
  const SystemBudgets b = compute_budgets(load_preset("fig5"));
  const auto betas = b.primary_betas();
  EXPECT_EQ(an::pd_unconditional(ed, betas, 0.0), 1.0);
  EXPECT_LT(an::pd_unconditional(ed, betas, 1e6), 1e-12);
}

TEST(PdUnconditional, Fig5AgainstBoostRoute) {
  const SystemBudgets b = compute_budgets(load_preset("fig5"));
  const auto betas = b.primary_betas();
  for (int N : {2, 4}) {
    const an::EdParams ed = fig5_params(N);
    const double lam = an::threshold_for_target_pf(0.01, ed.N, ed.L, ed.noise_var);
    const double ref = oracle_pd(ed, betas, lam);
    const an::CrossCheck c = an::pd_unconditional_checked(ed, betas, lam);
    EXPECT_TRUE(c.agree()) << c.gap();
    EXPECT_NEAR(c.closed_form, ref, 1e-8) << "N=" << N;
  }
}

TEST(PdUnconditional, Fig5Goldens) {
  struct Case {
    double snr;
    int N;
    double pd;
  };
  for (const Case c : {Case{0, 2, 0.999679167532097}, Case{0, 4, 0.999999952149364}, Case{5, 2, 0.999967554617700},
                       Case{10, 2, 0.999996744005143}}) {
    SystemConfig cfg = with_snr_db(load_preset("fig5"), c.snr);
    cfg.n_rx_antennas = c.N;
    const an::EdParams ed = an::EdParams::from(cfg);
    const double lam = an::threshold_for_target_pf(0.01, ed.N, ed.L, ed.noise_var);
    EXPECT_NEAR(an::pd_unconditional(ed, compute_budgets(cfg).primary_betas(), lam), c.pd, 1e-10)
        << c.snr << " dB, N=" << c.N;
  }
}

TEST(PdUnconditional, RandomGeometriesAgainstBoostRoute) {
  for_all(25, 45, [](Gen& g, int) {
    const an::EdParams ed{g.integer(1, 4), g.integer(1, 6), g.log_uniform(0.2, 5.0), 1.0};
    const std::vector<double> b = g.positive_vector(g.integer(1, 3), 0.05, 2.0);
    const double lam = an::threshold_for_target_pf(g.log_uniform(1e-3, 0.3), ed.N, ed.L, ed.noise_var);
    const double ref = oracle_pd(ed, b, lam);
    EXPECT_NEAR(an::pd_unconditional(ed, b, lam), ref, 1e-7) << cogmux::testing::show(b);
    EXPECT_NEAR(an::pd_unconditional(ed, b, lam, an::Path::quadrature), ref, 1e-7);
  });
}

TEST(PdUnconditional, DetectionDominatesFalseAlarmProperty) {
  for_all(60, 46, [](Gen& g, int) {
    const an::EdParams ed{g.integer(1, 5), g.integer(1, 8), g.log_uniform(0.1, 3.0), g.log_uniform(0.01, 3.0)};
    const std::vector<double> b = g.positive_vector(g.integer(1, 4), 0.01, 3.0);
    const double tau = g.log_uniform(1e-3, 0.9);
    const double lam = an::threshold_for_target_pf(tau, ed.N, ed.L, ed.noise_var);
    EXPECT_GE(an::pd_unconditional(ed, b, lam), tau - 1e-9);
  });
}
