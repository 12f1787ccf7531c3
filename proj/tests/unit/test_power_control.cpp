#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "cogmux/errors.hpp"
#include "cogmux/power_control.hpp"
#include "generators.hpp"

using namespace cogmux;
using cogmux::testing::for_all;
using cogmux::testing::Gen;

namespace {

// E[max] as the integral of the survival function of the maximum.
double oracle_qmax(const std::vector<double>& b, int N) {
  auto surv = [&](double x) {
    double p = 1.0;
    for (double v : b) p *= boost::math::gamma_p(static_cast<double>(N), x / v);
    return 1.0 - p;
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      surv, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-14);
}

// Hypoexponential tail through the Laplace-domain partial fractions, written independently.
double oracle_exceed(const std::vector<double>& s, double w) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double c = 1.0;
    for (std::size_t k = 0; k < s.size(); ++k)
      if (k != i) c *= s[i] / (s[i] - s[k]);
    acc += c * std::exp(-w / s[i]);
  }
  return acc;
}

}  // namespace

TEST(QMax, Golden) {
  const std::vector<double> b{0.5, 1.0, 2.0};
  EXPECT_NEAR(q_max_expectation(b, 2), 4.4022327733814614281, 1e-10);
  EXPECT_NEAR(q_max_expectation(b, 2, QmaxMethod::closed_form), 4.4022327733814614281, 1e-10);
}

TEST(QMax, SingleNodeIsGammaMean) {
  for (int N : {1, 3, 8}) {
    const std::vector<double> b{0.7};
    EXPECT_NEAR(q_max_expectation(b, N), 0.7 * N, 1e-11);
    EXPECT_NEAR(q_max_expectation(b, N, QmaxMethod::closed_form), 0.7 * N, 1e-12);
  }
}

TEST(QMax, TwoExponentials) {
  const std::vector<double> b{1.0, 3.0};
  EXPECT_NEAR(q_max_expectation(b, 1), 1.0 + 3.0 - 1.0 / (1.0 + 1.0 / 3.0), 1e-11);
}

TEST(QMax, ClosedFormQuadratureAndOracleAgree) {
  for_all(60, 61, [](Gen& g, int) {
    const int N = g.integer(1, 6);
    const std::vector<double> b = g.positive_vector(g.integer(1, 6), 1e-3, 10.0);
    const double ref = oracle_qmax(b, N);
    EXPECT_NEAR(q_max_expectation(b, N), ref, 1e-8 * ref) << cogmux::testing::show(b);
    EXPECT_NEAR(q_max_expectation(b, N, QmaxMethod::closed_form), ref, 1e-8 * ref) << cogmux::testing::show(b);
  });
}

TEST(QMax, BoundsProperty) {
  for_all(100, 62, [](Gen& g, int) {
    const int N = g.integer(1, 6);
    const std::vector<double> b = g.positive_vector(g.integer(1, 6), 1e-3, 10.0);
    double mx = 0.0, sum = 0.0;
    for (double v : b) {
      mx = std::max(mx, v);
      sum += v;
    }
    const double q = q_max_expectation(b, N);
    EXPECT_GE(q, N * mx * (1 - 1e-12));
    EXPECT_LE(q, N * sum * (1 + 1e-12));
  });
}

TEST(QMax, RejectsBadInput) {
  EXPECT_THROW(q_max_expectation(std::vector<double>{}, 2), DomainError);
  EXPECT_THROW(q_max_expectation(std::vector<double>{1.0, 0.0}, 2), DomainError);
  EXPECT_THROW(q_max_expectation(std::vector<double>{1.0}, 0), DomainError);
}

TEST(NodePower, Forms) {
  EXPECT_NEAR(node_power(0.0, 1.0, 0.1), 0.1, 1e-15);
  EXPECT_NEAR(node_power(2.0, 0.5, 0.1), 1.0 / (10.0 + 4.0), 1e-15);
  EXPECT_EQ(node_power_hard_min(2.0, 0.5, 0.1), 0.1);
  EXPECT_EQ(node_power_hard_min(2.0, 0.1, 0.1), 0.05);
  EXPECT_THROW(node_power(1.0, 0.0, 0.1), DomainError);
  EXPECT_THROW(node_power(-1.0, 1.0, 0.1), DomainError);
}

TEST(NodePower, SoftBelowHardProperty) {
  for_all(200, 63, [](Gen& g, int) {
    const double Q = g.log_uniform(1e-4, 1e2), w = g.log_uniform(1e-4, 1.0), p = g.log_uniform(1e-3, 1.0);
    EXPECT_LE(node_power(Q, w, p), node_power_hard_min(Q, w, p) * (1 + 1e-15));
    EXPECT_GE(node_power(Q, w, p), 0.5 * node_power_hard_min(Q, w, p) * (1 - 1e-15));
  });
}

TEST(PowerPlan, Fig8) {
  const SystemConfig cfg = load_preset("fig8");
  const PowerPlan plan = plan_powers(cfg);
  ASSERT_EQ(plan.p.size(), 1u);
  ASSERT_EQ(plan.b.size(), 2u);
  EXPECT_GT(plan.p_R, 0.0);
  EXPECT_LE(plan.p_R, cfg.p_max_w);
  EXPECT_NEAR(plan.p_R, node_power(plan.Q_R, cfg.w_th_w, cfg.p_max_w), 1e-15);
  EXPECT_NEAR(plan.Q_R, q_max_expectation(plan.b[1], cfg.n_rx_antennas), 1e-15);
  const auto s = interference_scales(cfg, plan, 0);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(s[1], plan.p_R * cfg.interference_gains(0, 1), 1e-15);
  EXPECT_THROW(interference_scales(cfg, plan, 4), DomainError);
}

TEST(PowerPlan, NeedsGeometry) {
  EXPECT_THROW(plan_powers(load_preset("fig2")), ConfigError);
}

TEST(InterferenceTail, Examples) {
  const std::vector<double> one{0.3};
  EXPECT_NEAR(interference_exceed_prob(one, 0.6), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(interference_exceed_prob_erlang(one, 0.6), std::exp(-2.0), 1e-14);
  const std::vector<double> two{0.1, 0.2};
  EXPECT_EQ(interference_exceed_prob(two, 0.0), 1.0);
  EXPECT_NEAR(interference_exceed_prob(two, 0.5), 2 * std::exp(-2.5) - std::exp(-5.0), 1e-15);
}

TEST(InterferenceTail, DegenerateScalesUseErlang) {
  const std::vector<double> same{0.2, 0.2, 0.2};
  EXPECT_THROW(interference_exceed_prob(same, 0.5), DegenerateScalesError);
  const double x = 0.5 / 0.2;
  EXPECT_NEAR(interference_exceed_prob_erlang(same, 0.5), std::exp(-x) * (1 + x + x * x / 2), 1e-14);
}

TEST(InterferenceTail, SpreadScalesRejectedByErlang) {
  const std::vector<double> s{1e-4, 1.0};
  EXPECT_THROW(interference_exceed_prob_erlang(s, 0.5), ConvergenceError);
  EXPECT_NEAR(interference_exceed_prob(s, 0.5), oracle_exceed(s, 0.5), 1e-15);
}

TEST(InterferenceTail, FormsAgreeProperty) {
  for_all(200, 64, [](Gen& g, int) {
    const std::vector<double> s = g.distinct_positive(g.integer(1, 5), 0.01, 1.0, 0.1);
    const double w = g.log_uniform(1e-3, 3.0);
    const double ref = oracle_exceed(s, w);
    EXPECT_NEAR(interference_exceed_prob(s, w), ref, 1e-9 * (1 + std::abs(ref)));
    EXPECT_NEAR(interference_exceed_prob_erlang(s, w), interference_exceed_prob(s, w), 1e-9)
        << cogmux::testing::show(s);
  });
}
