#include <cmath>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "cogmux/analytics.hpp"
#include "cogmux/channel_model.hpp"
#include "cogmux/errors.hpp"
#include "generators.hpp"

using namespace cogmux;
namespace an = cogmux::analytics;
using cogmux::testing::for_all;
using cogmux::testing::Gen;

namespace {

// P[T1 > T0] with T0 ~ chi2(2NL), T1 ~ ncchi2(2NL, 2 L sigma^2 y / N0), by Boost quadrature.
double oracle_auc_conditional(double y, const an::EdParams& ed) {
  const double k = 2.0 * ed.N * ed.L;
  const double nc = 2.0 * ed.L * ed.signal_var * y / ed.noise_var;
  boost::math::chi_squared h0(k);
  boost::math::non_central_chi_squared h1(k, nc);
  auto f = [&](double t) { return boost::math::pdf(h0, t) * boost::math::cdf(boost::math::complement(h1, t)); };
  double lo = 0.0, acc = 0.0;
  for (double edge : {0.5 * k, k, 2 * k, 4 * k, 12 * k + 200})
    acc += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, std::exchange(lo, edge), edge, 12, 1e-14);
  return acc;
}

}  // namespace

TEST(AucConditional, NoSignalIsOneHalf) {
  for (int nl = 1; nl <= 20; ++nl) {
    const an::EdParams ed{1, nl, 1.0, 1.0};
    EXPECT_NEAR(an::auc_conditional(0.0, ed), 0.5, 1e-12) << nl;
  }
}

TEST(AucConditional, StrongSignalIsOne) {
  const an::EdParams ed{2, 5, 1.0, 1.0};
  EXPECT_NEAR(an::auc_conditional(1e4, ed), 1.0, 1e-12);
  EXPECT_THROW(an::auc_conditional(-1.0, ed), DomainError);
}

TEST(AucConditional, Golden) {
  const an::EdParams ed{4, 5, 1.0, 1.0};
  EXPECT_NEAR(an::auc_conditional(0.5, ed), 0.64506558706133960589, 1e-12);
}

TEST(AucConditional, MatchesChiSquareOracle) {
  for_all(60, 51, [](Gen& g, int) {
    const an::EdParams ed{g.integer(1, 6), g.integer(1, 8), g.log_uniform(0.1, 10.0), g.log_uniform(0.1, 10.0)};
    const double y = g.log_uniform(1e-3, 5.0);
    const double ref = oracle_auc_conditional(y, ed);
    EXPECT_NEAR(an::auc_conditional(y, ed), ref, 1e-9);
    const an::CrossCheck c = an::auc_conditional_checked(y, ed);
    EXPECT_TRUE(c.agree()) << c.gap();
  });
}

TEST(AucConditional, IncreasingInSignalProperty) {
  for_all(40, 52, [](Gen& g, int) {
    const an::EdParams ed{g.integer(1, 6), g.integer(1, 10), 1.0, g.log_uniform(0.1, 10.0)};
    double prev = 0.5 - 1e-12;
    for (int k = 0; k <= 40; ++k) {
      const double a = an::auc_conditional(1e-3 * std::pow(1e5, k / 40.0), ed);
      EXPECT_GE(a, prev - 1e-12);
      prev = a;
    }
  });
}

TEST(AucUnconditional, ZeroSignalIsOneHalf) {
  const std::vector<double> b{0.3, 0.7};
  const an::EdParams ed{4, 5, 1.0, 0.0};
  EXPECT_NEAR(an::auc_unconditional(ed, b), 0.5, 1e-12);
  EXPECT_NEAR(an::auc_unconditional(ed, b, an::Path::quadrature), 0.5, 1e-12);
}

TEST(AucUnconditional, MoreSamplesMonotone) {
  const std::vector<double> b{0.2, 0.2};
  double prev = 0.5, first = 0.0;
  for (int L : {1, 2, 5, 10, 20, 50, 100, 200}) {
    const an::EdParams ed{2, L, 1.0, 1.0};
    const double a = an::auc_unconditional(ed, b);
    EXPECT_GT(a, prev) << L;
    EXPECT_LE(a, 1.0);
    if (L == 1) first = a;
    prev = a;
  }
  EXPECT_LT(1.0 - prev, 0.5 * (1.0 - first));
}

TEST(AucUnconditional, Fig4ClosedFormsAgree) {
  for (double snr : {-5.0, 0.0, 5.0}) {
    const SystemConfig cfg = with_snr_db(load_preset("fig4"), snr);
    const an::EdParams ed = an::EdParams::from(cfg);
    const auto betas = compute_budgets(cfg).primary_betas();
    const an::CrossCheck c = an::auc_unconditional_checked(ed, betas);
    EXPECT_TRUE(c.agree()) << snr << " gap " << c.gap();
    EXPECT_NEAR(an::auc_unconditional(ed, betas, an::Path::closed_form, an::AucForm::eq_corrected), c.closed_form,
                1e-9);
    EXPECT_GT(c.closed_form, 0.5);
    EXPECT_LT(c.closed_form, 1.0);
  }
}

TEST(AucUnconditional, Fig4Golden) {
  const SystemConfig cfg = load_preset("fig4");
  const auto betas = compute_budgets(cfg).primary_betas();
  EXPECT_NEAR(an::auc_unconditional(an::EdParams::from(cfg), betas), 0.931776644331549, 1e-9);
}

TEST(AucUnconditional, CorrectedSumMatchesReducedProperty) {
  for_all(30, 53, [](Gen& g, int) {
    const an::EdParams ed{g.integer(1, 4), g.integer(1, 5), g.log_uniform(0.1, 3.0), 1.0};
    const std::vector<double> b = g.positive_vector(g.integer(1, 3), 0.05, 2.0);
    const double red = an::auc_unconditional(ed, b);
    EXPECT_NEAR(an::auc_unconditional(ed, b, an::Path::closed_form, an::AucForm::eq_corrected), red, 1e-8)
        << cogmux::testing::show(b);
    EXPECT_NEAR(an::auc_unconditional(ed, b, an::Path::quadrature), red, 1e-7);
  });
}
