#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "cogmux/analytics.hpp"
#include "cogmux/channel_model.hpp"
#include "cogmux/mmse_detector.hpp"
#include "cogmux/montecarlo.hpp"
#include "cogmux/power_control.hpp"
#include "cogmux/special_functions.hpp"

using namespace cogmux;
namespace an = cogmux::analytics;

static void BM_MarcumQ(benchmark::State& st) {
  const int nu = static_cast<int>(st.range(0));
  double a = 0.5;
  for (auto _ : st) {
    benchmark::DoNotOptimize(special::marcum_q(nu, a, 1.2 * std::sqrt(2.0 * nu)));
    a = a > 8 ? 0.5 : a + 0.37;
  }
}
BENCHMARK(BM_MarcumQ)->Arg(2)->Arg(20)->Arg(80);

static void BM_InverseUpperGamma(benchmark::State& st) {
  const int a = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(special::inv_upper_gamma_reg(a, 0.01));
}
BENCHMARK(BM_InverseUpperGamma)->Arg(10)->Arg(40);

static void BM_PdUnconditional(benchmark::State& st) {
  const SystemConfig cfg = load_preset("fig5");
  const an::EdParams ed = an::EdParams::from(cfg);
  const auto betas = compute_budgets(cfg).primary_betas();
  const double lam = an::threshold_for_target_pf(cfg.pf_target, ed.N, ed.L, ed.noise_var);
  const auto path = st.range(0) ? an::Path::quadrature : an::Path::closed_form;
  for (auto _ : st) benchmark::DoNotOptimize(an::pd_unconditional(ed, betas, lam, path));
}
BENCHMARK(BM_PdUnconditional)->Arg(0)->Arg(1);

static void BM_AucUnconditional(benchmark::State& st) {
  const SystemConfig cfg = load_preset("fig4");
  const an::EdParams ed = an::EdParams::from(cfg);
  const auto betas = compute_budgets(cfg).primary_betas();
  for (auto _ : st) benchmark::DoNotOptimize(an::auc_unconditional(ed, betas));
}
BENCHMARK(BM_AucUnconditional);

static void BM_CdfSinr(benchmark::State& st) {
  const SystemConfig cfg = load_preset("fig6");
  const SystemBudgets b = compute_budgets(cfg);
  const double kappa = sinr_bound(b.links[0]);
  for (auto _ : st) benchmark::DoNotOptimize(an::cdf_sinr(0.5 * kappa, b.links, 0, cfg.n_rx_antennas, cfg.noise_var));
}
BENCHMARK(BM_CdfSinr);

static void BM_SinrDraw(benchmark::State& st) {
  const SystemConfig cfg = load_preset("fig6");
  const SystemBudgets b = compute_budgets(cfg);
  RngStream rng(1);
  for (auto _ : st) {
    const ChannelRealization ch = sample_channel(cfg, b, rng);
    benchmark::DoNotOptimize(sinr_per_stream(ch, b.links, cfg.noise_var, cfg.n_secondary()));
  }
}
BENCHMARK(BM_SinrDraw);

static void BM_Outage(benchmark::State& st) {
  const SystemConfig cfg = load_preset("fig7");
  const SystemBudgets b = compute_budgets(cfg);
  const double kappa = sinr_bound(b.links[0]);
  for (auto _ : st) benchmark::DoNotOptimize(an::outage_probability(cfg, b, 0.5 * kappa));
}
BENCHMARK(BM_Outage);

static void BM_QmaxClosedForm(benchmark::State& st) {
  const std::vector<double> v{0.1, 0.4, 0.9, 1.6, 2.5};
  for (auto _ : st) benchmark::DoNotOptimize(q_max_expectation(v, 4, QmaxMethod::closed_form));
}
BENCHMARK(BM_QmaxClosedForm);
BENCHMARK_MAIN();
