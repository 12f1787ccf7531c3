#include "cogmux/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "cogmux/analytics.hpp"
#include "cogmux/channel_model.hpp"
#include "cogmux/errors.hpp"
#include "cogmux/mmse_detector.hpp"
#include "cogmux/power_control.hpp"

namespace cogmux {

namespace an = analytics;

ToleranceProfile ToleranceProfile::from_name(const std::string& name) {
  if (name == "default") return {"default", 1.0};
  if (name == "strict") return {"strict", 0.5};
  throw ConfigError("unknown tolerance profile '" + name + "' (expected default or strict)", 0, "profile");
}

double binomial_se(double p, long n) {
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

double se_gap(const mc::McEstimate& est, double expected) {
  const double se = std::max(est.std_err, binomial_se(expected, est.n_trials));
  const double d = std::abs(est.value - expected);
  if (se == 0.0) return d == 0.0 ? 0.0 : INFINITY;
  return d / se;
}

namespace {

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

CheckResult bound(std::string name, double observed, double tol, std::string detail) {
  return {std::move(name), observed <= tol, observed, tol, std::move(detail), false};
}

CheckResult mc_check(std::string name, const mc::McEstimate& est, double expected, double k) {
  const double g = se_gap(est, expected);
  return bound(std::move(name), g, k,
               fmt("analytic %.6g, monte-carlo %.6g (se %.2g)", expected, est.value, est.std_err));
}

}  // namespace

std::vector<CheckResult> validate_config(const SystemConfig& cfg, const ValidationOptions& opt) {
  validate(cfg);
  if (opt.trials < 1) throw DomainError("validate: trials must be >= 1");
  const double s = opt.profile.scale;
  const double k_se = 3.0 * s;
  std::vector<CheckResult> out;

  const SystemBudgets bud = compute_budgets(cfg);
  const std::vector<double> pb = bud.primary_betas();
  const an::EdParams ed = an::EdParams::from(cfg);
  const int N = cfg.n_rx_antennas, L = cfg.samples;
  const double n0s = cfg.sensing_noise_var();
  const double tau = cfg.pf_target;
  const double lam = an::threshold_for_target_pf(tau, N, L, n0s);
  std::uint64_t stream = 0;
  auto next_seed = [&] { return derive_stream_seed(opt.seed, stream++); };

  out.push_back(bound("threshold round-trip", std::abs(an::pf(lam, N, L, n0s) - tau), 1e-10 * s,
                      fmt("tau %.3g, lambda* %.10g", tau, lam)));

  const an::CrossCheck pd = an::pd_unconditional_checked(ed, pb, lam);
  out.push_back(bound("pd closed form vs quadrature", pd.gap(), 1e-6 * s,
                      fmt("closed %.12g, quadrature %.12g", pd.closed_form, pd.quadrature)));

  const an::CrossCheck auc = an::auc_unconditional_checked(ed, pb);
  out.push_back(bound("auc closed form vs quadrature", auc.gap(), 1e-5 * s,
                      fmt("closed %.12g, quadrature %.12g", auc.closed_form, auc.quadrature)));

  const auto pf_mc = mc::run_false_alarm(cfg, {lam}, opt.trials, next_seed());
  out.push_back(mc_check("false alarm vs monte-carlo", pf_mc[0], tau, k_se));

  const mc::McEstimate pd_mc = mc::run_detection(cfg, lam, opt.trials, next_seed(), SensingModel::weakest);
  out.push_back(mc_check("detection vs monte-carlo", pd_mc, pd.closed_form, k_se));

  {
    mc::ExperimentSpec sp{cfg, mc::Metric::auc, {0.0}, std::max(1L, opt.trials / 2), next_seed()};
    sp.config.sensing_model = SensingModel::weakest;
    out.push_back(mc_check("auc vs monte-carlo", mc::run_auc(sp), auc.closed_form, k_se));
  }

  {
    const int i = cfg.stream_index - 1;
    const mc::SinrSamples smp = mc::sample_sinr(cfg, std::max(1L, opt.trials / 2), next_seed());
    auto F = [&](double x) { return an::cdf_sinr(x, bud.links, i, N, cfg.noise_var); };
    out.push_back(bound("sinr cdf vs closed-form sinr draws", mc::sup_distance(smp.approx, F), 0.01 * s,
                        "sup-distance, empirical law of the closed-form sinr"));
    CheckResult ex = bound("sinr cdf vs exact sinr draws", mc::sup_distance(smp.exact, F), 0.03 * s,
                           "sup-distance, empirical law of the first-line sinr (approximation, reported only)");
    ex.informational = true;
    out.push_back(ex);
  }

  if (cfg.n_primary() <= 16) {
    const double kappa = sinr_bound(bud.links[cfg.stream_index - 1]);
    std::vector<double> grid;
    for (double u : {0.2, 0.4, 0.6, 0.8}) grid.push_back(u * kappa);
    mc::ExperimentSpec sp{cfg, mc::Metric::outage, grid, opt.trials, next_seed()};
    const mc::McCurve oc = mc::run_outage(sp);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double a = an::outage_probability(cfg, bud, grid[k]);
      out.push_back(mc_check(fmt("outage vs monte-carlo at u=%.1f", grid[k] / kappa), oc.y[k], a, k_se));
    }
  }

  if (cfg.has_interference_gains()) {
    const PowerPlan plan = plan_powers(cfg);
    const std::vector<double>& bR = plan.b.back();
    const double qq = q_max_expectation(bR, N);
    const double qc = q_max_expectation(bR, N, QmaxMethod::closed_form);
    out.push_back(bound("q_max closed form vs quadrature", std::abs(qc - qq) / qq, 1e-8 * s,
                        fmt("quadrature %.12g, closed %.12g", qq, qc)));
    const mc::McEstimate qm = mc::run_qmax(bR, N, opt.trials, next_seed());
    out.push_back(bound("q_max vs monte-carlo", std::abs(qm.value - qq) / qm.std_err, k_se,
                        fmt("quadrature %.6g, monte-carlo %.6g (se %.2g)", qq, qm.value, qm.std_err)));
    for (int j = 0; j < cfg.n_primary(); ++j) {
      const std::vector<double> sc = interference_scales(cfg, plan, j);
      double p;
      try {
        p = interference_exceed_prob(sc, cfg.w_th_w);
      } catch (const DegenerateScalesError&) {
        p = interference_exceed_prob_erlang(sc, cfg.w_th_w);
      }
      out.push_back(mc_check(fmt("interference vs monte-carlo at primary %.0f", j + 1.0),
                             mc::run_exponential_sum(sc, cfg.w_th_w, opt.trials, next_seed()), p, k_se));
    }
  }
  return out;
}

bool all_passed(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed || c.informational; });
}

void print_report(std::ostream& os, const std::vector<CheckResult>& checks) {
  for (const CheckResult& c : checks) {
    const char* tag = c.informational ? "INFO" : (c.passed ? "PASS" : "FAIL");
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-4s %-44s %.3g <= %.3g", tag, c.name.c_str(), c.observed, c.tolerance);
    os << buf << "  " << c.detail << '\n';
  }
  std::size_t bad = 0;
  for (const CheckResult& c : checks) bad += !(c.passed || c.informational);
  os << (bad ? "FAIL" : "PASS") << ": " << checks.size() - bad << "/" << checks.size() << " checks\n";
}

}  // namespace cogmux
