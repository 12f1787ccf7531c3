#include <algorithm>
#include <cmath>

#include "cogmux/analytics.hpp"
#include "cogmux/errors.hpp"

namespace cogmux::analytics {

double outage_probability(const SystemConfig& cfg, const SystemBudgets& budgets, double gamma_th, OutageMode mode) {
  if (!(gamma_th >= 0)) throw DomainError("outage_probability: gamma_th must be >= 0");
  const int mp = cfg.n_primary();
  if (mp > 16) throw DomainError("outage_probability: more than 16 primaries would need 2^m_p subsets");
  if (gamma_th == 0.0) return 0.0;

  const EdParams ed = EdParams::from(cfg);
  const double lambda = threshold_for_target_pf(cfg.pf_target, ed.N, ed.L, ed.noise_var);
  const auto sec = budgets.secondary();
  const auto prim = budgets.primary();
  const int i = cfg.stream_index - 1;
  const double pa = cfg.activity_prob;

  auto sinr_cdf_with = [&](const std::vector<int>& active) {
    std::vector<LinkBudget> links(sec.begin(), sec.end());
    for (int k : active) links.push_back(prim[k]);
    return cdf_sinr(gamma_th, links, i, cfg.n_rx_antennas, cfg.noise_var);
  };
  auto miss_with = [&](const std::vector<int>& active) {
    std::vector<double> b;
    for (int k : active) b.push_back(prim[k].beta);
    return 1.0 - pd_unconditional(ed, b, lambda);
  };

  const double idle = (1.0 - pf(lambda, ed.N, ed.L, ed.noise_var)) * std::pow(1.0 - pa, mp) * sinr_cdf_with({});
  double total = idle;
  if (mode == OutageMode::paper_literal) {
    for (int k = 1; k <= mp; ++k) {
      std::vector<int> active;
      for (int t = 0; t < k; ++t) active.push_back(t);
      total += miss_with(active) * std::pow(pa, k) * std::pow(1.0 - pa, mp - k) * sinr_cdf_with(active);
    }
  } else {
    for (unsigned mask = 1; mask < (1u << mp); ++mask) {
      std::vector<int> active;
      for (int t = 0; t < mp; ++t)
        if (mask & (1u << t)) active.push_back(t);
      const int k = static_cast<int>(active.size());
      const double pr = std::pow(pa, k) * std::pow(1.0 - pa, mp - k);
      if (pr == 0.0) continue;
      total += pr * miss_with(active) * sinr_cdf_with(active);
    }
  }
  return std::clamp(total, 0.0, 1.0);
}

}  // namespace cogmux::analytics
