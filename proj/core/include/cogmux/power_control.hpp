#pragma once

#include <span>
#include <vector>

#include "cogmux/config.hpp"

namespace cogmux {

enum class QmaxMethod {
  quadrature,        // integral of x f_max(x) with the product-form density
  closed_form,       // inclusion-exclusion over subsets with rates 1/b
  closed_form_printed,  // the printed multi-index sum (scales used as rates), for comparison only
};

/// E[max_i X_i], X_i ~ Gamma(shape N, scale b_i) independent.
double q_max_expectation(std::span<const double> b, int N, QmaxMethod method = QmaxMethod::quadrature);

/// (1/p_max + Q/w_th)^-1
double node_power(double Q, double w_th, double p_max);
/// min(p_max, w_th/Q)
double node_power_hard_min(double Q, double w_th, double p_max);

struct PowerPlan {
  double p_R = 0.0;
  double Q_R = 0.0;
  std::vector<double> p;  // per secondary transmitter
  std::vector<double> Q;
  std::vector<std::vector<double>> b;  // b-vector per node: secondaries, then R (last)
};

/// Ceilings from the q-bar geometry. Node n sees primary t with
/// beta = p_t qbar(t, n) and b = (beta - beta_hat) alpha^2; the receiver uses N
/// antennas, transmitters a single one.
PowerPlan plan_powers(const SystemConfig& cfg, double w_th);
inline PowerPlan plan_powers(const SystemConfig& cfg) { return plan_powers(cfg, cfg.w_th_w); }

/// Scales p_i qbar(j, i) of the m_c + 1 interfering powers at primary j (0-based).
std::vector<double> interference_scales(const SystemConfig& cfg, const PowerPlan& plan, int j);

/// Pr[sum of independent exponentials with the given means > w_th] by partial
/// fractions. Throws DegenerateScalesError if two means agree within 1e-9 relative.
double interference_exceed_prob(std::span<const double> scales, double w_th);

/// Same probability from the gamma-series (Erlang mixture) representation of
/// the sum; valid for any scales including coincident ones. Throws
/// ConvergenceError past 20000 terms (largest/smallest scale of a few hundred).
double interference_exceed_prob_erlang(std::span<const double> scales, double w_th);

}  // namespace cogmux
