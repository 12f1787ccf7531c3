#pragma once

#include <span>

#include <Eigen/Dense>

#include "cogmux/channel_model.hpp"
#include "cogmux/config.hpp"
#include "cogmux/rng.hpp"

namespace cogmux {

struct ResidualSignal {
  Eigen::MatrixXcd r;  // N x L
  double noise_var_used = 0.0;
};

enum class Hypothesis { H0, H1 };

/// Residual after secondary cancellation: r(l) = sum_{i in active} sqrt(beta_i) c_i s_i(l) + w'(l),
/// w' ~ CN(0, N0 + sigma_eps^2). Channel columns are drawn once per window.
/// `active` holds 0-based primary indices. With SensingModel::weakest only the
/// active primary with the smallest beta_i ||c_i||^2 contributes.
ResidualSignal residual_signal(const SystemConfig& cfg, const SystemBudgets& budgets,
                               std::span<const int> active, RngStream& rng);
ResidualSignal residual_signal(const SystemConfig& cfg, const SystemBudgets& budgets,
                               std::span<const int> active, RngStream& rng, SensingModel model);

/// sum_l ||r(l)||^2
double energy_statistic(const Eigen::MatrixXcd& r);

/// Statistic on the scale of the threshold lambda: 2 sum_l ||r(l)||^2.
/// Under H0, detector_statistic / N0-hat is chi-square with 2NL degrees of freedom.
inline double detector_statistic(double energy) { return 2.0 * energy; }
inline double detector_statistic(const Eigen::MatrixXcd& r) { return 2.0 * energy_statistic(r); }

/// H1 iff T > lambda; a tie decides H0.
Hypothesis ed_decide(double T, double lambda);

}  // namespace cogmux
