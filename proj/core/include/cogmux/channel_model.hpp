#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cogmux/config.hpp"
#include "cogmux/rng.hpp"

namespace cogmux {

struct LinkBudget {
  double beta = 0.0;
  double beta_hat = 0.0;
  double g_var = 0.0;    // (beta - beta_hat) alpha^2
  double eps_var = 0.0;  // alpha^2 beta_hat + (1 - alpha^2) beta
  double b_r = 0.0;      // equals g_var
};

/// Budgets for every transmitter in global order (secondaries, then primaries).
struct SystemBudgets {
  std::vector<LinkBudget> links;
  int n_secondary = 0;
  double alpha = 1.0;

  std::span<const LinkBudget> secondary() const { return {links.data(), static_cast<std::size_t>(n_secondary)}; }
  std::span<const LinkBudget> primary() const {
    return {links.data() + n_secondary, links.size() - static_cast<std::size_t>(n_secondary)};
  }
  std::vector<double> primary_betas() const;
};

double compute_beta(double p, double d, double omega);
std::vector<double> compute_beta_hat(std::span<const double> betas, double N0);
/// J0(2 pi f_D T_s)
double aging_alpha(double fd_ts);

LinkBudget make_link(double beta, double beta_hat, double alpha);

/// beta from geometry, beta_hat from the MMSE estimate over all M links (zero
/// under perfect estimation), alpha from the config.
SystemBudgets compute_budgets(const SystemConfig& cfg);

struct ChannelRealization {
  Eigen::MatrixXcd G;      // N x M
  Eigen::MatrixXcd E;      // N x M
  Eigen::MatrixXcd H_hat;  // G + E
};

void fill_complex_normal(Eigen::Ref<Eigen::MatrixXcd> m, double var, RngStream& rng);

ChannelRealization sample_channel(int n_rx, std::span<const LinkBudget> links, RngStream& rng);
inline ChannelRealization sample_channel(const SystemConfig& cfg, const SystemBudgets& b, RngStream& rng) {
  return sample_channel(cfg.n_rx_antennas, b.links, rng);
}

}  // namespace cogmux
